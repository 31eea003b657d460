#include <doctest.h>

#include <cmath>

#include "qsense/config.hpp"

using namespace qsense;

TEST_SUITE("config") {

TEST_CASE("empty document yields the Table-I defaults") {
  const ExperimentConfig cfg = parse_config("{}");
  CHECK(cfg.model.n_sites == 4);
  CHECK(cfg.model.beta == doctest::Approx(10.0));
  CHECK(cfg.model.omega == doctest::Approx(1e-6));
  CHECK(cfg.model.t_int == doctest::Approx(500.0 * pi));
  CHECK(cfg.model.field == doctest::Approx(0.1));
  CHECK(cfg.model.coupling == doctest::Approx(-1.0));
  CHECK_FALSE(cfg.model.alpha.has_value());
  CHECK(cfg.t_grid.t_min == doctest::Approx(0.0));
  CHECK(cfg.t_grid.t_max == doctest::Approx(120.0));
  CHECK(cfg.t_grid.step == doctest::Approx(0.01));
  CHECK(cfg.seed == 1);
  CHECK(cfg.n_samples == 10000);
  CHECK_FALSE(cfg.experiment.has_value());
}

TEST_CASE("spin lists are parsed and validated") {
  const ExperimentConfig cfg = parse_config(R"({"s": [0.5, 1.5]})");
  REQUIRE(cfg.spins.size() == 2);
  CHECK(cfg.spins[0].two_s == 1);
  CHECK(cfg.spins[1].two_s == 3);

  const ExperimentConfig single = parse_config(R"({"s": 2})");
  REQUIRE(single.spins.size() == 1);
  CHECK(single.spins[0].two_s == 4);

  CHECK_THROWS_AS(parse_config(R"({"s": [0.7]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"s": "half"})"), ConfigError);
}

TEST_CASE("alpha engages the NNN model") {
  const ExperimentConfig cfg = parse_config(R"({"s": 1, "model": {"alpha": 1.76}})");
  REQUIRE(cfg.model.alpha.has_value());
  CHECK(*cfg.model.alpha == doctest::Approx(1.76));
  const ProtocolConfig pc = cfg.protocol_for(cfg.spins[0]);
  CHECK(pc.model.alpha.has_value());

  const ExperimentConfig off = parse_config(R"({"model": {"alpha": null}})");
  CHECK_FALSE(off.model.alpha.has_value());
}

TEST_CASE("unknown keys are hard errors") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"modle": {}})"),
                       doctest::Contains("unknown key 'modle'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"model": {"NN": 4}})"),
                       doctest::Contains("model.NN"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"t_grid": {"mim": 0}})"),
                       doctest::Contains("t_grid.mim"), ConfigError);
}

TEST_CASE("type and range errors") {
  CHECK_THROWS_AS(parse_config(R"({"model": {"beta": -2}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"model": {"N": 1}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config(R"({"model": {"beta": "cold"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": -4})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"samples": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"output": {"format": "xml"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"engine": "warp"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"(["not", "an", "object"])"), ConfigError);
}

TEST_CASE("parse errors carry a line reference") {
  const std::string broken = "{\n  \"s\": 1,\n  \"seed\": ,\n}";
  try {
    parse_config(broken);
    FAIL("expected a parse error");
  } catch (const ConfigError& ex) {
    CHECK(std::string(ex.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("experiment names round-trip") {
  for (const char* name :
       {"table1", "table2", "fig1", "fig2", "fig3", "fig4", "fig5", "sweep", "validate"}) {
    const auto kind = experiment_from_string(name);
    REQUIRE(kind.has_value());
    CHECK(std::string(to_string(*kind)) == name);
  }
  CHECK_FALSE(experiment_from_string("fig9").has_value());

  const ExperimentConfig cfg = parse_config(R"({"experiment": "table1"})");
  REQUIRE(cfg.experiment.has_value());
  CHECK(*cfg.experiment == ExperimentKind::table1);
}

TEST_CASE("fig4 alpha overrides") {
  const ExperimentConfig cfg = parse_config(R"({"fig4_alpha": {"1": 1.5, "2.5": 3.0}})");
  CHECK(cfg.fig4_alpha.at(2) == doctest::Approx(1.5));
  CHECK(cfg.fig4_alpha.at(5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(parse_config(R"({"fig4_alpha": {"x": 1.0}})"), ConfigError);

  // Defaults carry the published optimal pairs.
  const ExperimentConfig d = parse_config("{}");
  CHECK(d.fig4_alpha.at(1) == doctest::Approx(2.89));
  CHECK(d.fig4_alpha.at(2) == doctest::Approx(1.76));
  CHECK(d.fig4_alpha.at(3) == doctest::Approx(3.56));
  CHECK(d.fig4_alpha.at(4) == doctest::Approx(2.39));
  CHECK(d.fig4_alpha.at(5) == doctest::Approx(3.41));
}

TEST_CASE("config echo is stable") {
  const ExperimentConfig cfg = parse_config(R"({"s": [0.5], "seed": 9})");
  const std::string echo = config_echo(cfg);
  CHECK(echo.find("\"seed\":9") != std::string::npos);
  CHECK(echo.find("\"J\":-1.0") != std::string::npos);
}

}  // TEST_SUITE
