#include "qsense/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qsense {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::table1: return "table1";
    case ExperimentKind::table2: return "table2";
    case ExperimentKind::fig1: return "fig1";
    case ExperimentKind::fig2: return "fig2";
    case ExperimentKind::fig3: return "fig3";
    case ExperimentKind::fig4: return "fig4";
    case ExperimentKind::fig5: return "fig5";
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::validate: return "validate";
  }
  return "?";
}

std::optional<ExperimentKind> experiment_from_string(const std::string& name) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"table1", ExperimentKind::table1}, {"table2", ExperimentKind::table2},
      {"fig1", ExperimentKind::fig1},     {"fig2", ExperimentKind::fig2},
      {"fig3", ExperimentKind::fig3},     {"fig4", ExperimentKind::fig4},
      {"fig5", ExperimentKind::fig5},     {"sweep", ExperimentKind::sweep},
      {"validate", ExperimentKind::validate}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void expect_keys(const json& obj, const std::string& where,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail("unknown key '" + where + key + "'");
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail("'" + where + key + "' must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) fail("'" + where + key + "' must be an integer");
  return obj[key].get<int>();
}

SpinValue parse_spin(const json& v, const std::string& where) {
  if (!v.is_number()) fail("'" + where + "' entries must be numbers");
  try {
    return SpinValue::from_double(v.get<double>());
  } catch (const std::invalid_argument& ex) {
    fail(std::string(ex.what()));
  }
}

// Line number of a byte offset, for parse diagnostics.
std::size_t line_of(const std::string& text, std::size_t byte) {
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

}  // namespace

ProtocolConfig ExperimentConfig::protocol_for(SpinValue s) const {
  ProtocolConfig pc;
  pc.model = model;
  pc.model.s = s;
  pc.t_grid = t_grid;
  pc.fd_step = fd_step;
  pc.n_eff = n_eff.value_or(0);
  pc.basis_opt = basis_grid;
  return pc;
}

void ExperimentConfig::validate() const {
  model.validate();
  t_grid.validate();
  if (n_samples < 1) fail("samples must be >= 1");
  if (n_bins < 1) fail("bins must be >= 1");
  if (threads < 0) fail("threads must be >= 0");
  if (n_eff && *n_eff < 1) fail("n_eff must be >= 1");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError("config: line " + std::to_string(line_of(json_text, ex.byte)) + ": " +
                      ex.what());
  }
  if (!doc.is_object()) fail("top-level document must be a JSON object");

  expect_keys(doc, "",
              {"experiment", "s", "model", "t_grid", "alpha_grid", "basis_grid", "fd_step",
               "n_eff", "seed", "threads", "samples", "bins", "fig2_t_star", "fig4_alpha",
               "fig4_optimize", "output", "engine"});

  ExperimentConfig cfg;
  // Published optimal (s, alpha) pairs for the NNN comparison.
  cfg.fig4_alpha = {{1, 2.89}, {2, 1.76}, {3, 3.56}, {4, 2.39}, {5, 3.41}};

  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_string()) fail("'experiment' must be a string");
    const auto kind = experiment_from_string(doc["experiment"].get<std::string>());
    if (!kind) fail("unknown experiment '" + doc["experiment"].get<std::string>() + "'");
    cfg.experiment = kind;
  }

  if (doc.contains("s")) {
    const json& s = doc["s"];
    if (s.is_array()) {
      for (const json& v : s) cfg.spins.push_back(parse_spin(v, "s"));
    } else {
      cfg.spins.push_back(parse_spin(s, "s"));
    }
    if (cfg.spins.empty()) fail("'s' must name at least one spin");
  }

  if (doc.contains("model")) {
    const json& m = doc["model"];
    if (!m.is_object()) fail("'model' must be an object");
    expect_keys(m, "model.",
                {"N", "J", "h", "beta", "omega", "t_int", "alpha", "nnn_middle"});
    cfg.model.n_sites = get_int(m, "model.", "N", cfg.model.n_sites);
    cfg.model.coupling = get_number(m, "model.", "J", cfg.model.coupling);
    cfg.model.field = get_number(m, "model.", "h", cfg.model.field);
    cfg.model.beta = get_number(m, "model.", "beta", cfg.model.beta);
    cfg.model.omega = get_number(m, "model.", "omega", cfg.model.omega);
    cfg.model.t_int = get_number(m, "model.", "t_int", cfg.model.t_int);
    if (m.contains("alpha")) {
      if (m["alpha"].is_null()) {
        cfg.model.alpha.reset();
      } else if (m["alpha"].is_number()) {
        cfg.model.alpha = m["alpha"].get<double>();
      } else {
        fail("'model.alpha' must be a number or null");
      }
    }
    if (m.contains("nnn_middle")) {
      const std::string mid = m["nnn_middle"].is_string() ? m["nnn_middle"].get<std::string>() : "";
      if (mid == "x") {
        cfg.model.nnn_middle = NnnMiddle::sx;
      } else if (mid == "z") {
        cfg.model.nnn_middle = NnnMiddle::sz;
      } else {
        fail("'model.nnn_middle' must be \"x\" or \"z\"");
      }
    }
  }

  if (doc.contains("t_grid")) {
    const json& g = doc["t_grid"];
    if (!g.is_object()) fail("'t_grid' must be an object");
    expect_keys(g, "t_grid.", {"min", "max", "step"});
    cfg.t_grid.t_min = get_number(g, "t_grid.", "min", cfg.t_grid.t_min);
    cfg.t_grid.t_max = get_number(g, "t_grid.", "max", cfg.t_grid.t_max);
    cfg.t_grid.step = get_number(g, "t_grid.", "step", cfg.t_grid.step);
  }

  if (doc.contains("alpha_grid")) {
    const json& g = doc["alpha_grid"];
    if (!g.is_object()) fail("'alpha_grid' must be an object");
    expect_keys(g, "alpha_grid.", {"min", "max", "step"});
    cfg.alpha_grid.lo = get_number(g, "alpha_grid.", "min", cfg.alpha_grid.lo);
    cfg.alpha_grid.hi = get_number(g, "alpha_grid.", "max", cfg.alpha_grid.hi);
    cfg.alpha_grid.step = get_number(g, "alpha_grid.", "step", cfg.alpha_grid.step);
  }

  if (doc.contains("basis_grid")) {
    const json& g = doc["basis_grid"];
    if (!g.is_object()) fail("'basis_grid' must be an object");
    expect_keys(g, "basis_grid.", {"min", "max", "points"});
    cfg.basis_grid.lo = get_number(g, "basis_grid.", "min", cfg.basis_grid.lo);
    cfg.basis_grid.hi = get_number(g, "basis_grid.", "max", cfg.basis_grid.hi);
    cfg.basis_grid.points = get_int(g, "basis_grid.", "points", cfg.basis_grid.points);
  }

  cfg.fd_step = get_number(doc, "", "fd_step", cfg.fd_step);
  if (doc.contains("n_eff")) cfg.n_eff = get_int(doc, "", "n_eff", 0);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      fail("'seed' must be a nonnegative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.threads = get_int(doc, "", "threads", cfg.threads);
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_integer() || doc["samples"].get<long long>() < 1) {
      fail("'samples' must be a positive integer");
    }
    cfg.n_samples = doc["samples"].get<std::uint64_t>();
  }
  cfg.n_bins = get_int(doc, "", "bins", cfg.n_bins);
  cfg.fig2_t_star = get_number(doc, "", "fig2_t_star", cfg.fig2_t_star);

  if (doc.contains("fig4_alpha")) {
    const json& fa = doc["fig4_alpha"];
    if (!fa.is_object()) fail("'fig4_alpha' must map spin values to alpha");
    cfg.fig4_alpha.clear();
    for (const auto& [key, value] : fa.items()) {
      json parsed_key;
      try {
        parsed_key = json::parse(key);
      } catch (const json::parse_error&) {
        fail("'fig4_alpha' keys must be spin values, got '" + key + "'");
      }
      SpinValue s = parse_spin(parsed_key, "fig4_alpha key");
      if (!value.is_number()) fail("'fig4_alpha' values must be numbers");
      cfg.fig4_alpha[s.two_s] = value.get<double>();
    }
  }
  if (doc.contains("fig4_optimize")) {
    if (!doc["fig4_optimize"].is_boolean()) fail("'fig4_optimize' must be a boolean");
    cfg.fig4_optimize = doc["fig4_optimize"].get<bool>();
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) fail("'output' must be an object");
    expect_keys(o, "output.", {"format"});
    if (o.contains("format")) {
      const std::string f = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (f == "csv") {
        cfg.write_json = false;
      } else if (f == "csv+json") {
        cfg.write_json = true;
      } else {
        fail("'output.format' must be \"csv\" or \"csv+json\"");
      }
    }
  }

  if (doc.contains("engine")) {
    const std::string e = doc["engine"].is_string() ? doc["engine"].get<std::string>() : "";
    if (e == "fast") {
      cfg.engine = EnginePath::fast;
    } else if (e == "reference") {
      cfg.engine = EnginePath::reference;
    } else {
      fail("'engine' must be \"fast\" or \"reference\"");
    }
  }

  cfg.validate();
  return cfg;
}

std::string config_echo(const ExperimentConfig& cfg) {
  json doc;
  if (cfg.experiment) doc["experiment"] = to_string(*cfg.experiment);
  json spins = json::array();
  for (const SpinValue& s : cfg.spins) spins.push_back(s.s());
  doc["s"] = spins;
  doc["model"] = {{"N", cfg.model.n_sites},
                  {"J", cfg.model.coupling},
                  {"h", cfg.model.field},
                  {"beta", cfg.model.beta},
                  {"omega", cfg.model.omega},
                  {"t_int", cfg.model.t_int}};
  if (cfg.model.alpha) {
    doc["model"]["alpha"] = *cfg.model.alpha;
    doc["model"]["nnn_middle"] = cfg.model.nnn_middle == NnnMiddle::sx ? "x" : "z";
  }
  doc["t_grid"] = {{"min", cfg.t_grid.t_min}, {"max", cfg.t_grid.t_max}, {"step", cfg.t_grid.step}};
  doc["fd_step"] = cfg.fd_step;
  if (cfg.n_eff) doc["n_eff"] = *cfg.n_eff;
  doc["seed"] = cfg.seed;
  doc["threads"] = cfg.threads;
  doc["samples"] = cfg.n_samples;
  doc["bins"] = cfg.n_bins;
  doc["engine"] = cfg.engine == EnginePath::fast ? "fast" : "reference";
  return doc.dump();
}

}  // namespace qsense
