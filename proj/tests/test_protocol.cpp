#include <doctest.h>

#include <cmath>

#include "qsense/protocol.hpp"
#include "qsense/states.hpp"

using namespace qsense;

namespace {

ProtocolConfig small_config(int two_s, int n_sites) {
  ProtocolConfig cfg;
  cfg.model.s = SpinValue{two_s};
  cfg.model.n_sites = n_sites;
  cfg.t_grid = TimeGrid{0.0, 20.0, 0.1};
  return cfg;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("fast kernel agrees with the dense reference path") {
  for (const auto& [two_s, n_sites] : {std::pair{1, 4}, std::pair{2, 3}, std::pair{3, 3}}) {
    ProtocolConfig cfg = small_config(two_s, n_sites);
    cfg.fd_step = 1e-8;
    const SensingEngine engine(cfg);
    for (double t : {0.0, 3.7, 11.3, 26.9}) {
      const TimeRecord fast = engine.record_at(t);
      const TimeRecord ref = run_once_reference(cfg, t);
      CHECK(fast.p_plus == doctest::Approx(ref.p_plus).epsilon(1e-9));
      CHECK(fast.fidelity == doctest::Approx(ref.fidelity).epsilon(1e-9));
      CHECK(fast.qfi == doctest::Approx(ref.qfi).epsilon(1e-7));
      // The reference derivative is the finite-difference oracle.
      if (std::abs(ref.dp_domega) > 1.0) {
        CHECK(fast.dp_domega == doctest::Approx(ref.dp_domega).epsilon(1e-5));
        CHECK(fast.delta_omega_sqrt_tall ==
              doctest::Approx(ref.delta_omega_sqrt_tall).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("analytic derivative matches the 4-point finite difference") {
  ProtocolConfig cfg = small_config(3, 3);
  cfg.fd_step = 1e-8;
  const SensingEngine engine(cfg);
  for (double t : {1.3, 7.9, 15.7, 23.1, 40.9}) {
    const TimeRecord rec = engine.record_at(t);
    const double fd = engine.dp_domega_fd(t);
    if (std::abs(rec.dp_domega) > 1.0) {
      CHECK(fd == doctest::Approx(rec.dp_domega).epsilon(1e-5));
    }
  }
}

TEST_CASE("reversal identity: omega = 0 makes the readout time-independent") {
  ProtocolConfig cfg = small_config(2, 3);
  cfg.model.omega = 0.0;
  const SensingEngine engine(cfg);

  // With omega = 0 the target unitary is the identity, so step 3 exactly
  // undoes step 1 and p+ equals its t* = 0 value everywhere.
  const double p0 = engine.prob_plus(0.0, 0.0);
  for (double t : {2.2, 9.1, 17.3}) {
    CHECK(engine.prob_plus(t, 0.0) == doctest::Approx(p0).epsilon(1e-8));
  }

  // Dense cross-check of the baseline value.
  const QOperator h = build_sensor(cfg.model);
  const QState gibbs = thermal_state(h, cfg.model.beta);
  arma::vec coeffs(cfg.model.local_dim(), arma::fill::zeros);
  coeffs(0) = 1.0;
  coeffs(coeffs.n_elem - 1) = 1.0;
  const QOperator m1 = boundary_projector(cfg.model.s, cfg.model.n_sites, coeffs);
  const QState collapsed = measure_and_collapse(gibbs, m1).first;
  const QOperator pi_plus =
      boundary_projector(cfg.model.s, cfg.model.n_sites, coeffs, TopPhase::imag);
  const double dense = std::real(arma::trace(pi_plus.mat * collapsed.density()));
  CHECK(p0 == doctest::Approx(dense).epsilon(1e-10));

  // The derivative stays well-defined and nonzero at a good t*.
  const TimeRecord rec = engine.record_at(9.1);
  CHECK(std::isfinite(rec.dp_domega));
  CHECK(std::abs(rec.dp_domega) > 1e-6);
}

TEST_CASE("t* = 0 is a finite baseline") {
  const ProtocolConfig cfg = small_config(1, 4);
  const TimeRecord rec = run_once(cfg, 0.0);
  CHECK(std::isfinite(rec.delta_omega_sqrt_tall));
  CHECK(rec.delta_omega_sqrt_tall > 0.0);
  CHECK(rec.p_plus == doctest::Approx(0.5).epsilon(0.2));  // boundary qudit starts near the equator
}

TEST_CASE("scan summary fields are mutually consistent") {
  ProtocolConfig cfg = small_config(1, 4);
  cfg.t_grid = TimeGrid{0.0, 100.0, 0.02};
  const SensingResult res = scan(cfg);
  REQUIRE(res.records.size() == cfg.t_grid.points());

  double best = res.records.front().delta_omega_sqrt_tall;
  for (const TimeRecord& r : res.records) best = std::min(best, r.delta_omega_sqrt_tall);
  CHECK(res.summary.delta_omega_min == doctest::Approx(best));
  CHECK(res.summary.delta_adv ==
        doctest::Approx(res.summary.delta_omega_min - res.summary.hl));
  CHECK(res.summary.m1_probability > 0.0);
  CHECK(res.summary.m1_probability < 1.0);

  // The sub-SQL window is nonempty for the Table-I chain and brackets the min.
  CHECK(res.summary.window_width > 0.0);
  CHECK(res.summary.t_star_at_min >= res.summary.window_lo);
  CHECK(res.summary.t_star_at_min <= res.summary.window_hi);

  // Every record respects the dimension bound on QFI.
  const double bound = qfi_upper_bound(cfg.model.s, cfg.model.n_sites);
  for (const TimeRecord& r : res.records) CHECK(r.qfi <= bound * (1 + 1e-9));
}

TEST_CASE("serial and parallel scans are bitwise identical") {
  ProtocolConfig cfg = small_config(2, 3);
  cfg.t_grid = TimeGrid{0.0, 10.0, 0.05};
  const SensingResult a = scan(cfg, ExecPolicy::serial);
  const SensingResult b = scan(cfg, ExecPolicy::parallel);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].delta_omega_sqrt_tall == b.records[i].delta_omega_sqrt_tall);
    CHECK(a.records[i].qfi == b.records[i].qfi);
    CHECK(a.records[i].p_plus == b.records[i].p_plus);
    CHECK(a.records[i].fidelity == b.records[i].fidelity);
  }
}

TEST_CASE("basis scan prerequisites and feasibility") {
  ProtocolConfig cfg = small_config(1, 3);
  CHECK_THROWS_AS(optimize_basis(cfg, 1.0), std::invalid_argument);  // d != 4

  ProtocolConfig cfg4 = small_config(3, 3);
  cfg4.basis_opt = BasisGrid{-0.9, 0.9, 7};  // corners exceed a1^2 + a2^2 = 1
  const BasisMap map = optimize_basis(cfg4, 5.0);
  CHECK(!std::isfinite(map.fidelity(0, 0)));  // (-0.9, -0.9) infeasible
  const int mid = 3;
  CHECK(std::isfinite(map.fidelity(mid, mid)));
  CHECK(map.best_fidelity > 0.0);

  // Feasible boundary point: a1^2 + a2^2 = 1 evaluates with a0 = a3 = 0.
  ProtocolConfig cfg_b = small_config(3, 3);
  auto ctx = SensingEngine::make_context(cfg_b);
  const arma::vec boundary = {0.0, 1.0, 0.0, 0.0};
  const SensingEngine probe(ctx, cfg_b, boundary);
  CHECK(std::isfinite(probe.step1_fidelity(5.0)));
}

TEST_CASE("gamma fit recovers a planted exponent") {
  std::vector<TimeRecord> records;
  for (double t = 0.05; t <= 60.0; t += 0.05) {
    TimeRecord r;
    r.t_star = t;
    r.qfi = 2.5 * t * t * (1.0 + 0.3 * std::sin(5.0 * t));
    records.push_back(r);
  }
  const GammaFit fit = fit_gamma(records);
  CHECK(fit.gamma == doctest::Approx(2.0).epsilon(0.025));
  CHECK(fit.peak_indices.size() >= 5);

  // Too few peaks: a clean monotone trace has no interior maxima.
  std::vector<TimeRecord> flat;
  for (double t = 0.1; t <= 10.0; t += 0.1) {
    TimeRecord r;
    r.t_star = t;
    r.qfi = t;
    flat.push_back(r);
  }
  CHECK_THROWS_AS(fit_gamma(flat), std::runtime_error);
}

TEST_CASE("alpha optimization improves the integer-spin gain") {
  ProtocolConfig cfg;
  cfg.model.s = SpinValue{2};  // s = 1
  cfg.model.n_sites = 4;
  cfg.model.alpha = 1.0;  // marks the NNN model; the grid overrides the value
  cfg.t_grid = TimeGrid{0.0, 120.0, 0.05};

  ProtocolConfig nn = cfg;
  nn.model.alpha.reset();
  const SensingResult res_nn = scan(nn);

  const AlphaOptResult opt = optimize_alpha(cfg, AlphaGrid{1.0, 2.6, 0.2});
  CHECK(opt.alpha_star >= 1.0);
  CHECK(opt.alpha_star <= 2.6);
  CHECK(opt.result.summary.delta_adv < res_nn.summary.delta_adv);
  CHECK(opt.trace.size() == 9);

  ProtocolConfig no_alpha = cfg;
  no_alpha.model.alpha.reset();
  CHECK_THROWS_AS(optimize_alpha(no_alpha, AlphaGrid{1.0, 2.0, 0.5}), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  ProtocolConfig cfg = small_config(1, 4);
  cfg.t_grid.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config(1, 4);
  cfg.fd_step = 1.0;  // cannot resolve the target phases
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg = small_config(1, 4);
  cfg.weight_cutoff = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  // Zero measurement vector.
  ProtocolConfig ok = small_config(1, 3);
  auto ctx = SensingEngine::make_context(ok);
  CHECK_THROWS_AS(SensingEngine(ctx, ok, arma::vec(2, arma::fill::zeros)),
                  std::invalid_argument);
}

}  // TEST_SUITE
