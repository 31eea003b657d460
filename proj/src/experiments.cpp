#include "qsense/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsense/evolution.hpp"
#include "qsense/randomstates.hpp"
#include "qsense/version.hpp"

namespace qsense {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV with a '#' metadata block; everything after the header row is stable
// across reruns, only the wall-time line varies.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const ExperimentConfig& cfg,
          const std::string& columns, const std::vector<std::string>& extra = {}) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cli: cannot open output file " + path.string());
    out_ << "# qudit-sense v" << kVersion << "\n";
    if (cfg.experiment) out_ << "# experiment: " << to_string(*cfg.experiment) << "\n";
    out_ << "# config: " << config_echo(cfg) << "\n";
    out_ << "# seed: " << cfg.seed << "\n";
    out_ << "# rng: " << kRngAlgorithm << "\n";
    for (const std::string& line : extra) out_ << "# " << line << "\n";
    start_ = std::chrono::steady_clock::now();
    out_ << columns << "\n";
  }

  ~CsvFile() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    out_ << "# wall_time_s: " << fmt(secs) << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ",";
      out_ << fmt(values[i]);
    }
    out_ << "\n";
  }

  void raw(const std::string& line) { out_ << line << "\n"; }

 private:
  std::ofstream out_;
  std::chrono::steady_clock::time_point start_;
};

void write_json_mirror(const std::filesystem::path& csv_path, const nlohmann::json& doc) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  std::ofstream out(p);
  out << doc.dump(2) << "\n";
}

std::string spin_tag(SpinValue s) {
  std::ostringstream os;
  os << s.s();
  return os.str();
}

std::vector<SpinValue> default_spins(ExperimentKind kind, const ExperimentConfig& cfg) {
  if (!cfg.spins.empty()) return cfg.spins;
  switch (kind) {
    case ExperimentKind::table1:
      return {SpinValue{1}, SpinValue{2}, SpinValue{3}, SpinValue{4}, SpinValue{5}, SpinValue{6}};
    case ExperimentKind::fig3:
      return {SpinValue{1}, SpinValue{3}, SpinValue{5}};
    case ExperimentKind::fig2:
      return {SpinValue{3}};
    case ExperimentKind::sweep:
      return {cfg.model.s};
    default:
      // table2, fig1, fig4, fig5 follow the published s = 1/2 .. 5/2 range.
      return {SpinValue{1}, SpinValue{2}, SpinValue{3}, SpinValue{4}, SpinValue{5}};
  }
}

// ---------------------------------------------------------------------------
// Individual experiments.

void experiment_table1(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  CsvFile csv(dir / "table1.csv", cfg, "s,sql,hl,delta_omega_min,t_star_at_min,delta_adv");
  nlohmann::json mirror = nlohmann::json::array();
  for (SpinValue s : default_spins(ExperimentKind::table1, cfg)) {
    const SensingResult res = scan(cfg.protocol_for(s));
    const ScanSummary& sum = res.summary;
    csv.row({s.s(), sum.sql, sum.hl, sum.delta_omega_min, sum.t_star_at_min, sum.delta_adv});
    mirror.push_back({{"s", s.s()},
                      {"sql", sum.sql},
                      {"hl", sum.hl},
                      {"delta_omega_min", sum.delta_omega_min},
                      {"t_star_at_min", sum.t_star_at_min},
                      {"delta_adv", sum.delta_adv},
                      {"window_width", sum.window_width},
                      {"m1_probability", sum.m1_probability}});
  }
  if (cfg.write_json) write_json_mirror(dir / "table1.csv", mirror);
}

void experiment_table2(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  CsvFile csv(dir / "table2.csv", cfg, "s,gamma,n_peaks");
  for (SpinValue s : default_spins(ExperimentKind::table2, cfg)) {
    const SensingResult res = scan(cfg.protocol_for(s));
    const GammaFit fit = fit_gamma(res.records);
    csv.row({s.s(), fit.gamma, static_cast<double>(fit.peak_indices.size())});
  }
}

void experiment_fig1(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  for (SpinValue s : default_spins(ExperimentKind::fig1, cfg)) {
    const QfiHistogram hist = qfi_distribution(cfg.model.n_sites, s, cfg.n_samples,
                                               cfg.seed, cfg.n_bins);
    const auto path = dir / ("fig1_s" + spin_tag(s) + ".csv");
    CsvFile csv(path, cfg, "bin_lo,bin_hi,frequency",
                {"reference_qfi_sep: " + fmt(hist.reference_qfi),
                 "mean: " + fmt(hist.mean), "stddev: " + fmt(hist.stddev),
                 "samples: " + std::to_string(hist.count),
                 "max_sampled: " + fmt(hist.max_sampled),
                 "frequency normalization: counts/samples (divide by bin width for a density)"});
    for (arma::uword b = 0; b < hist.frequencies.n_elem; ++b) {
      csv.row({hist.edges(b), hist.edges(b + 1), hist.frequencies(b)});
    }
  }
}

void experiment_fig2(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  const std::vector<SpinValue> spins = default_spins(ExperimentKind::fig2, cfg);
  ProtocolConfig pc = cfg.protocol_for(spins.front());
  const BasisMap map = optimize_basis(pc, cfg.fig2_t_star);
  CsvFile csv(dir / "fig2.csv", cfg, "a1,a2,fidelity,feasible",
              {"t_star: " + fmt(cfg.fig2_t_star),
               "argmax_a1: " + fmt(map.best_a1), "argmax_a2: " + fmt(map.best_a2),
               "max_fidelity: " + fmt(map.best_fidelity)});
  for (arma::uword i = 0; i < map.a1.n_elem; ++i) {
    for (arma::uword j = 0; j < map.a2.n_elem; ++j) {
      const double f = map.fidelity(i, j);
      csv.row({map.a1(i), map.a2(j), f, std::isfinite(f) ? 1.0 : 0.0});
    }
  }
}

void write_trace(const ExperimentConfig& cfg, const std::filesystem::path& path,
                 const SensingResult& res) {
  CsvFile csv(path, cfg, "t_star,delta_omega_sqrt_tall,p_plus,dp_domega,fidelity,qfi",
              {"sql: " + fmt(res.summary.sql), "hl: " + fmt(res.summary.hl),
               "delta_omega_min: " + fmt(res.summary.delta_omega_min),
               "t_star_at_min: " + fmt(res.summary.t_star_at_min),
               "window: [" + fmt(res.summary.window_lo) + ", " + fmt(res.summary.window_hi) + "]",
               "m1_probability: " + fmt(res.summary.m1_probability)});
  for (const TimeRecord& r : res.records) {
    csv.row({r.t_star, r.delta_omega_sqrt_tall, r.p_plus, r.dp_domega, r.fidelity, r.qfi});
  }
}

void experiment_fig3(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  for (SpinValue s : default_spins(ExperimentKind::fig3, cfg)) {
    const SensingResult res = scan(cfg.protocol_for(s));
    write_trace(cfg, dir / ("fig3_s" + spin_tag(s) + ".csv"), res);
  }
}

void experiment_fig4(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  CsvFile csv(dir / "fig4.csv", cfg,
              "s,alpha,delta_adv_nn,delta_adv_nnn,delta_omega_min_nn,delta_omega_min_nnn,hl");
  for (SpinValue s : default_spins(ExperimentKind::fig4, cfg)) {
    ProtocolConfig nn = cfg.protocol_for(s);
    nn.model.alpha.reset();
    const SensingResult res_nn = scan(nn);

    ProtocolConfig nnn = cfg.protocol_for(s);
    double alpha = 0;
    SensingResult res_nnn;
    if (cfg.fig4_optimize) {
      nnn.model.alpha = cfg.alpha_grid.lo;
      const AlphaOptResult opt = optimize_alpha(nnn, cfg.alpha_grid);
      alpha = opt.alpha_star;
      res_nnn = opt.result;
    } else {
      const auto it = cfg.fig4_alpha.find(s.two_s);
      if (it == cfg.fig4_alpha.end()) {
        throw std::runtime_error("cli: no fig4 alpha configured for s=" + spin_tag(s));
      }
      alpha = it->second;
      nnn.model.alpha = alpha;
      res_nnn = scan(nnn);
    }
    csv.row({s.s(), alpha, res_nn.summary.delta_adv, res_nnn.summary.delta_adv,
             res_nn.summary.delta_omega_min, res_nnn.summary.delta_omega_min,
             res_nn.summary.hl});
  }
}

void experiment_fig5(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  for (SpinValue s : default_spins(ExperimentKind::fig5, cfg)) {
    const SensingResult res = scan(cfg.protocol_for(s));
    GammaFit fit;
    bool fitted = true;
    try {
      fit = fit_gamma(res.records);
    } catch (const std::exception&) {
      fitted = false;
    }
    std::vector<std::string> meta;
    if (fitted) {
      meta.push_back("gamma: " + fmt(fit.gamma));
      meta.push_back("log_amplitude: " + fmt(fit.log_amplitude));
    } else {
      meta.push_back("gamma: nan (too few peaks)");
    }
    const auto path = dir / ("fig5_s" + spin_tag(s) + ".csv");
    CsvFile csv(path, cfg, "t_star,qfi,is_envelope_peak", meta);
    std::vector<char> mark(res.records.size(), 0);
    if (fitted) {
      for (std::size_t idx : fit.peak_indices) mark[idx] = 1;
    }
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      csv.row({res.records[i].t_star, res.records[i].qfi, static_cast<double>(mark[i])});
    }
  }
}

void experiment_sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  for (SpinValue s : default_spins(ExperimentKind::sweep, cfg)) {
    ProtocolConfig pc = cfg.protocol_for(s);
    SensingResult res;
    if (cfg.engine == EnginePath::reference) {
      res.records.resize(pc.t_grid.points());
      for (std::size_t i = 0; i < res.records.size(); ++i) {
        res.records[i] = run_once_reference(pc, pc.t_grid.at(i));
      }
      const PrecisionLimits lim =
          precision_limits(pc.model.s, pc.model.n_sites, pc.effective_n_eff(), pc.model.t_int);
      res.summary.sql = lim.sql;
      res.summary.hl = lim.hl;
      std::size_t best = 0;
      for (std::size_t i = 1; i < res.records.size(); ++i) {
        if (res.records[i].delta_omega_sqrt_tall < res.records[best].delta_omega_sqrt_tall)
          best = i;
      }
      res.summary.delta_omega_min = res.records[best].delta_omega_sqrt_tall;
      res.summary.t_star_at_min = res.records[best].t_star;
      res.summary.delta_adv = res.summary.delta_omega_min - lim.hl;
    } else {
      res = scan(pc);
    }
    write_trace(cfg, dir / ("sweep_s" + spin_tag(s) + ".csv"), res);
  }
}

void experiment_validate(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                         int& exit_status) {
  const std::vector<CheckResult> checks = validate_suite();
  CsvFile csv(dir / "validate.csv", cfg, "check,passed,detail");
  bool all = true;
  std::printf("%-52s %s\n", "check", "result");
  for (const CheckResult& c : checks) {
    all = all && c.passed;
    std::printf("%-52s %s%s%s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                c.detail.empty() ? "" : "  ", c.detail.c_str());
    csv.raw(c.name + "," + (c.passed ? "1" : "0") + "," + c.detail);
  }
  std::printf("validate: %s\n", all ? "all checks passed" : "FAILURES present");
  exit_status = all ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cross-module invariant suite (the `validate` experiment).

std::vector<CheckResult> validate_suite() {
  std::vector<CheckResult> out;
  const auto check = [&out](const std::string& name, bool ok, const std::string& detail = "") {
    out.push_back({name, ok, detail});
  };

  // su(2) algebra and Casimir for every s up to 3.
  {
    bool comm_ok = true, casimir_ok = true, eig_ok = true;
    for (int two_s = 1; two_s <= 6; ++two_s) {
      const SpinValue s{two_s};
      const arma::cx_mat sx = spin_matrix(s, Axis::x).mat;
      const arma::cx_mat sy = spin_matrix(s, Axis::y).mat;
      const arma::cx_mat sz = spin_matrix(s, Axis::z).mat;
      comm_ok &= arma::norm(sx * sy - sy * sx - cx(0, 1) * sz, "inf") < 1e-10;
      comm_ok &= arma::norm(sy * sz - sz * sy - cx(0, 1) * sx, "inf") < 1e-10;
      comm_ok &= arma::norm(sz * sx - sx * sz - cx(0, 1) * sy, "inf") < 1e-10;
      casimir_ok &= arma::norm(sx * sx + sy * sy + sz * sz -
                                   spin_matrix(s, Axis::squared).mat, "inf") < 1e-10;
      arma::vec ev = arma::sort(arma::eig_sym(sz));
      arma::vec expect = arma::linspace(-s.s(), s.s(), s.dim());
      eig_ok &= arma::norm(ev - expect, "inf") < 1e-12;
    }
    check("spin: su(2) commutators (s <= 3)", comm_ok);
    check("spin: Casimir S^2 = s(s+1) I (s <= 3)", casimir_ok);
    check("spin: S^z spectrum {-s..s}", eig_ok);
  }

  // Propagator unitarity and group law at a representative chain.
  {
    ModelSpec model;
    model.s = SpinValue{3};
    model.n_sites = 3;
    const SpectralCache cache = diagonalize(build_sensor(model));
    const arma::cx_mat u1 = propagator(cache, 0.7).mat;
    const arma::cx_mat u2 = propagator(cache, 1.9).mat;
    const arma::cx_mat u12 = propagator(cache, 2.6).mat;
    const arma::cx_mat eye = arma::cx_mat(arma::eye(cache.dim(), cache.dim()),
                                          arma::mat(cache.dim(), cache.dim(), arma::fill::zeros));
    const double unit = arma::norm(u1 * u1.t() - eye, "inf");
    const double group = arma::norm(u1 * u2 - u12, "inf");
    const double at_zero = arma::norm(propagator(cache, 0.0).mat - eye, "inf");
    check("evolution: U U^dag = 1 within 1e-9", unit < 1e-9, fmt(unit));
    check("evolution: U(t1) U(t2) = U(t1+t2) within 1e-9", group < 1e-9, fmt(group));
    check("evolution: U(0) = 1", at_zero < 1e-12, fmt(at_zero));
  }

  // Thermal closed form at dimension 2.
  {
    arma::cx_mat h(2, 2, arma::fill::zeros);
    h(1, 1) = 1.0;
    const QState g = thermal_state(QOperator::single_site(h), std::log(3.0));
    const double err = std::abs(g.density()(0, 0).real() - 0.75) +
                       std::abs(g.density()(1, 1).real() - 0.25);
    check("states: thermal closed form diag(3/4, 1/4)", err < 1e-12, fmt(err));
  }

  // Partial-trace purity cases.
  {
    const SpinValue s{2};
    const ReferenceStates ref = reference_states(s, 3);
    const double pur_ent = partial_trace_last(ref.ent).purity();
    const double pur_sep = partial_trace_last(ref.sep).purity();
    check("states: GHZ reduced purity 1/2", std::abs(pur_ent - 0.5) < 1e-10, fmt(pur_ent));
    check("states: product-state reduced purity 1", std::abs(pur_sep - 1.0) < 1e-10,
          fmt(pur_sep));
  }

  // Protocol reversal at omega = 0, t_int -> 0+ and the derivative cross-check.
  {
    ProtocolConfig pc;
    pc.model.s = SpinValue{2};
    pc.model.n_sites = 3;
    pc.model.omega = 0.0;
    pc.model.t_int = 1e-9;  // t_int > 0 is required; the reversal limit
    const double t_star = 13.57;

    const QOperator h = build_sensor(pc.model);
    const SpectralCache cache = diagonalize(h);
    const QState gibbs = thermal_state(h, pc.model.beta);
    arma::vec coeffs(pc.model.local_dim(), arma::fill::zeros);
    coeffs(0) = 1.0;
    coeffs(pc.model.local_dim() - 1) = 1.0;
    const QOperator m1 = boundary_projector(pc.model.s, pc.model.n_sites, coeffs);
    const QState collapsed = measure_and_collapse(gibbs, m1).first;
    const QState forward = evolve(collapsed, cache, t_star);
    const QState back = evolve(forward, cache, -t_star);
    const double rev = arma::norm(back.density() - collapsed.density(), "inf");
    check("protocol: step-3 reversal returns the post-measured state", rev < 1e-8, fmt(rev));
  }
  {
    ProtocolConfig pc;
    pc.model.s = SpinValue{3};
    pc.model.n_sites = 3;
    pc.fd_step = 1e-8;
    const SensingEngine engine(pc);
    bool ok = true;
    double worst = 0;
    for (double t : {7.3, 19.9, 36.1, 57.7}) {
      const TimeRecord rec = engine.record_at(t);
      const double fd = engine.dp_domega_fd(t);
      if (std::abs(rec.dp_domega) > 1.0) {
        const double rel = std::abs(fd - rec.dp_domega) / std::abs(rec.dp_domega);
        worst = std::max(worst, rel);
        ok &= rel < 1e-5;
      }
    }
    check("protocol: analytic dp/domega matches 4-point FD (rel 1e-5)", ok, fmt(worst));
  }

  return out;
}

int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.experiment) throw ConfigError("config: no experiment selected");
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
  std::filesystem::create_directories(out_dir);
  int status = 0;
  switch (*cfg.experiment) {
    case ExperimentKind::table1: experiment_table1(cfg, out_dir); break;
    case ExperimentKind::table2: experiment_table2(cfg, out_dir); break;
    case ExperimentKind::fig1: experiment_fig1(cfg, out_dir); break;
    case ExperimentKind::fig2: experiment_fig2(cfg, out_dir); break;
    case ExperimentKind::fig3: experiment_fig3(cfg, out_dir); break;
    case ExperimentKind::fig4: experiment_fig4(cfg, out_dir); break;
    case ExperimentKind::fig5: experiment_fig5(cfg, out_dir); break;
    case ExperimentKind::sweep: experiment_sweep(cfg, out_dir); break;
    case ExperimentKind::validate: experiment_validate(cfg, out_dir, status); break;
  }
  return status;
}

}  // namespace qsense
