#include "qsense/protocol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "qsense/states.hpp"

extern "C" void openblas_set_num_threads(int);

namespace qsense {

namespace {

// All scans run BLAS single-threaded: the outer loops own the parallelism,
// and a fixed BLAS split keeps every result bitwise independent of the
// configured thread count.
void pin_blas_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

constexpr double kZeroProb = 1e-14;

}  // namespace

std::size_t TimeGrid::points() const {
  return static_cast<std::size_t>(std::floor((t_max - t_min) / step + 1e-9)) + 1;
}

void TimeGrid::validate() const {
  if (step <= 0) throw std::invalid_argument("protocol: t* grid step must be > 0");
  if (t_max < t_min) throw std::invalid_argument("protocol: t* grid is empty");
  if (t_min < 0) throw std::invalid_argument("protocol: t* must be >= 0");
}

void ProtocolConfig::validate() const {
  model.validate();
  t_grid.validate();
  if (fd_step <= 0) throw std::invalid_argument("protocol: fd_step must be > 0");
  const double phase_scale =
      pi / (model.t_int * model.n_sites * std::max(model.s.s(), 0.5));
  if (fd_step >= phase_scale) {
    throw std::invalid_argument("protocol: fd_step too large to resolve target phases");
  }
  if (n_eff < 0) throw std::invalid_argument("protocol: n_eff must be >= 0");
  if (!(weight_cutoff > 0) || weight_cutoff > 1e-6) {
    throw std::invalid_argument("protocol: weight_cutoff must be in (0, 1e-6]");
  }
}

// ---------------------------------------------------------------------------
// Shared per-model precomputation.

class SensorContext {
 public:
  ModelSpec model;
  int n = 0, d = 0, m = 0;  // total dim, local dim, dim of the non-boundary block
  SpectralCache cache;      // eigensystem of H_sen (real basis)
  arma::mat v;              // real eigenvector matrix
  arma::mat v_bottom;       // rows [0, m)        -> site-1 label 0
  arma::mat v_top;          // rows [n - m, n)    -> site-1 label d-1
  arma::mat gibbs_factor;   // V_kept * diag(sqrt(w_kept)), so rho_ini ~= F F^T
  arma::vec mz;             // diagonal of J^z in the computational basis
  double gibbs_weight_kept = 0;  // trace retained after the cutoff

  static std::shared_ptr<const SensorContext> make(const ProtocolConfig& cfg) {
    pin_blas_threads();
    cfg.validate();
    auto ctx = std::make_shared<SensorContext>();
    ctx->model = cfg.model;
    const QOperator h = cfg.model.alpha ? build_sensor_nnn(cfg.model) : build_sensor(cfg.model);
    ctx->cache = diagonalize(h);
    if (!ctx->cache.real_basis) {
      throw std::runtime_error("protocol: sensor Hamiltonian unexpectedly complex");
    }
    ctx->n = ctx->cache.dim();
    ctx->d = cfg.model.local_dim();
    ctx->m = ctx->n / ctx->d;
    ctx->v = arma::real(ctx->cache.eigenvectors);
    ctx->v_bottom = ctx->v.rows(0, ctx->m - 1);
    ctx->v_top = ctx->v.rows(ctx->n - ctx->m, ctx->n - 1);

    // Gibbs weights relative to the ground energy; negligible weights are
    // dropped so the factored state keeps only the thermally occupied block.
    const arma::vec& e = ctx->cache.eigenvalues;
    arma::vec w = arma::exp(-cfg.model.beta * (e - e.min()));
    w /= arma::accu(w);
    const arma::uvec keep = arma::find(w > cfg.weight_cutoff * w.max());
    ctx->gibbs_weight_kept = arma::accu(w.elem(keep));
    ctx->gibbs_factor = ctx->v.cols(keep);
    for (arma::uword j = 0; j < keep.n_elem; ++j) {
      ctx->gibbs_factor.col(j) *= std::sqrt(w(keep(j)));
    }

    ctx->mz.set_size(ctx->n);
    const double s = cfg.model.s.s();
    for (int idx = 0; idx < ctx->n; ++idx) {
      int rest = idx;
      double acc = 0;
      for (int site = 0; site < cfg.model.n_sites; ++site) {
        acc += s - (rest % ctx->d);
        rest /= ctx->d;
      }
      ctx->mz(idx) = acc;
    }
    return ctx;
  }
};

// ---------------------------------------------------------------------------
// Fast kernel.

struct SensingEngine::Impl {
  std::shared_ptr<const SensorContext> ctx;
  ProtocolConfig cfg;
  arma::vec chi;        // step-1 measurement vector on site 1 (real)
  double m1_prob = 0;   // success probability of the M1 outcome
  arma::mat state_eig;  // V^T * Fs: factored post-measurement state, H_sen eigenbasis
  arma::vec w;          // eigenvalues of rho_M1 (descending, truncated)
  int rank = 0;
  arma::cx_vec tdiag;   // exp(-i omega t_int m_z), the step-2 phases
  double sql = 0, hl = 0;

  Impl(std::shared_ptr<const SensorContext> context, const ProtocolConfig& config,
       const arma::vec& m1_coeffs)
      : ctx(std::move(context)), cfg(config) {
    const int n = ctx->n, d = ctx->d, m = ctx->m;
    if (static_cast<int>(m1_coeffs.n_elem) != d) {
      throw std::invalid_argument("protocol: measurement coefficients must have length d");
    }
    const double nrm = arma::norm(m1_coeffs);
    if (nrm < 1e-300) throw std::invalid_argument("protocol: zero measurement vector");
    chi = m1_coeffs / nrm;

    // M1 applied to the Gibbs factor collapses site 1 onto chi:
    // columns become chi (x) y with y = sum_i chi_i f[i-th block].
    const arma::mat& f = ctx->gibbs_factor;
    const int r0 = static_cast<int>(f.n_cols);
    arma::mat y(m, r0, arma::fill::zeros);
    for (int i = 0; i < d; ++i) {
      if (chi(i) != 0.0) y += chi(i) * f.rows(i * m, (i + 1) * m - 1);
    }
    m1_prob = std::pow(arma::norm(y, "fro"), 2);
    if (m1_prob < kZeroProb) {
      throw std::runtime_error("protocol: step-1 outcome has (near-)zero probability");
    }

    // Spectral factorization of rho_M1 through the small Gram matrix.
    arma::vec lam;
    arma::mat q;
    arma::eig_sym(lam, q, arma::mat(y.t() * y), "dc");
    const double lam_total = arma::accu(lam);
    const arma::uvec keep = arma::find(lam > cfg.weight_cutoff * lam.max());
    rank = static_cast<int>(keep.n_elem);
    arma::mat ys = y * q.cols(keep);  // columns with norms sqrt(lambda)
    w.set_size(rank);
    arma::mat fs(n, rank);
    for (int j = 0; j < rank; ++j) {
      w(j) = lam(keep(j)) / lam_total;
      arma::vec col = ys.col(j) / std::sqrt(lam_total);
      for (int i = 0; i < d; ++i) fs.rows(i * m, (i + 1) * m - 1).col(j) = chi(i) * col;
    }
    // Descending weights.
    fs = arma::fliplr(fs);
    w = arma::reverse(w);
    state_eig = ctx->v.t() * fs;

    tdiag = target_phases(cfg.model.omega);
    const PrecisionLimits lim = precision_limits(cfg.model.s, cfg.model.n_sites,
                                                 cfg.effective_n_eff(), cfg.model.t_int);
    sql = lim.sql;
    hl = lim.hl;
  }

  arma::cx_vec target_phases(double omega) const {
    const double angle = omega * cfg.model.t_int;
    arma::cx_vec t(ctx->n);
    for (int k = 0; k < ctx->n; ++k) t(k) = std::polar(1.0, -angle * ctx->mz(k));
    return t;
  }

  // rho(t*) columns in the computational basis: X = U(t) Fs.
  arma::cx_mat evolved_factor(double t) const {
    const arma::vec cph = arma::cos(ctx->cache.eigenvalues * t);
    const arma::vec sph = arma::sin(ctx->cache.eigenvalues * t);
    arma::mat bre = state_eig, bim = state_eig;
    bre.each_col() %= cph;
    bim.each_col() %= -sph;
    return arma::cx_mat(ctx->v * bre, ctx->v * bim);
  }

  // <GHZ_(N-1)| tr_N rho(t*) |GHZ_(N-1)>.
  double fidelity_from(const arma::cx_mat& x) const {
    const int n = ctx->n, d = ctx->d;
    double acc = 0;
    for (int k = 0; k < rank; ++k) {
      for (int j = 0; j < d; ++j) {
        acc += 0.5 * std::norm(x(j, k) + x(n - d + j, k));
      }
    }
    return acc;
  }

  // Spectral-formula QFI of rho(t*) w.r.t. J^z from the factored state.
  // Pairs inside the kept block enter directly; the complement enters
  // exactly through <k|Jz^2|k> - sum_l |<k|Jz|l>|^2.
  double qfi_from(const arma::cx_mat& x) const {
    arma::cx_mat c = x;
    c.each_col() %= arma::cx_vec(ctx->mz, arma::vec(ctx->n, arma::fill::zeros));
    arma::cx_mat mel = x.t() * c;  // x_k^dagger (mz x_l)
    arma::vec j2(rank);
    for (int k = 0; k < rank; ++k) {
      j2(k) = std::pow(arma::norm(c.col(k)), 2) / w(k);
      for (int l = 0; l < rank; ++l) mel(k, l) /= std::sqrt(w(k) * w(l));
    }
    const double eps_sum = 1e-12 * w.max();
    double acc = 0;
    for (int k = 0; k < rank; ++k) {
      double row = 0;
      for (int l = 0; l < rank; ++l) {
        const double sum = w(k) + w(l);
        if (sum <= eps_sum) continue;
        const double diff = w(k) - w(l);
        row += (diff * diff / sum) * std::norm(mel(k, l));
      }
      double off_block = j2(k);
      for (int l = 0; l < rank; ++l) off_block -= std::norm(mel(k, l));
      acc += row + 2.0 * w(k) * std::max(off_block, 0.0);
    }
    return 2.0 * acc;
  }

  // Boundary-qudit contraction of U^dagger(t) applied to the given columns:
  // returns <chi+| block, with chi+ = (|0> + i|d-1>)/sqrt(2).
  arma::cx_mat readout_block(const arma::cx_mat& cols, const arma::vec& cph,
                             const arma::vec& sph) const {
    arma::cx_mat eig = arma::cx_mat(ctx->v.t() * arma::real(cols), ctx->v.t() * arma::imag(cols));
    // conj(phases) = e^{+iEt}.
    eig.each_col() %= arma::cx_vec(cph, sph);
    const arma::mat re = arma::real(eig), im = arma::imag(eig);
    const arma::cx_mat bottom(ctx->v_bottom * re, ctx->v_bottom * im);
    const arma::cx_mat top(ctx->v_top * re, ctx->v_top * im);
    return (bottom - cx(0.0, 1.0) * top) / std::sqrt(2.0);
  }

  struct Readout {
    double p_plus;
    double dp_domega;
  };

  Readout readout(const arma::cx_mat& x, const arma::cx_vec& phases_tar, double t,
                  bool with_derivative) const {
    const arma::vec cph = arma::cos(ctx->cache.eigenvalues * t);
    const arma::vec sph = arma::sin(ctx->cache.eigenvalues * t);
    arma::cx_mat wcols = x;
    wcols.each_col() %= phases_tar;
    const arma::cx_mat z1 = readout_block(wcols, cph, sph);
    Readout out{std::pow(arma::norm(z1, "fro"), 2), 0.0};
    if (with_derivative) {
      arma::cx_mat w2 = wcols;
      w2.each_col() %= arma::cx_vec(ctx->mz, arma::vec(ctx->n, arma::fill::zeros));
      const arma::cx_mat z2 = readout_block(w2, cph, sph);
      const cx overlap = arma::accu(arma::conj(z1) % z2);
      out.dp_domega = 2.0 * cfg.model.t_int * std::imag(overlap);
    }
    return out;
  }

  TimeRecord record_at(double t) const {
    const arma::cx_mat x = evolved_factor(t);
    TimeRecord rec;
    rec.t_star = t;
    rec.fidelity = fidelity_from(x);
    rec.qfi = qfi_from(x);
    const Readout ro = readout(x, tdiag, t, true);
    rec.p_plus = ro.p_plus;
    rec.dp_domega = ro.dp_domega;
    rec.delta_omega_sqrt_tall = uncertainty_from_probability(
        ro.p_plus, ro.dp_domega, 2.0 * t + cfg.model.t_int);
    return rec;
  }

  double prob_plus(double t, double omega) const {
    const arma::cx_mat x = evolved_factor(t);
    return readout(x, target_phases(omega), t, false).p_plus;
  }

  double dp_domega_fd(double t) const {
    const arma::cx_mat x = evolved_factor(t);
    const double h = cfg.fd_step;
    const double om = cfg.model.omega;
    const double pm2 = readout(x, target_phases(om - 2 * h), t, false).p_plus;
    const double pm1 = readout(x, target_phases(om - h), t, false).p_plus;
    const double pp1 = readout(x, target_phases(om + h), t, false).p_plus;
    const double pp2 = readout(x, target_phases(om + 2 * h), t, false).p_plus;
    return (pm2 - 8.0 * pm1 + 8.0 * pp1 - pp2) / (12.0 * h);
  }
};

SensingEngine::SensingEngine(const ProtocolConfig& cfg) {
  auto ctx = SensorContext::make(cfg);
  const int d = cfg.model.local_dim();
  arma::vec coeffs(d, arma::fill::zeros);
  coeffs(0) = 1.0;
  coeffs(d - 1) = 1.0;  // normalized by the engine
  impl_ = std::make_unique<Impl>(std::move(ctx), cfg, coeffs);
}

SensingEngine::SensingEngine(std::shared_ptr<const SensorContext> ctx,
                             const ProtocolConfig& cfg, const arma::vec& m1_coeffs) {
  impl_ = std::make_unique<Impl>(std::move(ctx), cfg, m1_coeffs);
}

SensingEngine::~SensingEngine() = default;
SensingEngine::SensingEngine(SensingEngine&&) noexcept = default;
SensingEngine& SensingEngine::operator=(SensingEngine&&) noexcept = default;

TimeRecord SensingEngine::record_at(double t_star) const { return impl_->record_at(t_star); }
double SensingEngine::prob_plus(double t_star, double omega) const {
  return impl_->prob_plus(t_star, omega);
}
double SensingEngine::dp_domega_fd(double t_star) const { return impl_->dp_domega_fd(t_star); }
double SensingEngine::step1_fidelity(double t_star) const {
  return impl_->fidelity_from(impl_->evolved_factor(t_star));
}
double SensingEngine::m1_probability() const { return impl_->m1_prob; }
const SpectralCache& SensingEngine::sensor_cache() const { return impl_->ctx->cache; }

std::shared_ptr<const SensorContext> SensingEngine::make_context(const ProtocolConfig& cfg) {
  return SensorContext::make(cfg);
}

TimeRecord run_once(const ProtocolConfig& cfg, double t_star) {
  return SensingEngine(cfg).record_at(t_star);
}

// ---------------------------------------------------------------------------
// Dense reference path, assembled from the public module operations.

TimeRecord run_once_reference(const ProtocolConfig& cfg, double t_star) {
  cfg.validate();
  const ModelSpec& model = cfg.model;
  const int d = model.local_dim();

  const QOperator h = model.alpha ? build_sensor_nnn(model) : build_sensor(model);
  const SpectralCache sensor = diagonalize(h);
  const QState gibbs = thermal_state(h, model.beta);

  arma::vec coeffs(d, arma::fill::zeros);
  coeffs(0) = 1.0;
  coeffs(d - 1) = 1.0;
  const QOperator m1 = boundary_projector(model.s, model.n_sites, coeffs, TopPhase::one);
  const auto [collapsed, prob_m1] = measure_and_collapse(gibbs, m1);
  (void)prob_m1;

  const QState prepared = evolve(collapsed, sensor, t_star);
  const QState reduced = partial_trace_last(prepared);
  const QState ghz = reference_states(model.s, model.n_sites - 1).ent;
  const QOperator jz = collective_operator(model.s, model.n_sites, Axis::z);

  TimeRecord rec;
  rec.t_star = t_star;
  rec.fidelity = fidelity_with_pure(reduced, ghz);
  rec.qfi = qfi_mixed(prepared, jz);

  const QOperator pi_plus =
      boundary_projector(model.s, model.n_sites, coeffs, TopPhase::imag);
  const auto readout_prob = [&](double omega) {
    ModelSpec shifted = model;
    shifted.omega = omega;
    const SpectralCache target = diagonalize(build_target(shifted));
    const QState encoded = evolve(prepared, target, model.t_int);
    const QState reversed = evolve(encoded, sensor, -t_star);
    return std::real(arma::trace(pi_plus.mat * reversed.density()));
  };

  rec.p_plus = readout_prob(model.omega);
  const double fd = cfg.fd_step;
  rec.dp_domega = (readout_prob(model.omega - 2 * fd) - 8.0 * readout_prob(model.omega - fd) +
                   8.0 * readout_prob(model.omega + fd) - readout_prob(model.omega + 2 * fd)) /
                  (12.0 * fd);
  rec.delta_omega_sqrt_tall = uncertainty_from_probability(
      rec.p_plus, rec.dp_domega, 2.0 * t_star + model.t_int);
  return rec;
}

// ---------------------------------------------------------------------------
// Sweeps and summaries.

namespace {

ScanSummary summarize(const std::vector<TimeRecord>& records, const ProtocolConfig& cfg,
                      double sql, double hl, double m1_prob) {
  ScanSummary s;
  s.sql = sql;
  s.hl = hl;
  s.m1_probability = m1_prob;

  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].delta_omega_sqrt_tall < records[best].delta_omega_sqrt_tall) best = i;
  }
  s.delta_omega_min = records[best].delta_omega_sqrt_tall;
  s.t_star_at_min = records[best].t_star;
  s.delta_adv = s.delta_omega_min - hl;
  s.adv_negative = s.delta_adv < 0;

  // Widest contiguous run below the SQL line.
  std::size_t run_start = 0;
  bool in_run = false;
  double best_width = -1.0;
  for (std::size_t i = 0; i <= records.size(); ++i) {
    const bool below = i < records.size() && records[i].delta_omega_sqrt_tall < sql;
    if (below && !in_run) {
      in_run = true;
      run_start = i;
    } else if (!below && in_run) {
      in_run = false;
      const double width = records[i - 1].t_star - records[run_start].t_star;
      if (width > best_width) {
        best_width = width;
        s.window_lo = records[run_start].t_star;
        s.window_hi = records[i - 1].t_star;
      }
    }
  }
  if (best_width >= 0) {
    s.window_width = s.window_hi - s.window_lo;
  } else {
    s.window_lo = s.window_hi = s.window_width = 0.0;
  }

  try {
    s.gamma_fit = fit_gamma(records).gamma;
  } catch (const std::exception&) {
    s.gamma_fit = std::numeric_limits<double>::quiet_NaN();
  }

  // Theorem-1 cap on the prepared-state QFI, checked across the whole sweep.
  const double bound = qfi_upper_bound(cfg.model.s, cfg.model.n_sites);
  for (const TimeRecord& r : records) {
    if (r.qfi > bound * (1.0 + 1e-9) + 1e-9) {
      throw std::runtime_error("protocol: QFI exceeds the dimension bound at t*=" +
                               std::to_string(r.t_star));
    }
  }
  return s;
}

template <typename Fn>
void parallel_grid(std::size_t count, ExecPolicy policy, Fn&& fn) {
  std::atomic<bool> failed{false};
  std::string message;
  std::mutex message_mutex;
  const bool par = (policy == ExecPolicy::parallel);
#pragma omp parallel for schedule(dynamic, 16) if (par)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      fn(static_cast<std::size_t>(i));
    } catch (const std::exception& ex) {
      const std::lock_guard<std::mutex> lock(message_mutex);
      failed.store(true, std::memory_order_relaxed);
      if (message.empty()) message = ex.what();
    }
  }
  if (failed.load()) throw std::runtime_error(message);
}

}  // namespace

SensingResult scan(const ProtocolConfig& cfg, ExecPolicy policy) {
  cfg.validate();
  const SensingEngine engine(cfg);
  const std::size_t count = cfg.t_grid.points();

  SensingResult result;
  result.records.resize(count);
  parallel_grid(count, policy, [&](std::size_t i) {
    result.records[i] = engine.record_at(cfg.t_grid.at(i));
  });

  PrecisionLimits lim = precision_limits(cfg.model.s, cfg.model.n_sites,
                                         cfg.effective_n_eff(), cfg.model.t_int);
  result.summary = summarize(result.records, cfg, lim.sql, lim.hl, engine.m1_probability());
  return result;
}

BasisMap optimize_basis(const ProtocolConfig& cfg, double t_star, ExecPolicy policy) {
  cfg.validate();
  if (cfg.model.local_dim() != 4) {
    throw std::invalid_argument("protocol: the basis scan is defined for d = 4 (a0 = a3 surface)");
  }
  const BasisGrid grid = cfg.basis_opt.value_or(BasisGrid{});
  if (grid.points < 2) throw std::invalid_argument("protocol: basis grid needs >= 2 points");

  auto ctx = SensorContext::make(cfg);
  BasisMap map;
  map.a1.set_size(grid.points);
  map.a2.set_size(grid.points);
  const double span = grid.hi - grid.lo;
  for (int i = 0; i < grid.points; ++i) {
    map.a1(i) = grid.lo + span * i / (grid.points - 1);
    map.a2(i) = grid.lo + span * i / (grid.points - 1);
  }
  map.fidelity.set_size(grid.points, grid.points);
  map.fidelity.fill(std::numeric_limits<double>::quiet_NaN());

  const std::size_t total = static_cast<std::size_t>(grid.points) * grid.points;
  parallel_grid(total, policy, [&](std::size_t flat) {
    const int i = static_cast<int>(flat) / grid.points;
    const int j = static_cast<int>(flat) % grid.points;
    const double a1 = map.a1(i), a2 = map.a2(j);
    const double rest = 1.0 - a1 * a1 - a2 * a2;
    if (rest < 0) return;  // infeasible corner of the grid
    const double a0 = std::sqrt(rest / 2.0);
    arma::vec coeffs = {a0, a1, a2, a0};
    const SensingEngine probe(ctx, cfg, coeffs);
    map.fidelity(i, j) = probe.step1_fidelity(t_star);
  });

  map.best_fidelity = -1.0;
  for (int i = 0; i < grid.points; ++i) {
    for (int j = 0; j < grid.points; ++j) {
      const double f = map.fidelity(i, j);
      if (std::isfinite(f) && f > map.best_fidelity) {
        map.best_fidelity = f;
        map.best_a1 = map.a1(i);
        map.best_a2 = map.a2(j);
      }
    }
  }
  return map;
}

GammaFit fit_gamma(const std::vector<TimeRecord>& records) {
  // Rising envelope: local maxima that set a new record.
  std::vector<std::size_t> peaks;
  double running_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < records.size(); ++i) {
    const double q = records[i].qfi;
    if (q > records[i - 1].qfi && q > records[i + 1].qfi && q > running_max &&
        records[i].t_star > 0 && q > 0) {
      peaks.push_back(i);
      running_max = q;
    }
  }
  if (peaks.size() < 5) {
    throw std::runtime_error("protocol: only " + std::to_string(peaks.size()) +
                             " QFI peaks, need >= 5 for the time-scaling fit");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t idx : peaks) {
    const double lx = std::log(records[idx].t_star);
    const double ly = std::log(records[idx].qfi);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(peaks.size());
  GammaFit fit;
  fit.gamma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.log_amplitude = (sy - fit.gamma * sx) / n;
  fit.peak_indices = std::move(peaks);
  return fit;
}

AlphaOptResult optimize_alpha(const ProtocolConfig& cfg, const AlphaGrid& grid,
                              ExecPolicy policy) {
  if (!cfg.model.alpha) {
    throw std::invalid_argument("protocol: optimize_alpha requires the NNN model");
  }
  if (grid.step <= 0 || grid.hi < grid.lo) {
    throw std::invalid_argument("protocol: bad alpha grid");
  }
  AlphaOptResult out;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t count =
      static_cast<std::size_t>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  out.trace.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double alpha = grid.lo + grid.step * static_cast<double>(i);
    ProtocolConfig pc = cfg;
    pc.model.alpha = alpha;
    SensingResult res = scan(pc, policy);
    out.trace.emplace_back(alpha, res.summary.delta_adv);
    if (res.summary.delta_adv < best) {
      best = res.summary.delta_adv;
      out.alpha_star = alpha;
      out.result = std::move(res);
    }
  }
  return out;
}

}  // namespace qsense
