// The three-step sensing protocol: preparation by boundary measurement and
// evolution, target encoding, reversed evolution and boundary readout.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "qsense/evolution.hpp"
#include "qsense/hamiltonian.hpp"
#include "qsense/metrology.hpp"

namespace qsense {

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 120.0;
  double step = 0.01;

  std::size_t points() const;
  double at(std::size_t i) const { return t_min + step * static_cast<double>(i); }
  void validate() const;
};

struct BasisGrid {
  double lo = -0.7;
  double hi = 0.7;
  int points = 29;
};

struct ProtocolConfig {
  ModelSpec model;
  TimeGrid t_grid;
  double fd_step = 1e-9;  // omega step of the finite-difference cross-check
  int n_eff = 0;          // qudit count of the HL comparison; 0 means N-1
  std::optional<BasisGrid> basis_opt;
  // Relative cutoff below which Gibbs/post-measurement eigenvalues are
  // dropped from the factored state carried through the fast kernel.
  double weight_cutoff = 1e-15;

  int effective_n_eff() const { return n_eff > 0 ? n_eff : model.n_sites - 1; }
  void validate() const;
};

struct TimeRecord {
  double t_star = 0;
  double fidelity = 0;      // of tr_N rho(t*) with the (N-1)-site GHZ state
  double qfi = 0;           // of rho(t*) w.r.t. J^z
  double p_plus = 0;        // boundary readout probability after step 3
  double dp_domega = 0;     // analytic derivative of p_plus
  double delta_omega_sqrt_tall = 0;
};

struct ScanSummary {
  double delta_omega_min = 0;
  double t_star_at_min = 0;
  double sql = 0;
  double hl = 0;
  double delta_adv = 0;      // (delta_omega_min - hl) * sqrt(t_all)
  bool adv_negative = false; // flagged, not an error
  // Widest contiguous t* window with delta_omega < SQL.
  double window_lo = 0;
  double window_hi = 0;
  double window_width = 0;
  double m1_probability = 0; // success probability of the step-1 outcome
  double gamma_fit = 0;      // NaN when too few QFI peaks
};

struct SensingResult {
  std::vector<TimeRecord> records;
  ScanSummary summary;
};

// Immutable per-model precomputation shared by every t* evaluation:
// eigensystem of H_sen, factored Gibbs state, diagonal of J^z.
class SensorContext;

// One protocol instance (model + step-1 measurement basis).  record_at()
// runs the fast rank-factored kernel; concurrent calls are safe.
class SensingEngine {
 public:
  explicit SensingEngine(const ProtocolConfig& cfg);
  SensingEngine(std::shared_ptr<const SensorContext> ctx, const ProtocolConfig& cfg,
                const arma::vec& m1_coeffs);
  ~SensingEngine();
  SensingEngine(SensingEngine&&) noexcept;
  SensingEngine& operator=(SensingEngine&&) noexcept;

  TimeRecord record_at(double t_star) const;
  // p_plus evaluated at an arbitrary omega; the finite-difference oracle
  // for dp/domega is built from this.
  double prob_plus(double t_star, double omega) const;
  double dp_domega_fd(double t_star) const;  // 4-point central difference, step cfg.fd_step
  double step1_fidelity(double t_star) const;
  double m1_probability() const;
  const SpectralCache& sensor_cache() const;

  static std::shared_ptr<const SensorContext> make_context(const ProtocolConfig& cfg);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Single protocol execution at one t* (fast kernel).
TimeRecord run_once(const ProtocolConfig& cfg, double t_star);

// Dense single execution assembled step by step from the states/evolution
// modules; the serial reference the fast kernel is tested against.  Its
// derivative comes from the finite-difference oracle, not the analytic form.
TimeRecord run_once_reference(const ProtocolConfig& cfg, double t_star);

// Full t* sweep with summary.  Points are independent; the parallel policy
// fills the record array by index, so scheduling cannot change any value.
SensingResult scan(const ProtocolConfig& cfg,
                   ExecPolicy policy = ExecPolicy::parallel);

struct BasisMap {
  arma::vec a1;        // grid values, horizontal axis
  arma::vec a2;        // grid values, vertical axis
  arma::mat fidelity;  // fidelity(i,j) at (a1(i), a2(j)); NaN = infeasible
  double best_a1 = 0;
  double best_a2 = 0;
  double best_fidelity = 0;
};

// Step-1 measurement-basis scan at fixed t*: coefficients
// (a0, a1, a2, a3 = a0) with a0 = sqrt((1 - a1^2 - a2^2)/2).  Requires d = 4.
BasisMap optimize_basis(const ProtocolConfig& cfg, double t_star,
                        ExecPolicy policy = ExecPolicy::parallel);

struct GammaFit {
  double gamma = 0;
  double log_amplitude = 0;
  std::vector<std::size_t> peak_indices;  // into the record array
};

// Least-squares slope of log QFI_peak vs log t*_peak over the rising
// envelope (record-breaking local maxima) of the QFI trace.  Throws when
// fewer than five peaks survive.
GammaFit fit_gamma(const std::vector<TimeRecord>& records);

struct AlphaGrid {
  double lo = 0.5;
  double hi = 5.0;
  double step = 0.01;
};

struct AlphaOptResult {
  double alpha_star = 0;
  SensingResult result;                          // scan at alpha_star
  std::vector<std::pair<double, double>> trace;  // (alpha, delta_adv)
};

// Scan of the NNN fall-off rate; returns the alpha minimizing delta_adv.
AlphaOptResult optimize_alpha(const ProtocolConfig& cfg, const AlphaGrid& grid,
                              ExecPolicy policy = ExecPolicy::parallel);

}  // namespace qsense
