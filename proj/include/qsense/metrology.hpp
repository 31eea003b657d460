// Quantum Fisher information, SLD, precision limits and entanglement bounds.
#pragma once

#include <vector>

#include "qsense/spin.hpp"
#include "qsense/states.hpp"

namespace qsense {

enum class ExecPolicy { serial, parallel };

// Spectral-formula QFI, F_Q = 2 sum_{k,l} (p_k-p_l)^2/(p_k+p_l) |<k|G|l>|^2.
// Terms with p_k + p_l <= 1e-12 * max(p) are skipped.  The OpenMP variant
// accumulates fixed-order per-row partials, so thread count does not change
// the result.
double qfi_mixed(const QState& rho, const QOperator& generator,
                 ExecPolicy policy = ExecPolicy::parallel);

// Pure-state closed form 4 (<G^2> - <G>^2).
double qfi_pure(const QState& psi, const QOperator& generator);

// Symmetric logarithmic derivative in the original basis,
// L = 2i sum_{k,l} (p_k-p_l)/(p_k+p_l) <k|G|l> |k><l|.
QOperator sld(const QState& rho, const QOperator& generator);

// Theorem bounds: F_Q(rho, J^a) <= 4 s^2 N^2 and
// sum_a F_Q(rho, J^a) <= 4 s N (s N + 1).
double qfi_upper_bound(SpinValue s, int n_sites);
double qfi_sum_bound(SpinValue s, int n_sites);

// Bounds for k-producible states with entangled-block sizes r_i:
// 4 s^2 sum r_i^2, and the companion 4 sum s r_i (s r_i + 1).
double k_producible_bound(SpinValue s, const std::vector<int>& partition);
double k_producible_sum_bound(SpinValue s, const std::vector<int>& partition);

// Smallest k such that a k-producible spin-s2 state can reach the maximal
// QFI of an N-party spin-s1 state: k = ceil(1 + N s1/s2), capped at N.
struct MinProducibility {
  int k;
  bool saturated;  // true when the uncapped k exceeds N
};
MinProducibility min_producibility(int n_sites, SpinValue s1, SpinValue s2);

struct PrecisionLimits {
  double sql;  // delta_theta_SQL * sqrt(t_all) = 1/(2 s sqrt(N t))
  double hl;   // delta_theta_HL  * sqrt(t_all) = 1/(2 s n_eff sqrt(t))
  SpinValue s;
  int n_eff;
  double t;
};
PrecisionLimits precision_limits(SpinValue s, int n_sites, int n_eff, double t);

// sqrt(p(1-p)) * sqrt(t_sense) / |dp/domega|.  Throws when the derivative
// vanishes (insensitive configuration).
double uncertainty_from_probability(double p_plus, double dp_domega,
                                    double t_sense);

}  // namespace qsense
