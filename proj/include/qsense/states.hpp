// Density-matrix algebra: thermal states, projective measurement, partial
// trace, fidelity, and the reference probe states.
#pragma once

#include <utility>

#include "qsense/spin.hpp"

namespace qsense {

enum class StateKind { pure, mixed };
enum class TopPhase { one, imag };  // phase on the |d-1> component of a boundary vector

class QState {
 public:
  // Validating factories.  pure() checks unit norm; mixed() checks unit
  // trace, Hermiticity and positivity (eigenvalues >= -1e-10, with smaller
  // negative noise clipped by consumers, not here).
  static QState pure(arma::cx_vec psi, std::vector<int> site_dims);
  static QState mixed(arma::cx_mat rho, std::vector<int> site_dims);
  // For operations that preserve the invariants by construction; skips the
  // O(n^3) positivity check but still verifies trace and Hermiticity.
  static QState mixed_preserving(arma::cx_mat rho, std::vector<int> site_dims);

  StateKind kind() const { return kind_; }
  bool is_pure() const { return kind_ == StateKind::pure; }
  int dim() const;
  int n_sites() const { return static_cast<int>(site_dims_.size()); }
  const std::vector<int>& site_dims() const { return site_dims_; }

  const arma::cx_vec& vector() const;  // pure states only
  arma::cx_mat density() const;        // psi psi^dagger for pure states
  const arma::cx_mat& density_ref() const;  // mixed states only

  double purity() const;  // tr(rho^2)

 private:
  QState() = default;
  StateKind kind_ = StateKind::pure;
  arma::cx_vec psi_;
  arma::cx_mat rho_;
  std::vector<int> site_dims_;
};

// Gibbs state exp(-beta H)/Z via eigendecomposition; weights are computed
// relative to the ground energy so large beta cannot overflow.
QState thermal_state(const QOperator& hamiltonian, double beta);

// Projective update rho -> P rho P / tr(P rho).  P must be idempotent
// within 1e-10.  Throws on outcome probability below 1e-14.
std::pair<QState, double> measure_and_collapse(const QState& state,
                                               const QOperator& projector);

// Rank-1 projector onto sum_i a_i phi_i |i> on site 1, embedded in d^N
// dimensions.  coeffs is normalized internally (zero vector throws);
// phase_on_top == imag multiplies the |d-1> component by i.
QOperator boundary_projector(SpinValue s, int n_sites, arma::vec coeffs,
                             TopPhase phase_on_top = TopPhase::one);

// Reduced state on sites 1..N-1 (the last site traced out).
QState partial_trace_last(const QState& state);

// <psi| rho |psi> for a pure reference psi.
double fidelity_with_pure(const QState& rho, const QState& psi);

struct ReferenceStates {
  QState sep;  // [(|0> + |d-1>)/sqrt(2)]^(x)N, the optimal separable probe
  QState ent;  // (|0...0> + |d-1...d-1>)/sqrt(2), saturates the QFI bound
};
ReferenceStates reference_states(SpinValue s, int n_sites);

}  // namespace qsense
