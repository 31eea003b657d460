#include "qsense/states.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kHermTol = 1e-12;
constexpr double kEigFloor = -1e-10;
constexpr double kIdempotentTol = 1e-10;
constexpr double kZeroProb = 1e-14;

void check_dims(const arma::cx_mat& m, const std::vector<int>& dims) {
  long long prod = 1;
  for (int d : dims) prod *= d;
  if (prod != static_cast<long long>(m.n_rows)) {
    throw std::invalid_argument("states: matrix dimension does not match site dimensions");
  }
}

}  // namespace

QState QState::pure(arma::cx_vec psi, std::vector<int> site_dims) {
  long long prod = 1;
  for (int d : site_dims) prod *= d;
  if (prod != static_cast<long long>(psi.n_elem)) {
    throw std::invalid_argument("states: vector dimension does not match site dimensions");
  }
  const double nrm = arma::norm(psi);
  if (std::abs(nrm - 1.0) > kNormTol) {
    throw std::invalid_argument("states: pure state must have unit norm");
  }
  QState st;
  st.kind_ = StateKind::pure;
  st.psi_ = std::move(psi);
  st.site_dims_ = std::move(site_dims);
  return st;
}

QState QState::mixed_preserving(arma::cx_mat rho, std::vector<int> site_dims) {
  check_dims(rho, site_dims);
  if (std::abs(arma::trace(rho).real() - 1.0) > 1e-10 ||
      std::abs(arma::trace(rho).imag()) > 1e-10) {
    throw std::invalid_argument("states: density matrix must have unit trace");
  }
  if (arma::norm(rho - rho.t(), "inf") > 1e-10 * std::max(1.0, arma::norm(rho, "inf"))) {
    throw std::invalid_argument("states: density matrix must be Hermitian");
  }
  QState st;
  st.kind_ = StateKind::mixed;
  st.rho_ = std::move(rho);
  st.site_dims_ = std::move(site_dims);
  return st;
}

QState QState::mixed(arma::cx_mat rho, std::vector<int> site_dims) {
  check_dims(rho, site_dims);
  if (std::abs(arma::trace(rho).real() - 1.0) > kTraceTol ||
      std::abs(arma::trace(rho).imag()) > kTraceTol) {
    throw std::invalid_argument("states: density matrix must have unit trace");
  }
  if (arma::norm(rho - rho.t(), "inf") > kHermTol * std::max(1.0, arma::norm(rho, "inf"))) {
    throw std::invalid_argument("states: density matrix must be Hermitian");
  }
  arma::vec ev = arma::eig_sym(rho);
  if (ev.min() < kEigFloor) {
    throw std::invalid_argument("states: density matrix has a negative eigenvalue beyond tolerance");
  }
  QState st;
  st.kind_ = StateKind::mixed;
  st.rho_ = std::move(rho);
  st.site_dims_ = std::move(site_dims);
  return st;
}

int QState::dim() const {
  return kind_ == StateKind::pure ? static_cast<int>(psi_.n_elem)
                                  : static_cast<int>(rho_.n_rows);
}

const arma::cx_vec& QState::vector() const {
  if (kind_ != StateKind::pure) throw std::logic_error("states: not a pure state");
  return psi_;
}

arma::cx_mat QState::density() const {
  return kind_ == StateKind::pure ? arma::cx_mat(psi_ * psi_.t()) : rho_;
}

const arma::cx_mat& QState::density_ref() const {
  if (kind_ != StateKind::mixed) throw std::logic_error("states: not a mixed state");
  return rho_;
}

double QState::purity() const {
  if (kind_ == StateKind::pure) return 1.0;
  return std::real(arma::trace(rho_ * rho_));
}

QState thermal_state(const QOperator& hamiltonian, double beta) {
  if (beta < 0) throw std::invalid_argument("states: beta >= 0 required");
  if (!hamiltonian.is_hermitian(1e-10)) {
    throw std::invalid_argument("states: thermal state needs a Hermitian Hamiltonian");
  }
  arma::vec energies;
  arma::cx_mat vecs;
  if (!arma::eig_sym(energies, vecs, hamiltonian.mat, "dc")) {
    throw std::runtime_error("states: eigendecomposition failed");
  }
  // Weights relative to the ground energy; exact for every finite beta.
  arma::vec w = arma::exp(-beta * (energies - energies.min()));
  w /= arma::accu(w);
  arma::cx_mat rho = vecs * arma::diagmat(arma::cx_vec(w, arma::vec(w.n_elem, arma::fill::zeros))) * vecs.t();
  rho = 0.5 * (rho + rho.t());  // strip eigensolver asymmetry noise
  return QState::mixed_preserving(std::move(rho), hamiltonian.site_dims);
}

std::pair<QState, double> measure_and_collapse(const QState& state,
                                               const QOperator& projector) {
  if (projector.dim() != state.dim()) {
    throw std::invalid_argument("states: projector dimension mismatch");
  }
  const arma::cx_mat& p = projector.mat;
  if (arma::norm(p * p - p, "inf") > kIdempotentTol) {
    throw std::invalid_argument("states: measurement operator is not idempotent");
  }
  if (state.is_pure()) {
    arma::cx_vec collapsed = p * state.vector();
    const double prob = std::pow(arma::norm(collapsed), 2);
    if (prob < kZeroProb) {
      throw std::runtime_error("states: measurement outcome has (near-)zero probability");
    }
    collapsed /= std::sqrt(prob);
    return {QState::pure(std::move(collapsed), state.site_dims()), prob};
  }
  arma::cx_mat updated = p * state.density_ref() * p;
  const double prob = std::real(arma::trace(updated));
  if (prob < kZeroProb) {
    throw std::runtime_error("states: measurement outcome has (near-)zero probability");
  }
  updated /= prob;
  updated = 0.5 * (updated + updated.t());
  return {QState::mixed_preserving(std::move(updated), state.site_dims()), prob};
}

QOperator boundary_projector(SpinValue s, int n_sites, arma::vec coeffs,
                             TopPhase phase_on_top) {
  const int d = s.dim();
  if (static_cast<int>(coeffs.n_elem) != d) {
    throw std::invalid_argument("states: boundary coefficients must have length d");
  }
  const double nrm = arma::norm(coeffs);
  if (nrm < 1e-300) throw std::invalid_argument("states: zero boundary vector");
  arma::cx_vec chi(coeffs / nrm, arma::vec(d, arma::fill::zeros));
  if (phase_on_top == TopPhase::imag) chi(d - 1) *= cx(0.0, 1.0);
  QOperator local = QOperator::single_site(chi * chi.t());
  return embed(local, 1, n_sites);
}

QState partial_trace_last(const QState& state) {
  const auto& dims = state.site_dims();
  if (dims.size() < 2) throw std::invalid_argument("states: partial trace needs N >= 2 sites");
  const int d_last = dims.back();
  const int d_rest = state.dim() / d_last;
  std::vector<int> kept(dims.begin(), dims.end() - 1);

  arma::cx_mat reduced(d_rest, d_rest, arma::fill::zeros);
  if (state.is_pure()) {
    // psi laid out with the last site fastest: columns of the reshape are
    // the kept-site amplitudes for each last-site label.
    const arma::cx_vec& psi = state.vector();
    arma::cx_mat block(d_rest, d_last);
    for (int a = 0; a < d_rest; ++a)
      for (int j = 0; j < d_last; ++j) block(a, j) = psi(a * d_last + j);
    reduced = block * block.t();
  } else {
    const arma::cx_mat& rho = state.density_ref();
    for (int a = 0; a < d_rest; ++a)
      for (int b = 0; b < d_rest; ++b) {
        cx acc = 0;
        for (int j = 0; j < d_last; ++j) acc += rho(a * d_last + j, b * d_last + j);
        reduced(a, b) = acc;
      }
  }
  reduced = 0.5 * (reduced + reduced.t());
  return QState::mixed_preserving(std::move(reduced), kept);
}

double fidelity_with_pure(const QState& rho, const QState& psi) {
  if (!psi.is_pure()) throw std::invalid_argument("states: fidelity reference must be pure");
  if (rho.dim() != psi.dim()) throw std::invalid_argument("states: fidelity dimension mismatch");
  const arma::cx_vec& v = psi.vector();
  if (rho.is_pure()) {
    return std::norm(arma::cdot(v, rho.vector()));
  }
  return std::real(arma::cdot(v, rho.density_ref() * v));
}

ReferenceStates reference_states(SpinValue s, int n_sites) {
  const int d = s.dim();
  long long n = 1;
  for (int i = 0; i < n_sites; ++i) n *= d;
  std::vector<int> dims(static_cast<std::size_t>(n_sites), d);

  // (|0> + |d-1>)/sqrt(2) per site, then the N-fold product.
  arma::cx_vec site(d, arma::fill::zeros);
  site(0) = 1.0 / std::sqrt(2.0);
  site(d - 1) = 1.0 / std::sqrt(2.0);
  arma::cx_vec sep(1);
  sep(0) = 1.0;
  for (int i = 0; i < n_sites; ++i) sep = arma::kron(sep, site);

  arma::cx_vec ent(n, arma::fill::zeros);
  ent(0) = 1.0 / std::sqrt(2.0);
  ent(n - 1) = 1.0 / std::sqrt(2.0);

  return ReferenceStates{QState::pure(std::move(sep), dims), QState::pure(std::move(ent), dims)};
}

}  // namespace qsense
