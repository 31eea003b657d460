#include "qsense/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

arma::cx_vec phases(const arma::vec& energies, double t) {
  arma::cx_vec ph(energies.n_elem);
  for (arma::uword k = 0; k < energies.n_elem; ++k) {
    ph(k) = std::polar(1.0, -energies(k) * t);
  }
  return ph;
}

}  // namespace

SpectralCache diagonalize(const QOperator& hamiltonian) {
  if (!hamiltonian.is_hermitian(1e-12)) {
    throw std::invalid_argument("evolution: diagonalize requires a Hermitian operator");
  }
  SpectralCache cache;
  cache.site_dims = hamiltonian.site_dims;
  cache.source_hash = fnv1a(hamiltonian.mat.memptr(), hamiltonian.mat.n_elem * sizeof(cx));

  const double imag_norm = arma::norm(arma::imag(hamiltonian.mat), "inf");
  if (imag_norm <= 1e-14 * std::max(1.0, arma::norm(arma::real(hamiltonian.mat), "inf"))) {
    arma::mat vecs;
    if (!arma::eig_sym(cache.eigenvalues, vecs, arma::mat(arma::real(hamiltonian.mat)), "dc")) {
      throw std::runtime_error("evolution: real eigendecomposition failed");
    }
    cache.eigenvectors = arma::cx_mat(vecs, arma::mat(vecs.n_rows, vecs.n_cols, arma::fill::zeros));
    cache.real_basis = true;
  } else {
    if (!arma::eig_sym(cache.eigenvalues, cache.eigenvectors, hamiltonian.mat, "dc")) {
      throw std::runtime_error("evolution: eigendecomposition failed");
    }
    cache.real_basis = false;
  }
  return cache;
}

QOperator propagator(const SpectralCache& cache, double t) {
  const arma::cx_vec ph = phases(cache.eigenvalues, t);
  arma::cx_mat u = cache.eigenvectors * arma::diagmat(ph) * cache.eigenvectors.t();
  auto dims = cache.site_dims;
  if (dims.empty()) dims = {cache.dim()};
  return QOperator{std::move(u), std::move(dims)};
}

QState evolve(const QState& state, const SpectralCache& cache, double t) {
  if (state.dim() != cache.dim()) {
    throw std::invalid_argument("evolution: state and cache dimensions differ");
  }
  const arma::cx_vec ph = phases(cache.eigenvalues, t);
  const arma::cx_mat& v = cache.eigenvectors;
  if (state.is_pure()) {
    arma::cx_vec rotated = v * (ph % (v.t() * state.vector()));
    rotated /= arma::norm(rotated);  // remove roundoff drift, |1 - norm| ~ eps
    return QState::pure(std::move(rotated), state.site_dims());
  }
  arma::cx_mat inner = v.t() * state.density_ref() * v;
  inner.each_col() %= ph;
  inner.each_row() %= arma::conj(ph).st();
  arma::cx_mat rotated = v * inner * v.t();
  rotated = 0.5 * (rotated + rotated.t());
  return QState::mixed_preserving(std::move(rotated), state.site_dims());
}

}  // namespace qsense
