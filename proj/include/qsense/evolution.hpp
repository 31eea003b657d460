// Exact unitary evolution via spectral decomposition, cached for reuse at
// many times.
#pragma once

#include <cstdint>

#include "qsense/spin.hpp"
#include "qsense/states.hpp"

namespace qsense {

struct SpectralCache {
  arma::vec eigenvalues;      // ascending
  arma::cx_mat eigenvectors;  // unitary, columns
  std::vector<int> site_dims;
  std::uint64_t source_hash = 0;
  bool real_basis = false;  // eigenvectors have zero imaginary part

  int dim() const { return static_cast<int>(eigenvalues.n_elem); }
};

// Full Hermitian eigensystem.  Real-symmetric inputs are routed through the
// real solver.  Throws on non-Hermitian input.
SpectralCache diagonalize(const QOperator& hamiltonian);

// U(t) = V exp(-i E t) V^dagger.
QOperator propagator(const SpectralCache& cache, double t);

// U(t) rho U(t)^dagger (or U|psi> for pure states).
QState evolve(const QState& state, const SpectralCache& cache, double t);

}  // namespace qsense
