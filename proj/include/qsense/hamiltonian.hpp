// Sensor and target Hamiltonians of the transverse-field spin-s Ising chain.
#pragma once

#include <optional>

#include "qsense/spin.hpp"

namespace qsense {

inline constexpr double pi = 3.14159265358979323846;

// Middle operator of the next-nearest-neighbor three-site term.  The model
// is defined with S^x in the middle; S^z is kept as a sensitivity check.
enum class NnnMiddle { sx, sz };

struct ModelSpec {
  int n_sites = 4;
  SpinValue s{1};          // two_s = 1, i.e. s = 1/2
  double coupling = -1.0;  // J; ferromagnetic sign reproduces the published uncertainties
  double field = 0.1;      // h, transverse field strength
  double beta = 10.0;      // inverse temperature of the initial Gibbs state
  std::optional<double> alpha;  // NNN fall-off rate; absent => nearest-neighbor chain
  NnnMiddle nnn_middle = NnnMiddle::sx;
  double omega = 1e-6;     // target field strength
  double t_int = 500.0 * pi;  // interaction time with the target field

  int local_dim() const { return s.dim(); }
  long long hilbert_dim() const;

  // Throws std::invalid_argument when N < 2, beta < 0, t_int <= 0 or
  // alpha <= 0.  Boundary conditions are always open.
  void validate() const;
};

// (1 + 2^-alpha)^-1, the coupling normalization of the NNN chain.
double kac_factor(double alpha);

// H_sen = J sum S^z_i S^z_{i+1} + h sum S^x_i, open boundary.
QOperator build_sensor(const ModelSpec& spec);

// Three-term chain with |J| replaced by the Kac factor (sign taken from
// spec.coupling): J sum S^z S^z + (J/2^alpha) sum S^z S^x S^z + h sum S^x.
QOperator build_sensor_nnn(const ModelSpec& spec);

// H_tar = omega sum S^z_i; diagonal in the product S^z basis.
QOperator build_target(const ModelSpec& spec);

}  // namespace qsense
