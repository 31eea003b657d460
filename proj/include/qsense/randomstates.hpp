// Haar-uniform pure states and the QFI distribution they induce.
#pragma once

#include <cstdint>
#include <string>

#include "qsense/metrology.hpp"
#include "qsense/states.hpp"

namespace qsense {

// Name of the generator recorded in output metadata.
inline constexpr const char* kRngAlgorithm = "splitmix64+box-muller";

// d^N complex coefficients with i.i.d. standard-normal real and imaginary
// parts, normalized.  Deterministic per (seed, index) regardless of thread
// count or platform.
QState haar_pure(int n_sites, SpinValue s, std::uint64_t seed,
                 std::uint64_t index = 0);

struct QfiHistogram {
  arma::vec edges;        // n_bins + 1 uniform edges over [0, 4 s^2 N^2]
  arma::vec frequencies;  // counts / n_samples (sum to 1; divide by bin width for a density)
  double mean = 0;
  double stddev = 0;
  std::uint64_t count = 0;
  double reference_qfi = 0;  // QFI of the optimal separable state, 4 N s^2
  double max_sampled = 0;
  std::string rng = kRngAlgorithm;
};

// QFI of haar_pure samples w.r.t. J^z, histogrammed.  Samples are keyed by
// (seed, index) so the parallel policy is bitwise-identical to the serial
// one.
QfiHistogram qfi_distribution(int n_sites, SpinValue s, std::uint64_t n_samples,
                              std::uint64_t seed, int n_bins = 50,
                              ExecPolicy policy = ExecPolicy::parallel);

}  // namespace qsense
