#include "qsense/randomstates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

// splitmix64: tiny counter-based generator, identical on every platform.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform in (0, 1]; never returns 0 so log() below is safe.
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
  return mix.next();
}

constexpr double pi_bm = 3.14159265358979323846;

// Box-Muller pair of standard normals.
void normal_pair(SplitMix64& rng, double& z0, double& z1) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  z0 = r * std::cos(2.0 * pi_bm * u2);
  z1 = r * std::sin(2.0 * pi_bm * u2);
}

arma::cx_vec haar_vector(long long dim, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(stream_seed(seed, index));
  arma::cx_vec psi(dim);
  for (long long i = 0; i < dim; ++i) {
    double re, im;
    normal_pair(rng, re, im);
    psi(i) = cx(re, im);
  }
  psi /= arma::norm(psi);
  return psi;
}

// QFI of a pure state w.r.t. the (diagonal) collective J^z, in O(dim).
double qfi_pure_jz(const arma::cx_vec& psi, const arma::vec& mz) {
  double mean = 0, second = 0;
  for (arma::uword i = 0; i < psi.n_elem; ++i) {
    const double p = std::norm(psi(i));
    mean += mz(i) * p;
    second += mz(i) * mz(i) * p;
  }
  return 4.0 * (second - mean * mean);
}

arma::vec jz_diagonal(int n_sites, SpinValue s) {
  const int d = s.dim();
  long long n = 1;
  for (int i = 0; i < n_sites; ++i) n *= d;
  arma::vec mz(n);
  for (long long idx = 0; idx < n; ++idx) {
    long long rest = idx;
    double acc = 0;
    for (int site = 0; site < n_sites; ++site) {
      acc += s.s() - static_cast<double>(rest % d);
      rest /= d;
    }
    mz(idx) = acc;
  }
  return mz;
}

}  // namespace

QState haar_pure(int n_sites, SpinValue s, std::uint64_t seed, std::uint64_t index) {
  if (n_sites < 1) throw std::invalid_argument("randomstates: N >= 1 required");
  long long n = 1;
  for (int i = 0; i < n_sites; ++i) n *= s.dim();
  return QState::pure(haar_vector(n, seed, index),
                      std::vector<int>(static_cast<std::size_t>(n_sites), s.dim()));
}

QfiHistogram qfi_distribution(int n_sites, SpinValue s, std::uint64_t n_samples,
                              std::uint64_t seed, int n_bins, ExecPolicy policy) {
  if (n_samples < 1) throw std::invalid_argument("randomstates: need at least one sample");
  if (n_bins < 1) throw std::invalid_argument("randomstates: need at least one bin");
  const arma::vec mz = jz_diagonal(n_sites, s);
  const long long dim = static_cast<long long>(mz.n_elem);
  const double bound = qfi_upper_bound(s, n_sites);

  arma::vec samples(n_samples);
  const bool par = (policy == ExecPolicy::parallel);
#pragma omp parallel for schedule(static) if (par)
  for (long long i = 0; i < static_cast<long long>(n_samples); ++i) {
    const arma::cx_vec psi = haar_vector(dim, seed, static_cast<std::uint64_t>(i));
    samples(i) = qfi_pure_jz(psi, mz);
  }

  QfiHistogram hist;
  hist.count = n_samples;
  hist.edges = arma::linspace(0.0, bound, n_bins + 1);
  hist.frequencies.zeros(n_bins);
  const double width = bound / n_bins;
  for (arma::uword i = 0; i < samples.n_elem; ++i) {
    int bin = static_cast<int>(samples(i) / width);
    bin = std::clamp(bin, 0, n_bins - 1);  // the exact upper edge joins the last bin
    hist.frequencies(bin) += 1.0;
  }
  hist.frequencies /= static_cast<double>(n_samples);
  hist.mean = arma::mean(samples);
  hist.stddev = arma::stddev(samples);
  hist.max_sampled = samples.max();
  hist.reference_qfi = 4.0 * n_sites * s.s() * s.s();
  return hist;
}

}  // namespace qsense
