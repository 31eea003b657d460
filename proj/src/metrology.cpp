#include "qsense/metrology.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

namespace {

void check_generator(const QState& state, const QOperator& generator) {
  if (state.dim() != generator.dim()) {
    throw std::invalid_argument("metrology: state and generator dimensions differ");
  }
  if (!generator.is_hermitian(1e-10)) {
    throw std::invalid_argument("metrology: generator must be Hermitian");
  }
}

}  // namespace

double qfi_mixed(const QState& rho, const QOperator& generator, ExecPolicy policy) {
  check_generator(rho, generator);
  arma::vec p;
  arma::cx_mat v;
  if (!arma::eig_sym(p, v, rho.density(), "dc")) {
    throw std::runtime_error("metrology: eigendecomposition failed");
  }
  const arma::cx_mat g = v.t() * generator.mat * v;  // generator in the eigenbasis
  const arma::uword n = p.n_elem;
  const double eps_sum = 1e-12 * p.max();

  // Per-row partial sums accumulated in fixed order keep the result
  // independent of the thread count.
  arma::vec partial(n, arma::fill::zeros);
  const bool par = (policy == ExecPolicy::parallel);
#pragma omp parallel for schedule(static) if (par)
  for (long long k = 0; k < static_cast<long long>(n); ++k) {
    double acc = 0.0;
    for (arma::uword l = 0; l < n; ++l) {
      const double sum = p(k) + p(l);
      if (sum <= eps_sum) continue;
      const double diff = p(k) - p(l);
      acc += (diff * diff / sum) * std::norm(g(k, l));
    }
    partial(k) = acc;
  }
  return 2.0 * arma::accu(partial);
}

double qfi_pure(const QState& psi, const QOperator& generator) {
  if (!psi.is_pure()) throw std::invalid_argument("metrology: qfi_pure needs a pure state");
  check_generator(psi, generator);
  const arma::cx_vec& v = psi.vector();
  const arma::cx_vec gv = generator.mat * v;
  const double mean = std::real(arma::cdot(v, gv));
  const double second = std::real(arma::cdot(gv, gv));
  return 4.0 * (second - mean * mean);
}

QOperator sld(const QState& rho, const QOperator& generator) {
  check_generator(rho, generator);
  arma::vec p;
  arma::cx_mat v;
  if (!arma::eig_sym(p, v, rho.density(), "dc")) {
    throw std::runtime_error("metrology: eigendecomposition failed");
  }
  const arma::cx_mat g = v.t() * generator.mat * v;
  const arma::uword n = p.n_elem;
  const double eps_sum = 1e-12 * p.max();

  arma::cx_mat l(n, n, arma::fill::zeros);
  for (arma::uword k = 0; k < n; ++k) {
    for (arma::uword m = 0; m < n; ++m) {
      const double sum = p(k) + p(m);
      if (sum <= eps_sum) continue;
      l(k, m) = cx(0.0, 2.0) * ((p(k) - p(m)) / sum) * g(k, m);
    }
  }
  arma::cx_mat out = v * l * v.t();
  out = 0.5 * (out + out.t());
  return QOperator{std::move(out), generator.site_dims};
}

double qfi_upper_bound(SpinValue s, int n_sites) {
  const double sn = s.s() * n_sites;
  return 4.0 * sn * sn;
}

double qfi_sum_bound(SpinValue s, int n_sites) {
  const double sn = s.s() * n_sites;
  return 4.0 * sn * (sn + 1.0);
}

double k_producible_bound(SpinValue s, const std::vector<int>& partition) {
  if (partition.empty()) throw std::invalid_argument("metrology: empty partition");
  double acc = 0;
  for (int r : partition) {
    if (r < 1) throw std::invalid_argument("metrology: partition blocks must be >= 1");
    acc += static_cast<double>(r) * r;
  }
  return 4.0 * s.s() * s.s() * acc;
}

double k_producible_sum_bound(SpinValue s, const std::vector<int>& partition) {
  if (partition.empty()) throw std::invalid_argument("metrology: empty partition");
  double acc = 0;
  for (int r : partition) {
    if (r < 1) throw std::invalid_argument("metrology: partition blocks must be >= 1");
    const double sr = s.s() * r;
    acc += sr * (sr + 1.0);
  }
  return 4.0 * acc;
}

MinProducibility min_producibility(int n_sites, SpinValue s1, SpinValue s2) {
  if (s2.two_s < s1.two_s) {
    throw std::invalid_argument("metrology: min_producibility requires s2 >= s1");
  }
  // k = ceil(1 + N s1/s2) computed exactly on the doubled integers.
  const long long num = static_cast<long long>(n_sites) * s1.two_s;
  const long long den = s2.two_s;
  const long long k = 1 + (num + den - 1) / den;
  if (k > n_sites) return MinProducibility{n_sites, true};
  return MinProducibility{static_cast<int>(k), false};
}

PrecisionLimits precision_limits(SpinValue s, int n_sites, int n_eff, double t) {
  if (t <= 0) throw std::invalid_argument("metrology: t > 0 required");
  if (n_eff < 1) throw std::invalid_argument("metrology: n_eff >= 1 required");
  PrecisionLimits lim;
  lim.s = s;
  lim.n_eff = n_eff;
  lim.t = t;
  lim.sql = 1.0 / (2.0 * s.s() * std::sqrt(static_cast<double>(n_sites) * t));
  lim.hl = 1.0 / (2.0 * s.s() * static_cast<double>(n_eff) * std::sqrt(t));
  return lim;
}

double uncertainty_from_probability(double p_plus, double dp_domega, double t_sense) {
  if (p_plus < -1e-12 || p_plus > 1.0 + 1e-12) {
    throw std::invalid_argument("metrology: probability outside [0, 1]");
  }
  if (t_sense <= 0) throw std::invalid_argument("metrology: t_sense > 0 required");
  if (std::abs(dp_domega) < 1e-300) {
    throw std::runtime_error("metrology: insensitive configuration (dp/domega ~ 0)");
  }
  const double variance = std::max(p_plus * (1.0 - p_plus), 0.0);
  return std::sqrt(variance) * std::sqrt(t_sense) / std::abs(dp_domega);
}

}  // namespace qsense
