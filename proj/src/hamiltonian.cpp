#include "qsense/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace qsense {

long long ModelSpec::hilbert_dim() const {
  long long n = 1;
  for (int i = 0; i < n_sites; ++i) n *= local_dim();
  return n;
}

void ModelSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("hamiltonian: N >= 2 required");
  if (beta < 0) throw std::invalid_argument("hamiltonian: beta >= 0 required");
  if (t_int <= 0) throw std::invalid_argument("hamiltonian: t_int > 0 required");
  if (alpha && *alpha <= 0) throw std::invalid_argument("hamiltonian: alpha > 0 required");
}

double kac_factor(double alpha) { return 1.0 / (1.0 + std::pow(2.0, -alpha)); }

namespace {

// 1-based contiguous placement of `local` starting at `site`, added in place.
void add_term(arma::cx_mat& h, const QOperator& local, int site, int n_sites, cx weight) {
  h += weight * embed(local, site, n_sites).mat;
}

}  // namespace

QOperator build_sensor(const ModelSpec& spec) {
  spec.validate();
  if (spec.alpha) {
    throw std::invalid_argument("hamiltonian: build_sensor is the nearest-neighbor model; alpha is set");
  }
  const int n = spec.n_sites;
  const QOperator sz = spin_matrix(spec.s, Axis::z);
  const QOperator sx = spin_matrix(spec.s, Axis::x);
  QOperator zz = QOperator::on_sites(arma::kron(sz.mat, sz.mat), {spec.local_dim(), spec.local_dim()});

  arma::cx_mat h(spec.hilbert_dim(), spec.hilbert_dim(), arma::fill::zeros);
  for (int i = 1; i < n; ++i) add_term(h, zz, i, n, spec.coupling);
  for (int i = 1; i <= n; ++i) add_term(h, sx, i, n, spec.field);
  return QOperator{std::move(h), std::vector<int>(static_cast<std::size_t>(n), spec.local_dim())};
}

QOperator build_sensor_nnn(const ModelSpec& spec) {
  spec.validate();
  if (!spec.alpha) {
    throw std::invalid_argument("hamiltonian: build_sensor_nnn requires alpha");
  }
  const int n = spec.n_sites;
  const double a = *spec.alpha;
  // Coupling magnitude is the Kac factor; the sign convention follows the
  // configured nearest-neighbor coupling.
  const double j = std::copysign(kac_factor(a), spec.coupling);
  const double j2 = j * std::pow(2.0, -a);

  const QOperator sz = spin_matrix(spec.s, Axis::z);
  const QOperator sx = spin_matrix(spec.s, Axis::x);
  const QOperator mid = (spec.nnn_middle == NnnMiddle::sx) ? sx : sz;
  const int d = spec.local_dim();
  QOperator zz = QOperator::on_sites(arma::kron(sz.mat, sz.mat), {d, d});
  QOperator zmz = QOperator::on_sites(arma::kron(sz.mat, arma::kron(mid.mat, sz.mat)), {d, d, d});

  arma::cx_mat h(spec.hilbert_dim(), spec.hilbert_dim(), arma::fill::zeros);
  for (int i = 1; i < n; ++i) add_term(h, zz, i, n, j);
  for (int i = 1; i + 2 <= n; ++i) add_term(h, zmz, i, n, j2);
  for (int i = 1; i <= n; ++i) add_term(h, sx, i, n, spec.field);
  return QOperator{std::move(h), std::vector<int>(static_cast<std::size_t>(n), d)};
}

QOperator build_target(const ModelSpec& spec) {
  QOperator jz = collective_operator(spec.s, spec.n_sites, Axis::z);
  jz.mat *= spec.omega;
  return jz;
}

}  // namespace qsense
