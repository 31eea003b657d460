#include "qsense/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsense {

SpinValue SpinValue::from_double(double s) {
  const double doubled = 2.0 * s;
  const double rounded = std::round(doubled);
  if (std::abs(doubled - rounded) > 1e-9 || rounded < 1.0) {
    throw std::invalid_argument("spin: s must be a positive half-integer, got " +
                                std::to_string(s));
  }
  return SpinValue{static_cast<int>(rounded)};
}

bool QOperator::is_hermitian(double tol) const {
  return arma::norm(mat - mat.t(), "inf") <= tol * std::max(1.0, arma::norm(mat, "inf"));
}

QOperator QOperator::on_sites(arma::cx_mat m, std::vector<int> dims) {
  long long prod = 1;
  for (int d : dims) prod *= d;
  if (prod != static_cast<long long>(m.n_rows) || m.n_rows != m.n_cols) {
    throw std::invalid_argument("spin: operator dimension does not match site dimensions");
  }
  return QOperator{std::move(m), std::move(dims)};
}

QOperator QOperator::single_site(arma::cx_mat m) {
  const int d = static_cast<int>(m.n_rows);
  return on_sites(std::move(m), {d});
}

QOperator QOperator::identity(const std::vector<int>& dims) {
  long long prod = 1;
  for (int d : dims) prod *= d;
  arma::cx_mat eye(prod, prod, arma::fill::eye);
  return QOperator{std::move(eye), dims};
}

namespace {

// Ladder element sqrt(s(s+1) - m'(m'-1)) = sqrt((s+m')(s-m'+1)) connecting
// m' and m = m'-1.
double ladder(double s, double m_hi) { return std::sqrt((s + m_hi) * (s + 1.0 - m_hi)); }

}  // namespace

QOperator spin_matrix(SpinValue s, Axis axis) {
  const int d = s.dim();
  const double sv = s.s();
  arma::cx_mat m(d, d, arma::fill::zeros);
  switch (axis) {
    case Axis::x:
      for (int p = 0; p + 1 < d; ++p) {
        const double v = 0.5 * ladder(sv, sv - p);
        m(p, p + 1) = v;
        m(p + 1, p) = v;
      }
      break;
    case Axis::y:
      for (int p = 0; p + 1 < d; ++p) {
        const double v = 0.5 * ladder(sv, sv - p);
        m(p, p + 1) = cx(0.0, -v);
        m(p + 1, p) = cx(0.0, v);
      }
      break;
    case Axis::z:
      for (int p = 0; p < d; ++p) m(p, p) = sv - p;
      break;
    case Axis::squared:
      m.eye(d, d);
      m *= sv * (sv + 1.0);
      break;
  }
  return QOperator::single_site(std::move(m));
}

QOperator embed(const QOperator& local, int site, int n_sites) {
  const int span = local.n_sites();
  if (site < 1 || site + span - 1 > n_sites) {
    throw std::invalid_argument("spin: embed site out of range");
  }
  const int d = local.site_dims.front();
  for (int ld : local.site_dims) {
    if (ld != d) throw std::invalid_argument("spin: embed requires uniform local dimensions");
  }
  long long left = 1, right = 1;
  for (int i = 1; i < site; ++i) left *= d;
  for (int i = site + span; i <= n_sites; ++i) right *= d;

  arma::cx_mat m = local.mat;
  if (left > 1) m = arma::kron(arma::cx_mat(left, left, arma::fill::eye), m);
  if (right > 1) m = arma::kron(m, arma::cx_mat(right, right, arma::fill::eye));
  return QOperator{std::move(m), std::vector<int>(static_cast<std::size_t>(n_sites), d)};
}

QOperator collective_operator(SpinValue s, int n_sites, Axis axis) {
  if (n_sites < 1) throw std::invalid_argument("spin: collective operator needs N >= 1");
  const QOperator local = spin_matrix(s, axis);
  QOperator total = embed(local, 1, n_sites);
  for (int i = 2; i <= n_sites; ++i) total.mat += embed(local, i, n_sites).mat;
  return total;
}

}  // namespace qsense
