// Spin-s operators in arbitrary dimension and their tensor-product embedding.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <armadillo>

namespace qsense {

using cx = std::complex<double>;

// Spin quantum number stored as 2s, so half-integers stay exact.
struct SpinValue {
  int two_s = 1;

  // Accepts 0.5, 1, 1.5, ... ; rejects anything that is not a half-integer
  // or that gives a local dimension below 2.
  static SpinValue from_double(double s);

  double s() const { return 0.5 * two_s; }
  int dim() const { return two_s + 1; }
  bool is_integer() const { return two_s % 2 == 0; }

  bool operator==(const SpinValue&) const = default;
};

enum class Axis { x, y, z, squared };

// Dense operator on a tensor-product Hilbert space.  site_dims lists the
// local dimension of each site, site 1 first; site 1 is the leftmost
// (slowest-varying) Kronecker factor.
struct QOperator {
  arma::cx_mat mat;
  std::vector<int> site_dims;

  int dim() const { return static_cast<int>(mat.n_rows); }
  int n_sites() const { return static_cast<int>(site_dims.size()); }
  bool is_hermitian(double tol = 1e-12) const;

  static QOperator on_sites(arma::cx_mat m, std::vector<int> dims);
  static QOperator single_site(arma::cx_mat m);
  static QOperator identity(const std::vector<int>& dims);
};

// d x d matrix of S^x, S^y, S^z or S^2 with basis labels |0>,...,|d-1>
// ordered by descending magnetic quantum number (|0>  <->  m = +s).
QOperator spin_matrix(SpinValue s, Axis axis);

// I (x) ... (x) local (x) ... (x) I with `local` starting at `site`
// (1-based).  `local` may span several contiguous sites.
QOperator embed(const QOperator& local, int site, int n_sites);

// J^axis = sum_i S_i^axis on n_sites qudits.
QOperator collective_operator(SpinValue s, int n_sites, Axis axis);

}  // namespace qsense
