#include <doctest.h>

#include "qsense/spin.hpp"

using namespace qsense;

namespace {

arma::cx_mat comm(const arma::cx_mat& a, const arma::cx_mat& b) { return a * b - b * a; }

}  // namespace

TEST_SUITE("spinops") {

TEST_CASE("SpinValue accepts half-integers only") {
  CHECK(SpinValue::from_double(0.5).two_s == 1);
  CHECK(SpinValue::from_double(3.0).two_s == 6);
  CHECK(SpinValue::from_double(2.5).dim() == 6);
  CHECK(SpinValue::from_double(1.0).is_integer());
  CHECK_FALSE(SpinValue::from_double(1.5).is_integer());
  CHECK_THROWS_AS(SpinValue::from_double(0.7), std::invalid_argument);
  CHECK_THROWS_AS(SpinValue::from_double(0.0), std::invalid_argument);   // d would be 1
  CHECK_THROWS_AS(SpinValue::from_double(-0.5), std::invalid_argument);
}

TEST_CASE("spin-1/2 S^x is the Pauli matrix over 2") {
  const arma::cx_mat sx = spin_matrix(SpinValue{1}, Axis::x).mat;
  arma::cx_mat expect(2, 2, arma::fill::zeros);
  expect(0, 1) = 0.5;
  expect(1, 0) = 0.5;
  CHECK(arma::norm(sx - expect, "inf") < 1e-15);
}

TEST_CASE("spin-1 S^z is diag(1, 0, -1)") {
  const arma::cx_mat sz = spin_matrix(SpinValue{2}, Axis::z).mat;
  const arma::vec expect = {1.0, 0.0, -1.0};
  CHECK(arma::norm(arma::real(sz.diag()) - expect, "inf") < 1e-15);
  CHECK(arma::norm(sz - arma::diagmat(sz.diag()), "inf") == 0.0);
}

TEST_CASE("spin-3/2 S^2 is 15/4 times the identity") {
  const arma::cx_mat s2 = spin_matrix(SpinValue{3}, Axis::squared).mat;
  arma::cx_mat expect(4, 4, arma::fill::eye);
  CHECK(arma::norm(s2 - 3.75 * expect, "inf") < 1e-14);
}

TEST_CASE("su(2) algebra, Casimir and Hermiticity for s up to 3") {
  for (int two_s = 1; two_s <= 6; ++two_s) {
    const SpinValue s{two_s};
    const arma::cx_mat sx = spin_matrix(s, Axis::x).mat;
    const arma::cx_mat sy = spin_matrix(s, Axis::y).mat;
    const arma::cx_mat sz = spin_matrix(s, Axis::z).mat;
    const cx i1(0.0, 1.0);

    CHECK(spin_matrix(s, Axis::x).is_hermitian(1e-12));
    CHECK(spin_matrix(s, Axis::y).is_hermitian(1e-12));
    CHECK(spin_matrix(s, Axis::z).is_hermitian(1e-12));

    CHECK(arma::norm(comm(sx, sy) - i1 * sz, "inf") < 1e-10);
    CHECK(arma::norm(comm(sy, sz) - i1 * sx, "inf") < 1e-10);
    CHECK(arma::norm(comm(sz, sx) - i1 * sy, "inf") < 1e-10);

    const arma::cx_mat casimir = sx * sx + sy * sy + sz * sz;
    CHECK(arma::norm(casimir - spin_matrix(s, Axis::squared).mat, "inf") < 1e-10);

    const arma::vec spectrum = arma::sort(arma::eig_sym(sz));
    const arma::vec expect = arma::linspace(-s.s(), s.s(), s.dim());
    CHECK(arma::norm(spectrum - expect, "inf") < 1e-12);
  }
}

TEST_CASE("embed places identity and local operators correctly") {
  const SpinValue s{1};
  const QOperator id = QOperator::identity({2});
  CHECK(arma::norm(embed(id, 2, 3).mat - arma::cx_mat(8, 8, arma::fill::eye), "inf") == 0.0);

  const QOperator sz = spin_matrix(s, Axis::z);
  const arma::cx_mat e1 = embed(sz, 1, 2).mat;
  const arma::vec expect = {0.5, 0.5, -0.5, -0.5};
  CHECK(arma::norm(arma::real(e1.diag()) - expect, "inf") < 1e-15);

  // trace multiplicativity
  arma::arma_rng::set_seed(7);
  arma::cx_mat a(3, 3, arma::fill::randu);
  a = a + a.t();
  const QOperator op = QOperator::single_site(a);
  const cx tr_embedded = arma::trace(embed(op, 2, 3).mat);
  CHECK(std::abs(tr_embedded - arma::trace(a) * 9.0) < 1e-10);

  CHECK_THROWS_AS(embed(sz, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(sz, 3, 2), std::invalid_argument);
}

TEST_CASE("embed is a homomorphism") {
  arma::arma_rng::set_seed(11);
  arma::cx_mat a(3, 3, arma::fill::randu), b(3, 3, arma::fill::randu);
  const QOperator qa = QOperator::single_site(a);
  const QOperator qb = QOperator::single_site(b);
  const QOperator qab = QOperator::single_site(a * b);
  const arma::cx_mat lhs = embed(qab, 2, 3).mat;
  const arma::cx_mat rhs = embed(qa, 2, 3).mat * embed(qb, 2, 3).mat;
  CHECK(arma::norm(lhs - rhs, "inf") < 1e-12);
}

TEST_CASE("collective operators") {
  const arma::cx_mat jz1 = collective_operator(SpinValue{1}, 1, Axis::z).mat;
  CHECK(std::abs(jz1(0, 0).real() - 0.5) < 1e-15);
  CHECK(std::abs(jz1(1, 1).real() + 0.5) < 1e-15);

  for (int two_s : {1, 3}) {
    const SpinValue s{two_s};
    const int n = 3;
    const arma::cx_mat jz = collective_operator(s, n, Axis::z).mat;
    const arma::vec ev = arma::eig_sym(jz);
    CHECK(std::abs(ev.max() - n * s.s()) < 1e-12);  // fully polarized state

    const arma::cx_mat jx = collective_operator(s, n, Axis::x).mat;
    const arma::cx_mat jy = collective_operator(s, n, Axis::y).mat;
    CHECK(arma::norm(comm(jx, jy) - cx(0, 1) * jz, "inf") < 1e-10);
  }
}

}  // TEST_SUITE
