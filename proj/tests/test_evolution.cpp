#include <doctest.h>

#include "qsense/evolution.hpp"
#include "qsense/hamiltonian.hpp"

using namespace qsense;

TEST_SUITE("evolution") {

TEST_CASE("diagonalize sorts eigenvalues and reconstructs the input") {
  arma::cx_mat d(4, 4, arma::fill::zeros);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  d(3, 3) = 2.0;
  const SpectralCache cache = diagonalize(QOperator::single_site(d));
  const arma::vec expect = {-1.0, 0.5, 2.0, 3.0};
  CHECK(arma::norm(cache.eigenvalues - expect, "inf") < 1e-14);
  // Permutation columns: each has a single unit entry.
  for (int c = 0; c < 4; ++c) {
    CHECK(arma::norm(cache.eigenvectors.col(c), 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(arma::abs(cache.eigenvectors.col(c)).max() == doctest::Approx(1.0).epsilon(1e-12));
  }

  ModelSpec spec;
  spec.s = SpinValue{3};
  const QOperator h = build_sensor(spec);
  const SpectralCache hc = diagonalize(h);
  CHECK(hc.real_basis);
  const arma::cx_mat recon =
      hc.eigenvectors * arma::diagmat(arma::cx_vec(hc.eigenvalues,
                                                   arma::vec(hc.dim(), arma::fill::zeros))) *
      hc.eigenvectors.t();
  CHECK(arma::norm(recon - h.mat, "inf") < 1e-9);
  CHECK(arma::norm(hc.eigenvectors.t() * hc.eigenvectors -
                       arma::cx_mat(hc.dim(), hc.dim(), arma::fill::eye), "inf") < 1e-10);
}

TEST_CASE("collective J^z spectrum for two qubits") {
  const QOperator jz = collective_operator(SpinValue{1}, 2, Axis::z);
  const SpectralCache cache = diagonalize(jz);
  const arma::vec expect = {-1.0, 0.0, 0.0, 1.0};
  CHECK(arma::norm(cache.eigenvalues - expect, "inf") < 1e-14);
}

TEST_CASE("non-Hermitian input is rejected") {
  arma::cx_mat bad(3, 3, arma::fill::randu);
  bad(0, 1) += cx(0.0, 1.0);
  CHECK_THROWS_AS(diagonalize(QOperator::single_site(bad)), std::invalid_argument);
}

TEST_CASE("propagator identities") {
  ModelSpec spec;
  spec.n_sites = 3;
  spec.s = SpinValue{2};
  const SpectralCache cache = diagonalize(build_sensor(spec));
  const int n = cache.dim();
  const arma::cx_mat eye_n(n, n, arma::fill::eye);

  CHECK(arma::norm(propagator(cache, 0.0).mat - eye_n, "inf") < 1e-13);

  const arma::cx_mat u1 = propagator(cache, 0.37).mat;
  const arma::cx_mat u2 = propagator(cache, 1.21).mat;
  CHECK(arma::norm(u1 * u2 - propagator(cache, 1.58).mat, "inf") < 1e-9);
  CHECK(arma::norm(u1 * u1.t() - eye_n, "inf") < 1e-9);
}

TEST_CASE("evolution preserves what it should") {
  ModelSpec spec;
  spec.n_sites = 2;
  spec.s = SpinValue{3};
  const QOperator h = build_sensor(spec);
  const SpectralCache cache = diagonalize(h);

  const QState gibbs = thermal_state(h, 1.7);
  // Thermal state of H commutes with H: evolution leaves it unchanged.
  const QState moved = evolve(gibbs, cache, 2.9);
  CHECK(arma::norm(moved.density() - gibbs.density(), "inf") < 1e-11);

  // Forward then backward returns the original state.
  arma::arma_rng::set_seed(21);
  arma::cx_mat a(16, 16, arma::fill::randu);
  arma::cx_mat rho = a * a.t();
  rho /= arma::trace(rho).real();
  const QState st = QState::mixed_preserving(rho, {4, 4});
  const QState roundtrip = evolve(evolve(st, cache, 5.3), cache, -5.3);
  CHECK(arma::norm(roundtrip.density() - rho, "inf") < 1e-9);

  // Purity and energy are conserved along the flow.
  const QState rolled = evolve(st, cache, 1.23);
  CHECK(rolled.purity() == doctest::Approx(st.purity()).epsilon(1e-10));
  const double e0 = std::real(arma::trace(h.mat * rho));
  const double e1 = std::real(arma::trace(h.mat * rolled.density()));
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-9));

  const QState tiny = QState::mixed(arma::cx_mat(2, 2, arma::fill::eye) / 2.0, {2});
  CHECK_THROWS_AS(evolve(tiny, cache, 1.0), std::invalid_argument);
}

TEST_CASE("diagonal target evolution equals elementwise phases") {
  ModelSpec spec;
  spec.n_sites = 3;
  spec.s = SpinValue{2};
  spec.omega = 0.4;
  const QOperator tar = build_target(spec);
  const SpectralCache cache = diagonalize(tar);

  arma::arma_rng::set_seed(33);
  arma::cx_mat a(27, 27, arma::fill::randu);
  arma::cx_mat rho = a * a.t();
  rho /= arma::trace(rho).real();
  const double t = 3.7;
  const QState evolved = evolve(QState::mixed_preserving(rho, {3, 3, 3}), cache, t);

  // Fast path: rho_kl -> exp(-i (d_k - d_l) t) rho_kl on the diagonal entries.
  arma::cx_vec ph(27);
  for (int k = 0; k < 27; ++k) ph(k) = std::polar(1.0, -tar.mat(k, k).real() * t);
  arma::cx_mat direct = rho;
  direct.each_col() %= ph;
  direct.each_row() %= arma::conj(ph).st();
  CHECK(arma::norm(evolved.density() - direct, "inf") < 1e-10);
}

}  // TEST_SUITE
