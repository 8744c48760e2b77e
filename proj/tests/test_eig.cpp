#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dynamo/eig.hpp"
#include "dynamo/error.hpp"
#include "dynamo/toy2x2.hpp"

using namespace dynamo;
using namespace dynamo::eig;

namespace {

Eigen::MatrixXd random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

// Sorted copies compared pairwise.
double max_sorted_distance(std::vector<Complex> a, std::vector<Complex> b) {
  std::sort(a.begin(), a.end(), spectral_order);
  std::sort(b.begin(), b.end(), spectral_order);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("small examples") {
  Eigen::MatrixXd h(2, 2);
  h << 0, 1, -1, 0;
  Spectrum s = dense_spectrum(h);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues[0] - Complex(0, 1)) < 1e-14);
  CHECK(std::abs(s.eigenvalues[1] - Complex(0, -1)) < 1e-14);

  h << 2, 0, 0, -3;
  s = dense_spectrum(h);
  CHECK(s.eigenvalues[0] == Complex(2.0));
  CHECK(s.eigenvalues[1] == Complex(-3.0));

  Eigen::MatrixXd one(1, 1);
  one << 4.5;
  CHECK(dense_spectrum(one).eigenvalues[0] == Complex(4.5));
}

TEST_CASE("companion matrix roots") {
  // z^3 - 6 z^2 + 11 z - 6 = (z - 1)(z - 2)(z - 3)
  Eigen::MatrixXd c(3, 3);
  c << 6, -11, 6, 1, 0, 0, 0, 1, 0;
  const Spectrum s = dense_spectrum(c, {.with_residuals = true});
  CHECK(std::abs(s.eigenvalues[0] - 3.0) < 1e-12);
  CHECK(std::abs(s.eigenvalues[1] - 2.0) < 1e-12);
  CHECK(std::abs(s.eigenvalues[2] - 1.0) < 1e-12);
  for (double r : s.residuals) CHECK(r < 1e-12);
}

TEST_CASE("input validation") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(3, 3);
  h(1, 2) = NAN;
  CHECK_THROWS_AS(dense_spectrum(h), Error);
  CHECK_THROWS_AS(dense_spectrum(Eigen::MatrixXd(2, 3)), Error);
}

TEST_CASE("trace, determinant and similarity invariance") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd h = random_matrix(20, rng);
    const Spectrum s = dense_spectrum(h, {.with_residuals = true});
    REQUIRE(s.converged);
    Complex sum = 0.0, prod = 1.0;
    for (const Complex& z : s.eigenvalues) {
      sum += z;
      prod *= z;
    }
    CHECK(std::abs(sum - h.trace()) < 1e-10 * h.norm());
    const double det = h.determinant();
    CHECK(std::abs(prod - det) < 1e-9 * std::max(1.0, std::abs(det)));
    for (double r : s.residuals) CHECK(r < 1e-12);
    // Conjugate pairs come out adjacent.
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues[i].imag() > 0) {
        CHECK(std::abs(s.eigenvalues[i + 1] - std::conj(s.eigenvalues[i])) < 1e-10);
      }
    }
    Eigen::MatrixXd p = random_matrix(20, rng) + 5.0 * Eigen::MatrixXd::Identity(20, 20);
    const Spectrum t = dense_spectrum(p * h * p.inverse());
    CHECK(max_sorted_distance(s.eigenvalues, t.eigenvalues) < 1e-8 * h.norm());
  }
}

TEST_CASE("agreement with the Eigen backend") {
  std::mt19937 rng(8);
  for (int n : {2, 5, 17, 40}) {
    const Eigen::MatrixXd h = random_matrix(n, rng);
    const Spectrum a = dense_spectrum(h);
    const Spectrum b = dense_spectrum(h, {.backend = Backend::Eigen});
    CHECK(max_sorted_distance(a.eigenvalues, b.eigenvalues) < 1e-10 * h.norm());
  }
}

TEST_CASE("badly scaled matrices") {
  // Balancing copes with entries across many orders of magnitude.
  Eigen::MatrixXd h(3, 3);
  h << 1, 1e8, 0, 1e-8, 2, 1e8, 0, 1e-8, 3;
  const Spectrum s = dense_spectrum(h, {.with_residuals = true});
  const Spectrum ref = dense_spectrum(h, {.backend = Backend::Eigen});
  CHECK(max_sorted_distance(s.eigenvalues, ref.eigenvalues) < 1e-8);
}

TEST_CASE("spectral order") {
  CHECK(spectral_order(Complex(1, 0), Complex(0, 5)));
  CHECK(spectral_order(Complex(1, 2), Complex(1, -2)));
  CHECK_FALSE(spectral_order(Complex(1, 2), Complex(1, 2)));
}

TEST_CASE("eigenvector of a toy point") {
  const toy::ToyPoint p{0, 1, 0.5, 0};
  const Eigen::MatrixXd h = p.matrix().real();
  const double lam = std::sqrt(0.75);
  const EigenvectorResult r = eigenvector(h, lam);
  CHECK(r.residual < 1e-8);
  CHECK_FALSE(r.near_defective);
  const Eigen::Vector2cd col = toy::diagonalize(p).s.col(1);
  // Parallel to the matching column of S.
  const Complex overlap = col.normalized().dot(r.vector);
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-8);
}

TEST_CASE("Jordan block is flagged near-defective") {
  Eigen::MatrixXd j(3, 3);
  j << 2, 1, 0, 0, 2, 0, 0, 0, -1;
  const EigenvectorResult r = eigenvector(j, 2.0);
  CHECK(r.near_defective);
  CHECK(std::abs(std::abs(r.vector(0)) - 1.0) < 1e-6);

  // A semisimple double eigenvalue is not.
  Eigen::MatrixXd d(3, 3);
  d << 2, 0, 0, 0, 2, 0, 0, 0, -1;
  CHECK_FALSE(eigenvector(d, 2.0).near_defective);

  CHECK_FALSE(eigenvector(j, -1.0).near_defective);
}

TEST_CASE("eigenvector failure modes") {
  CHECK_THROWS_AS(eigenvector(Eigen::MatrixXd(0, 0), 1.0), Error);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(2, 2);
  h(0, 0) = INFINITY;
  CHECK_THROWS_AS(eigenvector(h, 1.0), Error);
  // Far from the spectrum inverse iteration cannot reach the tolerance.
  const Eigen::MatrixXd d = Eigen::Vector3d(1, 2, 3).asDiagonal();
  try {
    eigenvector(d, 50.0);
    FAIL("converged away from the spectrum");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
}
