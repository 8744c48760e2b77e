#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

#include "dynamo/eig.hpp"
#include "dynamo/error.hpp"

namespace dynamo::eig {

namespace {

Eigen::VectorXcd random_unit(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

struct Iterate {
  Eigen::VectorXcd v;
  double residual = std::numeric_limits<double>::infinity();
};

// Inverse iteration with a prefactored shifted matrix. `against`, if
// non-empty, is projected out of the start vector only.
Iterate inverse_iterate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu,
                        const Eigen::MatrixXcd& a, Complex lambda, Eigen::VectorXcd v,
                        int iterations, double target) {
  Iterate best;
  const double anorm = std::max(a.norm(), std::numeric_limits<double>::min());
  for (int k = 0; k < iterations; ++k) {
    v = lu.solve(v);
    const double vn = v.norm();
    if (!std::isfinite(vn) || vn == 0.0) break;
    v /= vn;
    const double res = (a * v - lambda * v).norm() / anorm;
    if (res < best.residual) best = {v, res};
    if (res <= target) break;
  }
  return best;
}

}  // namespace

EigenvectorResult eigenvector(const Eigen::MatrixXd& h, Complex lambda,
                              const EigenvectorOptions& options) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "eigenvector needs a non-empty square matrix");
  }
  if (!h.allFinite()) throw Error(ErrorKind::NonFiniteInput, "eigenvector: NaN/Inf entry");
  const auto n = h.rows();
  const Eigen::MatrixXcd a = h.cast<Complex>();
  const double hnorm = std::max(a.norm(), 1.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // A tiny shift keeps the factorization regular when lambda is exact. It is
  // tied to |lambda| rather than |H|: spectral discretizations have |H| many
  // orders above the eigenvalues of interest.
  const double shift = 1e-10 * std::max(1.0, std::abs(lambda));
  const Complex sigma = lambda + Complex(shift, 0.5 * shift);
  const Eigen::MatrixXcd shifted = a - sigma * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> right_lu(shifted);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> left_lu(Eigen::MatrixXcd(shifted.adjoint()));

  std::mt19937 rng(options.seed);
  Iterate right;
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    const Iterate it = inverse_iterate(right_lu, a, lambda, random_unit(n, rng),
                                       options.iterations_per_start, options.residual_tol);
    if (it.residual < right.residual) right = it;
    if (right.residual <= options.residual_tol) break;
  }
  if (!(right.residual <= options.residual_tol)) {
    throw Error(ErrorKind::NonConvergence,
                "inverse iteration residual " + std::to_string(right.residual));
  }

  const Eigen::MatrixXcd ah = a.adjoint();
  const Iterate left = inverse_iterate(left_lu, ah, std::conj(lambda), random_unit(n, rng),
                                       options.iterations_per_start, options.residual_tol);

  EigenvectorResult out;
  out.vector = right.v;
  out.residual = right.residual;
  out.condition = std::abs(left.v.dot(right.v));

  if (out.condition < options.defect_tol && n > 1) {
    // Small |y^H v| also occurs for a semisimple double eigenvalue. Iterate
    // from a start orthogonal to v to span the two-dimensional cluster
    // subspace, project A onto it and compare the eigenvalue split with the
    // nilpotent part: a Jordan-like cluster has split << |B - mu I|.
    Eigen::VectorXcd start = random_unit(n, rng);
    start -= right.v * right.v.dot(start);
    Eigen::VectorXcd w = start.normalized();
    for (int k = 0; k < options.iterations_per_start; ++k) {
      w = right_lu.solve(w);
      const double wn = w.norm();
      if (!std::isfinite(wn) || wn == 0.0) break;
      w /= wn;
    }
    Eigen::VectorXcd q2 = w - right.v * right.v.dot(w);
    const double independent = q2.norm();
    bool semisimple = false;
    if (independent > 1e-8) {
      Eigen::MatrixXcd q(n, 2);
      q.col(0) = right.v;
      q.col(1) = q2 / independent;
      const Eigen::Matrix2cd b = q.adjoint() * a * q;
      const Complex mu = 0.5 * b.trace();
      const Eigen::Matrix2cd dev = b - mu * Eigen::Matrix2cd::Identity();
      const double nu = dev.norm();
      const double split = std::abs(std::sqrt(-dev.determinant()));
      semisimple = nu <= 1e3 * eps * hnorm || split >= options.defect_tol * nu;
    }
    out.near_defective = !semisimple;
  }
  return out;
}

}  // namespace dynamo::eig
