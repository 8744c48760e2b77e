#pragma once

// Quadratic pencil equivalent to the linear problem (H - lambda) psi = 0.
//
// Eliminating u2 = (1/alpha) (Q1 + lambda) u1 from the first block row gives
//
//   L(lambda) = (Q2 + lambda) A (Q1 + lambda) - Q1[alpha],   A = diag(1/alpha),
//             = A lambda^2 + (Q2 A + A Q1) lambda + (Q2 A Q1 - Q1[alpha]),
//
// where Q1 / Q2 carry the outer edge conditions of u1 / u2 (identical for
// idealized boundary conditions).

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dynamo/radial_operator.hpp"

namespace dynamo::pencil {

using Complex = std::complex<double>;

struct QuadraticPencil {
  Eigen::MatrixXd a2, a1, a0;
  radial::AlphaProfile profile;
  int l = 1;
  radial::RadialGrid grid;
  radial::BoundaryCondition bc = radial::BoundaryCondition::Idealized;

  Eigen::Index n() const noexcept { return a2.rows(); }
  Eigen::MatrixXcd at(Complex lambda) const;
  Eigen::MatrixXcd derivative(Complex lambda) const;  // 2 A2 lambda + A1
  Eigen::MatrixXcd second_derivative() const;         // 2 A2
  /// |A2| |lambda|^2 + |A1| |lambda| + |A0| (Frobenius).
  double scale(Complex lambda) const;
};

/// Nodes at which alpha vanishes or changes sign between neighbours; empty
/// when the pencil substitution is admissible.
std::vector<int> vanishing_nodes(const radial::AlphaProfile& profile, const radial::RadialGrid& grid);

/// Throws ProfileVanishes (listing the offending nodes) if alpha has a zero.
QuadraticPencil build_pencil(const radial::AlphaProfile& profile, int l,
                             const radial::RadialGrid& grid, radial::BoundaryCondition bc);

/// (psi1, (1/alpha) (Q1 + lambda) psi1).
Eigen::VectorXcd lift_eigenvector(const Eigen::VectorXcd& psi1, Complex lambda,
                                  const radial::AlphaProfile& profile, int l,
                                  const radial::RadialGrid& grid, radial::BoundaryCondition bc);

struct ScalarPencil {
  Complex a2, a1, a0;
  Complex discriminant;  // a1^2 - 4 a0 a2
  std::vector<Complex> roots;
  bool degenerate = false;  // a2 == 0: single root of the linear remainder
};

/// a_j = (A_j psi1, psi1) in the grid-weighted product, and the roots of
/// a2 lambda^2 + a1 lambda + a0.
ScalarPencil scalar_pencil(const Eigen::VectorXcd& psi1, const QuadraticPencil& pencil);

/// (|M(lambda0)|, |dM/dlambda(lambda0)|) at the double-root candidate
/// lambda0 = -a1 / (2 a2).
std::pair<double, double> scalar_crossing_conditions(const ScalarPencil& sp);

struct ChainOptions {
  double singular_tol = 1e-8;  // sigma_min <= tol * scale
  double gap_factor = 10.0;    // sigma_2 >= gap_factor * sigma_min
  double defect_tol = 1e-2;    // forwarded to eig::eigenvector on the linearization
};

struct KeldyshChain {
  Complex lambda0;
  Eigen::VectorXcd psi1, chi1, phi1;
  /// Raw residual norms of
  ///   L psi1,   L chi1 + L' psi1,   L phi1 + L' chi1 + L''/2 psi1.
  std::array<double, 3> residuals{};
  /// The same residuals divided by scale * (sum of norms of the vectors in
  /// each relation), a backward-error measure.
  std::array<double, 3> relative_residuals{};
  double scale = 0.0;  // |L(lambda0)| + |L'(lambda0)| + |L''|/2
  double sigma_min = 0.0;
  double sigma_second = 0.0;
  double eigen_condition = 0.0;  // |y^H x| on the linearization
};

/// Jordan-Keldysh chain at a defective pencil eigenvalue. Associated vectors
/// are least-squares solutions orthogonal to psi1.
KeldyshChain solve_keldysh_chain(const QuadraticPencil& pencil, Complex lambda0,
                                 const ChainOptions& options = {});

/// First-order companion form [[0, I], [-A2^{-1} A0, -A2^{-1} A1]].
Eigen::MatrixXd linearization(const QuadraticPencil& pencil);

struct EquivalenceReport {
  /// max over linear eigenvalues of sigma_min(L(lambda)) / scale(lambda)
  double worst_linear_in_pencil = 0.0;
  /// max over pencil (companion) eigenvalues of the relative distance to
  /// the nearest linear eigenvalue
  double worst_pencil_in_linear = 0.0;
  std::size_t linear_count = 0;
  std::size_t pencil_count = 0;
  bool passed = false;
};

EquivalenceReport pencil_linear_equivalence(const QuadraticPencil& pencil,
                                            const radial::DiscreteOperator& linear_op,
                                            double tol = 1e-8);

}  // namespace dynamo::pencil
