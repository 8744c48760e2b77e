#pragma once

// Radial discretization of the alpha^2-dynamo operator matrix
//
//   H_l[alpha] = [[-Q[1], alpha], [Q[alpha], -Q[1]]],
//   Q[alpha]   = p alpha p + alpha l(l+1)/r^2,   p = -i (d/dr + 1/r),
//
// on r in [0, 1]. Unknowns are u = r psi, in which Q becomes the
// Sturm-Liouville operator  -(alpha u')' + alpha l(l+1) u / r^2  and the
// measure r^2 dr on psi turns into dr on u. Regularity at the origin is
// u(0) = 0. At r = 1:
//   Idealized:  u1(1) = u2(1) = 0
//   Physical:   u1'(1) + l u1(1) = 0,  u2(1) = 0
// The Robin row is the image of (d/dr + (l+1)/r) psi1 = 0 under psi = u / r:
// psi' + (l+1) psi / r = (u' + l u / r) / r.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dynamo::radial {

using Complex = std::complex<double>;

/// alpha(r) = c * sum_k coeffs[k] r^k.
struct AlphaProfile {
  std::vector<double> coeffs;
  double c = 1.0;

  double operator()(double r) const noexcept;
  AlphaProfile with_scale(double scale) const;

  static AlphaProfile constant(double value);
  /// 1 - 26.09 r^2 + 53.64 r^3 - 28.22 r^4, scaled by c.
  static AlphaProfile quartic_reference(double c = 1.0);
};

/// Checked evaluation on [0, 1].
double alpha_eval(const AlphaProfile& profile, double r);

enum class BoundaryCondition { Idealized, Physical };

enum class Scheme {
  FiniteDifference2,     // uniform grid, flux-form second-order differences
  ChebyshevCollocation,  // strong-form collocation on Chebyshev-Lobatto points
  LegendreGalerkin,      // weak form on Legendre-Gauss-Lobatto points (lumped mass)
};

std::string to_string(BoundaryCondition bc);
std::string to_string(Scheme scheme);

/// Interior nodes of [0, 1] plus the quadrature weights that define the
/// discrete L2(dr) product on them. Endpoints are not unknowns.
class RadialGrid {
 public:
  static RadialGrid make(Scheme scheme, int n);

  Scheme scheme() const noexcept { return scheme_; }
  int n() const noexcept { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

  // Full node set (0 and 1 included) for the spectral schemes.
  const Eigen::VectorXd& full_nodes() const noexcept { return full_nodes_; }
  const Eigen::VectorXd& full_weights() const noexcept { return full_weights_; }
  /// d/dr on the full node set (spectral schemes only).
  const Eigen::MatrixXd& derivative() const noexcept { return derivative_; }

 private:
  Scheme scheme_ = Scheme::FiniteDifference2;
  Eigen::VectorXd nodes_, weights_;
  Eigen::VectorXd full_nodes_, full_weights_;
  Eigen::MatrixXd derivative_;
};

/// Outer edge condition for one scalar block.
enum class Edge { Dirichlet, Robin };

enum class Representation { Natural, Graded };

struct DiscreteOperator {
  Eigen::MatrixXd matrix;  // 2n x 2n acting on (u1, u2), u = r psi
  int l = 1;
  BoundaryCondition bc = BoundaryCondition::Idealized;
  AlphaProfile profile;
  RadialGrid grid;
  Representation representation = Representation::Natural;

  int n() const noexcept { return grid.n(); }
};

/// Discrete Q[alpha] on interior nodes with the given outer edge condition.
/// Robin means u'(1) + l u(1) = 0.
Eigen::MatrixXd q_block(const AlphaProfile& alpha, int l, const RadialGrid& grid, Edge edge);

/// Edge conditions of (u1, u2) for a boundary-condition family.
Edge first_component_edge(BoundaryCondition bc);

DiscreteOperator assemble(const AlphaProfile& profile, int l, const RadialGrid& grid,
                          BoundaryCondition bc);

/// J-pseudo-Hermiticity residual with J = [[0, I], [I, 0]] and the adjoint
/// taken in the grid's weighted product (H^dagger = W^{-1} H^T W).
double pseudo_hermiticity_residual_disc(const DiscreteOperator& op);

/// S^{-1} H S with S = [[I, -I], [I, I]] / sqrt(2); J becomes diag(I, -I).
DiscreteOperator to_graded_rep(const DiscreteOperator& op);

struct GradedBlockResiduals {
  double plus_plus;    // |H++ - H++^dagger|
  double minus_minus;  // |H-- - H--^dagger|
  double plus_minus;   // |H+- + H-+^dagger|
};

/// Block relations of a diag(I, -I)-pseudo-Hermitian operator, each relative
/// to max(1, |H|_F).
GradedBlockResiduals graded_block_residuals(const DiscreteOperator& graded);

/// Constant-alpha spectrum -kappa^2 +- alpha0 kappa for the first n_max
/// zeros kappa of j_l, listed as (+, -) pairs per radial mode.
std::vector<Complex> constant_alpha_oracle(double alpha0, int l, int n_max);

}  // namespace dynamo::radial
