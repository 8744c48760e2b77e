#include "dynamo/radial_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dynamo/error.hpp"
#include "dynamo/special.hpp"

namespace dynamo::radial {

namespace {

constexpr int kMinGridNodes = 8;

// d/dx on arbitrary distinct nodes via barycentric weights. Factors are
// scaled by 2 (the inverse capacity of [-1, 1]) to keep the products in range.
Eigen::MatrixXd barycentric_derivative(const Eigen::VectorXd& x) {
  const auto m = x.size();
  Eigen::VectorXd w(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double prod = 1.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k != j) prod *= 2.0 * (x(j) - x(k));
    }
    w(j) = 1.0 / prod;
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      d(i, j) = (w(j) / w(i)) / (x(i) - x(j));
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

// Clenshaw-Curtis weights on [-1, 1] for the nodes cos(k pi / m), k = 0..m.
Eigen::VectorXd clenshaw_curtis(int m) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m - 1);
  auto theta = [m](int k) { return std::numbers::pi * k / m; };
  if (m % 2 == 0) {
    w(0) = w(m) = 1.0 / (m * m - 1.0);
    for (int k = 1; k < m / 2; ++k) {
      for (int i = 1; i < m; ++i) v(i - 1) -= 2.0 * std::cos(2.0 * k * theta(i)) / (4.0 * k * k - 1.0);
    }
    for (int i = 1; i < m; ++i) v(i - 1) -= std::cos(m * theta(i)) / (m * m - 1.0);
  } else {
    w(0) = w(m) = 1.0 / (static_cast<double>(m) * m);
    for (int k = 1; k <= (m - 1) / 2; ++k) {
      for (int i = 1; i < m; ++i) v(i - 1) -= 2.0 * std::cos(2.0 * k * theta(i)) / (4.0 * k * k - 1.0);
    }
  }
  for (int i = 1; i < m; ++i) w(i) = 2.0 * v(i - 1) / m;
  return w;
}

// Legendre-Gauss-Lobatto nodes (increasing) and weights on [-1, 1], degree m.
void legendre_lobatto(int m, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(m + 1);
  w.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    double xj = -std::cos(std::numbers::pi * j / m);
    double pm = 0.0, pm1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xj;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xj * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pm = p1;
      pm1 = p0;
      const double step = (xj * pm - pm1) / ((m + 1.0) * pm);
      xj -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    }
    // Re-evaluate P_m at the converged node for the weight.
    double p0 = 1.0, p1 = xj;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * xj * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    x(j) = xj;
    w(j) = 2.0 / (m * (m + 1.0) * p1 * p1);
  }
  x(0) = -1.0;
  x(m) = 1.0;
}

Eigen::VectorXd sample(const AlphaProfile& alpha, const Eigen::VectorXd& r) {
  Eigen::VectorXd out(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) out(i) = alpha(r(i));
  return out;
}

Eigen::MatrixXd q_block_fd(const AlphaProfile& alpha, int l, const RadialGrid& grid, Edge edge) {
  const int n = grid.n();
  const double h = 1.0 / (n + 1);
  const double ll = l * (l + 1.0);
  const Eigen::VectorXd& r = grid.nodes();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double a_lo = alpha(r(i) - 0.5 * h);
    const double a_hi = alpha(r(i) + 0.5 * h);
    q(i, i) = (a_lo + a_hi) / (h * h) + alpha(r(i)) * ll / (r(i) * r(i));
    if (i > 0) q(i, i - 1) = -a_lo / (h * h);
    if (i + 1 < n) q(i, i + 1) = -a_hi / (h * h);
  }
  if (edge == Edge::Robin) {
    // u(1) from the one-sided stencil (3 u(1) - 4 u_n + u_{n-1}) / 2h = -l u(1).
    const double a_hi = alpha(1.0 - 0.5 * h) / (h * h);
    const double denom = 3.0 + 2.0 * h * l;
    q(n - 1, n - 1) -= a_hi * 4.0 / denom;
    q(n - 1, n - 2) += a_hi / denom;
  }
  return q;
}

// Extension from interior values to the full node set honouring u(0) = 0 and
// the outer edge condition.
Eigen::MatrixXd extension(const RadialGrid& grid, int l, Edge edge) {
  const int n = grid.n();
  const Eigen::MatrixXd& d = grid.derivative();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n + 2, n);
  e.block(1, 0, n, n).setIdentity();
  if (edge == Edge::Robin) {
    const double denom = d(n + 1, n + 1) + l;
    e.row(n + 1) = -d.block(n + 1, 1, 1, n) / denom;
  }
  return e;
}

Eigen::MatrixXd q_block_spectral(const AlphaProfile& alpha, int l, const RadialGrid& grid,
                                 Edge edge) {
  const int n = grid.n();
  const double ll = l * (l + 1.0);
  const Eigen::MatrixXd& d = grid.derivative();
  const Eigen::VectorXd a_full = sample(alpha, grid.full_nodes());
  const Eigen::MatrixXd e = extension(grid, l, edge);
  Eigen::MatrixXd q;
  if (grid.scheme() == Scheme::ChebyshevCollocation) {
    const Eigen::MatrixXd flux = -d * a_full.asDiagonal() * d;
    q = flux.middleRows(1, n) * e;
  } else {
    // Weak form tested against the interior Lagrange cardinals, which vanish
    // at both ends, so no boundary term appears.
    const Eigen::VectorXd wa = grid.full_weights().cwiseProduct(a_full);
    const Eigen::MatrixXd stiffness = d.transpose() * wa.asDiagonal() * d;
    q = grid.weights().cwiseInverse().asDiagonal() * (stiffness.middleRows(1, n) * e);
  }
  const Eigen::VectorXd& r = grid.nodes();
  for (int i = 0; i < n; ++i) q(i, i) += a_full(i + 1) * ll / (r(i) * r(i));
  return q;
}

}  // namespace

double AlphaProfile::operator()(double r) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
  return c * acc;
}

AlphaProfile AlphaProfile::with_scale(double scale) const { return {coeffs, scale}; }

AlphaProfile AlphaProfile::constant(double value) { return {{value}, 1.0}; }

AlphaProfile AlphaProfile::quartic_reference(double c) {
  return {{1.0, 0.0, -26.09, 53.64, -28.22}, c};
}

double alpha_eval(const AlphaProfile& profile, double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha_eval: r must lie in [0, 1]");
  }
  const double value = profile(r);
  if (!std::isfinite(value)) throw Error(ErrorKind::NonFiniteInput, "alpha_eval: non-finite profile");
  return value;
}

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Idealized ? "idealized" : "physical";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::FiniteDifference2: return "fd2";
    case Scheme::ChebyshevCollocation: return "chebyshev";
    case Scheme::LegendreGalerkin: return "legendre";
  }
  return "?";
}

RadialGrid RadialGrid::make(Scheme scheme, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "RadialGrid: need at least 2 interior nodes");
  RadialGrid g;
  g.scheme_ = scheme;
  const int m = n + 1;  // intervals / polynomial degree
  if (scheme == Scheme::FiniteDifference2) {
    const double h = 1.0 / m;
    g.nodes_ = Eigen::VectorXd::LinSpaced(n, h, n * h);
    g.weights_ = Eigen::VectorXd::Constant(n, h);
    g.full_nodes_ = Eigen::VectorXd::LinSpaced(m + 1, 0.0, 1.0);
    g.full_weights_ = Eigen::VectorXd::Constant(m + 1, h);
    g.full_weights_(0) = g.full_weights_(m) = 0.5 * h;
    return g;
  }
  Eigen::VectorXd x, w;
  if (scheme == Scheme::ChebyshevCollocation) {
    x.resize(m + 1);
    for (int k = 0; k <= m; ++k) x(k) = -std::cos(std::numbers::pi * k / m);
    x(0) = -1.0;
    x(m) = 1.0;
    if (m % 2 == 0) x(m / 2) = 0.0;
    w = clenshaw_curtis(m).reverse();
  } else {
    legendre_lobatto(m, x, w);
  }
  g.full_nodes_ = 0.5 * (x.array() + 1.0);
  g.full_weights_ = 0.5 * w;
  g.derivative_ = 2.0 * barycentric_derivative(x);
  g.nodes_ = g.full_nodes_.segment(1, n);
  g.weights_ = g.full_weights_.segment(1, n);
  return g;
}

Edge first_component_edge(BoundaryCondition bc) {
  return bc == BoundaryCondition::Physical ? Edge::Robin : Edge::Dirichlet;
}

Eigen::MatrixXd q_block(const AlphaProfile& alpha, int l, const RadialGrid& grid, Edge edge) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "angular mode number l must be >= 1");
  if (grid.scheme() == Scheme::FiniteDifference2) return q_block_fd(alpha, l, grid, edge);
  return q_block_spectral(alpha, l, grid, edge);
}

DiscreteOperator assemble(const AlphaProfile& profile, int l, const RadialGrid& grid,
                          BoundaryCondition bc) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "angular mode number l must be >= 1");
  if (grid.n() < kMinGridNodes) {
    throw Error(ErrorKind::InvalidArgument, "grid too coarse: need n >= 8 interior nodes");
  }
  for (double a : profile.coeffs) {
    if (!std::isfinite(a)) throw Error(ErrorKind::NonFiniteInput, "profile coefficient");
  }
  if (!std::isfinite(profile.c)) throw Error(ErrorKind::NonFiniteInput, "profile scale C");

  const int n = grid.n();
  const Edge edge1 = first_component_edge(bc);
  const AlphaProfile unit = AlphaProfile::constant(1.0);

  DiscreteOperator op{Eigen::MatrixXd::Zero(2 * n, 2 * n), l, bc, profile, grid,
                      Representation::Natural};
  op.matrix.topLeftCorner(n, n) = -q_block(unit, l, grid, edge1);
  op.matrix.topRightCorner(n, n) = sample(profile, grid.nodes()).asDiagonal();
  op.matrix.bottomLeftCorner(n, n) = q_block(profile, l, grid, edge1);
  op.matrix.bottomRightCorner(n, n) = -q_block(unit, l, grid, Edge::Dirichlet);
  return op;
}

namespace {

// Matrix in a W-orthonormal basis: G H G^{-1}, G = diag(sqrt(w), sqrt(w)).
Eigen::MatrixXd orthonormal_basis_matrix(const DiscreteOperator& op) {
  const int n = op.n();
  Eigen::VectorXd g(2 * n);
  g << op.grid.weights().cwiseSqrt(), op.grid.weights().cwiseSqrt();
  return g.asDiagonal() * op.matrix * g.cwiseInverse().asDiagonal();
}

}  // namespace

double pseudo_hermiticity_residual_disc(const DiscreteOperator& op) {
  const int n = op.n();
  const Eigen::MatrixXd h = orthonormal_basis_matrix(op);
  const auto a = h.topLeftCorner(n, n);
  const auto b = h.topRightCorner(n, n);
  const auto c = h.bottomLeftCorner(n, n);
  const auto d = h.bottomRightCorner(n, n);
  double defect2 = 0.0;
  if (op.representation == Representation::Natural) {
    // J H^T J = [[D^T, B^T], [C^T, A^T]] for the block swap J.
    defect2 = (d.transpose() - a).squaredNorm() + (b.transpose() - b).squaredNorm() +
              (c.transpose() - c).squaredNorm() + (a.transpose() - d).squaredNorm();
  } else {
    // mu H^T mu = [[A^T, -C^T], [-B^T, D^T]] for mu = diag(I, -I).
    defect2 = (a.transpose() - a).squaredNorm() + (c.transpose() + b).squaredNorm() +
              (b.transpose() + c).squaredNorm() + (d.transpose() - d).squaredNorm();
  }
  return std::sqrt(defect2) / std::max(1.0, h.norm());
}

DiscreteOperator to_graded_rep(const DiscreteOperator& op) {
  if (op.representation == Representation::Graded) return op;
  const int n = op.n();
  const auto a = op.matrix.topLeftCorner(n, n);
  const auto b = op.matrix.topRightCorner(n, n);
  const auto c = op.matrix.bottomLeftCorner(n, n);
  const auto d = op.matrix.bottomRightCorner(n, n);
  // S^{-1} = S^T = [[I, I], [-I, I]] / sqrt(2); the two 1/sqrt(2) give 1/2.
  DiscreteOperator out = op;
  out.matrix.topLeftCorner(n, n) = 0.5 * (a + b + c + d);
  out.matrix.topRightCorner(n, n) = 0.5 * (-a + b - c + d);
  out.matrix.bottomLeftCorner(n, n) = 0.5 * (-a - b + c + d);
  out.matrix.bottomRightCorner(n, n) = 0.5 * (a - b - c + d);
  out.representation = Representation::Graded;
  return out;
}

GradedBlockResiduals graded_block_residuals(const DiscreteOperator& graded) {
  if (graded.representation != Representation::Graded) {
    throw Error(ErrorKind::InvalidArgument, "graded_block_residuals needs a graded operator");
  }
  const int n = graded.n();
  const Eigen::MatrixXd h = orthonormal_basis_matrix(graded);
  const double scale = std::max(1.0, h.norm());
  const auto pp = h.topLeftCorner(n, n);
  const auto pm = h.topRightCorner(n, n);
  const auto mp = h.bottomLeftCorner(n, n);
  const auto mm = h.bottomRightCorner(n, n);
  return {(pp - pp.transpose()).norm() / scale, (mm - mm.transpose()).norm() / scale,
          (pm + mp.transpose()).norm() / scale};
}

std::vector<Complex> constant_alpha_oracle(double alpha0, int l, int n_max) {
  if (l < 1) throw Error(ErrorKind::InvalidArgument, "constant_alpha_oracle: l must be >= 1");
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "constant_alpha_oracle: n_max must be >= 1");
  std::vector<Complex> out;
  out.reserve(2 * static_cast<std::size_t>(n_max));
  for (double kappa : special::spherical_bessel_zeros(l, n_max)) {
    out.emplace_back(-kappa * kappa + alpha0 * kappa, 0.0);
    out.emplace_back(-kappa * kappa - alpha0 * kappa, 0.0);
  }
  return out;
}

}  // namespace dynamo::radial
