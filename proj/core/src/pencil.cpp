#include "dynamo/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "dynamo/eig.hpp"
#include "dynamo/error.hpp"

namespace dynamo::pencil {

namespace {

using radial::AlphaProfile;
using radial::Edge;

Eigen::VectorXd nodal_alpha(const AlphaProfile& profile, const radial::RadialGrid& grid) {
  Eigen::VectorXd a(grid.n());
  for (int i = 0; i < grid.n(); ++i) a(i) = profile(grid.nodes()(i));
  return a;
}

// (x, y)_W = x^H W y.
Complex weighted_dot(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y,
                     const Eigen::VectorXd& w) {
  return x.dot(w.cast<Complex>().cwiseProduct(y));
}

// Least-squares solve of m x = rhs with the smallest singular direction
// removed, so the result is orthogonal to the null vector.
Eigen::VectorXcd truncated_solve(const Eigen::JacobiSVD<Eigen::MatrixXcd>& svd,
                                 const Eigen::VectorXcd& rhs) {
  const auto& s = svd.singularValues();
  const auto keep = s.size() - 1;
  const Eigen::VectorXcd coeff = svd.matrixU().leftCols(keep).adjoint() * rhs;
  return svd.matrixV().leftCols(keep) * (coeff.array() / s.head(keep).array().cast<Complex>()).matrix();
}

}  // namespace

Eigen::MatrixXcd QuadraticPencil::at(Complex lambda) const {
  return lambda * lambda * a2.cast<Complex>() + lambda * a1.cast<Complex>() + a0.cast<Complex>();
}

Eigen::MatrixXcd QuadraticPencil::derivative(Complex lambda) const {
  return 2.0 * lambda * a2.cast<Complex>() + a1.cast<Complex>();
}

Eigen::MatrixXcd QuadraticPencil::second_derivative() const {
  return 2.0 * a2.cast<Complex>();
}

double QuadraticPencil::scale(Complex lambda) const {
  const double r = std::abs(lambda);
  return a2.norm() * r * r + a1.norm() * r + a0.norm();
}

std::vector<int> vanishing_nodes(const AlphaProfile& profile, const radial::RadialGrid& grid) {
  const Eigen::VectorXd a = nodal_alpha(profile, grid);
  std::vector<int> bad;
  for (int i = 0; i < a.size(); ++i) {
    const bool zero = a(i) == 0.0;
    const bool flips = i + 1 < a.size() && (a(i) > 0.0) != (a(i + 1) > 0.0) && a(i + 1) != 0.0;
    if (zero || flips) {
      if (bad.empty() || bad.back() != i) bad.push_back(i);
      if (flips) bad.push_back(i + 1);
    }
  }
  return bad;
}

QuadraticPencil build_pencil(const AlphaProfile& profile, int l, const radial::RadialGrid& grid,
                             radial::BoundaryCondition bc) {
  const std::vector<int> bad = vanishing_nodes(profile, grid);
  if (!bad.empty()) {
    std::string nodes;
    for (int i : bad) nodes += (nodes.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorKind::ProfileVanishes, "alpha vanishes near grid nodes [" + nodes + "]");
  }
  const AlphaProfile unit = AlphaProfile::constant(1.0);
  const Edge edge1 = radial::first_component_edge(bc);
  const Eigen::MatrixXd q1 = radial::q_block(unit, l, grid, edge1);
  const Eigen::MatrixXd q2 = radial::q_block(unit, l, grid, Edge::Dirichlet);
  const Eigen::MatrixXd qa = radial::q_block(profile, l, grid, edge1);
  const Eigen::VectorXd inv_alpha = nodal_alpha(profile, grid).cwiseInverse();

  QuadraticPencil p;
  p.a2 = inv_alpha.asDiagonal();
  p.a1 = q2 * inv_alpha.asDiagonal() + inv_alpha.asDiagonal() * q1;
  p.a0 = q2 * inv_alpha.asDiagonal() * q1 - qa;
  p.profile = profile;
  p.l = l;
  p.grid = grid;
  p.bc = bc;
  return p;
}

Eigen::VectorXcd lift_eigenvector(const Eigen::VectorXcd& psi1, Complex lambda,
                                  const AlphaProfile& profile, int l,
                                  const radial::RadialGrid& grid, radial::BoundaryCondition bc) {
  if (psi1.size() != grid.n()) throw Error(ErrorKind::DimensionMismatch, "lift_eigenvector");
  if (!vanishing_nodes(profile, grid).empty()) {
    throw Error(ErrorKind::ProfileVanishes, "lift_eigenvector: alpha vanishes on the grid");
  }
  const Eigen::MatrixXd q1 =
      radial::q_block(AlphaProfile::constant(1.0), l, grid, radial::first_component_edge(bc));
  const Eigen::VectorXd inv_alpha = nodal_alpha(profile, grid).cwiseInverse();
  Eigen::VectorXcd out(2 * psi1.size());
  out.head(psi1.size()) = psi1;
  out.tail(psi1.size()) =
      inv_alpha.cast<Complex>().cwiseProduct(q1.cast<Complex>() * psi1 + lambda * psi1);
  return out;
}

ScalarPencil scalar_pencil(const Eigen::VectorXcd& psi1, const QuadraticPencil& pencil) {
  if (psi1.size() != pencil.n()) throw Error(ErrorKind::DimensionMismatch, "scalar_pencil");
  if (psi1.squaredNorm() == 0.0) throw Error(ErrorKind::ZeroVector, "scalar_pencil: psi1 = 0");
  const Eigen::VectorXd& w = pencil.grid.weights();
  auto form = [&](const Eigen::MatrixXd& a) {
    const Eigen::VectorXcd apsi = a.cast<Complex>() * psi1;
    return weighted_dot(apsi, psi1, w);
  };
  ScalarPencil sp;
  sp.a2 = form(pencil.a2);
  sp.a1 = form(pencil.a1);
  sp.a0 = form(pencil.a0);
  sp.discriminant = sp.a1 * sp.a1 - 4.0 * sp.a0 * sp.a2;
  const double size = std::abs(sp.a1) + std::abs(sp.a0);
  if (std::abs(sp.a2) <= std::numeric_limits<double>::epsilon() * size) {
    sp.degenerate = true;
    if (sp.a1 != 0.0) sp.roots.push_back(-sp.a0 / sp.a1);
    return sp;
  }
  const Complex root = std::sqrt(sp.discriminant);
  sp.roots.push_back((-sp.a1 - root) / (2.0 * sp.a2));
  sp.roots.push_back((-sp.a1 + root) / (2.0 * sp.a2));
  return sp;
}

std::pair<double, double> scalar_crossing_conditions(const ScalarPencil& sp) {
  const Complex lambda0 = -sp.a1 / (2.0 * sp.a2);
  const Complex m = (sp.a2 * lambda0 + sp.a1) * lambda0 + sp.a0;
  const Complex dm = 2.0 * sp.a2 * lambda0 + sp.a1;
  return {std::abs(m), std::abs(dm)};
}

Eigen::MatrixXd linearization(const QuadraticPencil& pencil) {
  const auto n = pencil.n();
  // A2 is diagonal, so its inverse is the nodal alpha.
  const Eigen::VectorXd alpha = pencil.a2.diagonal().cwiseInverse();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n).setIdentity();
  c.bottomLeftCorner(n, n) = -(alpha.asDiagonal() * pencil.a0);
  c.bottomRightCorner(n, n) = -(alpha.asDiagonal() * pencil.a1);
  return c;
}

KeldyshChain solve_keldysh_chain(const QuadraticPencil& pencil, Complex lambda0,
                                 const ChainOptions& options) {
  const Eigen::MatrixXcd l0 = pencil.at(lambda0);
  const Eigen::MatrixXcd l1 = pencil.derivative(lambda0);
  const Eigen::MatrixXcd l2 = pencil.second_derivative();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(l0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const auto n = s.size();

  KeldyshChain chain;
  chain.lambda0 = lambda0;
  chain.sigma_min = s(n - 1);
  chain.sigma_second = n > 1 ? s(n - 2) : std::numeric_limits<double>::infinity();
  chain.scale = l0.norm() + l1.norm() + 0.5 * l2.norm();

  if (chain.sigma_min > options.singular_tol * pencil.scale(lambda0)) {
    throw Error(ErrorKind::IllConditioned,
                "L(lambda0) is not numerically singular: sigma_min = " +
                    std::to_string(chain.sigma_min));
  }
  if (chain.sigma_second < options.gap_factor * chain.sigma_min) {
    throw Error(ErrorKind::IllConditioned, "null space of L(lambda0) is not one-dimensional");
  }
  eig::EigenvectorOptions eopts;
  eopts.defect_tol = options.defect_tol;
  const eig::EigenvectorResult lin = eig::eigenvector(linearization(pencil), lambda0, eopts);
  chain.eigen_condition = lin.condition;
  if (!lin.near_defective) {
    throw Error(ErrorKind::NotDefective,
                "lambda0 is a simple eigenvalue (|y^H x| = " + std::to_string(lin.condition) + ")");
  }

  chain.psi1 = svd.matrixV().col(n - 1);
  chain.chi1 = truncated_solve(svd, -(l1 * chain.psi1));
  chain.phi1 = truncated_solve(svd, -(l1 * chain.chi1) - 0.5 * (l2 * chain.psi1));

  const Eigen::VectorXcd r0 = l0 * chain.psi1;
  const Eigen::VectorXcd r1 = l0 * chain.chi1 + l1 * chain.psi1;
  const Eigen::VectorXcd r2 = l0 * chain.phi1 + l1 * chain.chi1 + 0.5 * (l2 * chain.psi1);
  chain.residuals = {r0.norm(), r1.norm(), r2.norm()};
  const double p = chain.psi1.norm(), c = chain.chi1.norm(), f = chain.phi1.norm();
  chain.relative_residuals = {chain.residuals[0] / (chain.scale * p),
                              chain.residuals[1] / (chain.scale * (c + p)),
                              chain.residuals[2] / (chain.scale * (f + c + p))};
  return chain;
}

EquivalenceReport pencil_linear_equivalence(const QuadraticPencil& pencil,
                                            const radial::DiscreteOperator& linear_op,
                                            double tol) {
  EquivalenceReport report;
  const eig::Spectrum linear = eig::dense_spectrum(linear_op.matrix);
  report.linear_count = linear.eigenvalues.size();
  for (const Complex& lambda : linear.eigenvalues) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil.at(lambda));
    const auto& s = svd.singularValues();
    report.worst_linear_in_pencil =
        std::max(report.worst_linear_in_pencil, s(s.size() - 1) / pencil.scale(lambda));
  }
  const eig::Spectrum roots = eig::dense_spectrum(linearization(pencil));
  report.pencil_count = roots.eigenvalues.size();
  for (const Complex& mu : roots.eigenvalues) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& lambda : linear.eigenvalues) best = std::min(best, std::abs(mu - lambda));
    report.worst_pencil_in_linear =
        std::max(report.worst_pencil_in_linear, best / std::max(1.0, std::abs(mu)));
  }
  report.passed = linear.converged && roots.converged && report.worst_linear_in_pencil <= tol &&
                  report.worst_pencil_in_linear <= tol;
  return report;
}

}  // namespace dynamo::pencil
