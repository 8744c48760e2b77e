#include "dynamo/toy2x2.hpp"

#include <cmath>

#include "dynamo/error.hpp"

namespace dynamo::toy {

namespace {

using namespace std::complex_literals;

bool on_cone(const ToyPoint& p, double tol) {
  const double b2 = p.b1 * p.b1 + p.b2 * p.b2;
  const double scale = std::max({p.f * p.f, b2, tol});
  return std::abs(discriminant(p)) <= tol * scale;
}

bool at_apex(const ToyPoint& p, double tol) {
  return std::abs(p.f) <= tol && p.b_abs() <= tol;
}

Eigen::Matrix2cd eta_table(double delta, double f) {
  Eigen::Matrix2cd eta;
  if (delta < 0.0) {
    eta << 0.0, 1.0, 1.0, 0.0;
  } else if (f > 0.0) {
    eta << -1.0, 0.0, 0.0, 1.0;
  } else {
    eta << 1.0, 0.0, 0.0, -1.0;
  }
  return eta;
}

}  // namespace

Eigen::Matrix2cd ToyPoint::matrix() const {
  Eigen::Matrix2cd h;
  h << e0 + f, b(), -std::conj(b()), e0 - f;
  return h;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::RealPair: return "RealPair";
    case Regime::ComplexConjugatePair: return "ComplexConjugatePair";
    case Regime::ExceptionalCone: return "ExceptionalCone";
    case Regime::DiabolicPoint: return "DiabolicPoint";
  }
  return "?";
}

double discriminant(const ToyPoint& p) { return p.f * p.f - p.b1 * p.b1 - p.b2 * p.b2; }

double spin_discriminant(const ToyPoint& p) {
  return p.f * p.f + p.b1 * p.b1 + p.b2 * p.b2;
}

std::pair<Complex, Complex> eigenvalues(const ToyPoint& p) {
  const Complex eps = std::sqrt(Complex(discriminant(p), 0.0));
  return {p.e0 - eps, p.e0 + eps};
}

std::pair<double, double> spin_eigenvalues(const ToyPoint& p) {
  const double eps = std::sqrt(spin_discriminant(p));
  return {p.e0 - eps, p.e0 + eps};
}

ToyClassification classify_point(const ToyPoint& p, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "classify_point: tol must be > 0");
  ToyClassification out;
  out.delta = discriminant(p);
  if (at_apex(p, tol)) {
    out.regime = Regime::DiabolicPoint;
    return out;
  }
  if (on_cone(p, tol)) {
    out.regime = Regime::ExceptionalCone;
    return out;
  }
  out.regime = out.delta > 0.0 ? Regime::RealPair : Regime::ComplexConjugatePair;
  out.eta.emplace(eta_table(out.delta, p.f));
  out.krein_types = eigenvector_krein_types(p, tol);
  return out;
}

EigenDecomposition diagonalize(const ToyPoint& p, double tol) {
  if (at_apex(p, tol) || on_cone(p, tol)) {
    throw Error(ErrorKind::DegenerateInput, "diagonalize: Delta = 0, use jordan_at_ep");
  }
  const double delta = discriminant(p);
  const Complex eps = std::sqrt(Complex(delta, 0.0));
  EigenDecomposition out;
  out.epsilon = eps;
  out.d << p.e0 - eps, 0.0, 0.0, p.e0 + eps;

  const Complex bc = std::conj(p.b());
  if (p.b_abs() <= tol * std::abs(p.f)) {
    // Already diagonal; only the ordering of D needs fixing.
    if (p.f > 0.0) {
      out.s << 0.0, -1.0, 1.0, 0.0;
    } else {
      out.s.setIdentity();
    }
  } else {
    Complex g1, g2;
    if (delta > 0.0) {
      const double e = eps.real();
      g1 = std::sqrt(std::abs(p.f + e) / (2.0 * e));
      g2 = bc / (2.0 * e * g1);
    } else {
      // eta = sigma_1 pins arg(g2) - arg(g1); det S = 1 pins arg(g1) + arg(g2).
      const double e = eps.imag();
      const double sum = std::arg(bc / (2.0i * e));
      const double diff = -std::arg(Complex(-e, p.f));
      const double r = std::sqrt(p.b_abs() / (2.0 * e));
      g1 = std::polar(r, 0.5 * (sum - diff));
      g2 = std::polar(r, 0.5 * (sum + diff));
      if (g1.real() < 0.0) {
        g1 = -g1;
        g2 = -g2;
      }
    }
    out.s << (-p.f + eps) / bc * g1, (-p.f - eps) / bc * g2, g1, g2;
  }
  const Eigen::Matrix2cd mu = krein::pauli(3);
  out.eta.emplace(out.s.adjoint() * mu * out.s, 1e-9);
  return out;
}

EigenDecomposition jordan_at_ep(const ToyPoint& p, double tol) {
  if (!on_cone(p, tol)) throw Error(ErrorKind::NotOnCone, "jordan_at_ep: |Delta| above tolerance");
  const double babs = p.b_abs();
  if (babs <= tol) throw Error(ErrorKind::ApexPoint, "jordan_at_ep: b = 0 is the diabolic point");
  const double sign = p.f >= 0.0 ? 1.0 : -1.0;
  const Complex bc = std::conj(p.b());
  EigenDecomposition out;
  out.epsilon = 0.0;
  // Second column solves (H - E) x = first column; it carries -1/b*.
  out.s << -sign * babs / bc, -1.0 / bc, 1.0, 0.0;
  out.d << p.e0, 1.0, 0.0, p.e0;
  return out;
}

ChainResiduals jordan_chain_check(const Eigen::Matrix2cd& d, Complex e) {
  const Eigen::Matrix2cd n = d - e * Eigen::Matrix2cd::Identity();
  const Eigen::Vector2cd minus(1.0, 0.0);
  const Eigen::Vector2cd plus(0.0, 1.0);
  return {(n * minus).norm(), (n * plus - minus).norm(), (n * n * plus).norm()};
}

std::pair<krein::VectorType, krein::VectorType> eigenvector_krein_types(const ToyPoint& p,
                                                                        double tol) {
  const EigenDecomposition dec = diagonalize(p, tol);
  const Eigen::VectorXcd minus = Eigen::Vector2cd(1.0, 0.0);
  const Eigen::VectorXcd plus = Eigen::Vector2cd(0.0, 1.0);
  return {krein::vector_type(*dec.eta, minus), krein::vector_type(*dec.eta, plus)};
}

SuCoefficients su_decompose(const ToyPoint& p) { return {p.e0, -p.b2, -p.b1, p.f}; }

}  // namespace dynamo::toy
