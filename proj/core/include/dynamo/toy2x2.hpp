#pragma once

// Closed-form analysis of the sigma_3-pseudo-Hermitian 2x2 model
//
//   H = e0 I + h,   h = [[f, b], [-conj(b), -f]],   b = b1 + i b2.
//
// The eigenvalues are e0 -+ sqrt(Delta) with Delta = f^2 - |b|^2; the
// degeneracy set Delta = 0 is a double cone of exceptional points whose apex
// f = b = 0 is a diabolic point.

#include <complex>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "dynamo/krein.hpp"

namespace dynamo::toy {

using Complex = std::complex<double>;

inline constexpr double kConeTol = 1e-9;

struct ToyPoint {
  double e0 = 0.0;
  double f = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  Complex b() const noexcept { return {b1, b2}; }
  double b_abs() const noexcept { return std::hypot(b1, b2); }
  Eigen::Matrix2cd matrix() const;
};

enum class Regime { RealPair, ComplexConjugatePair, ExceptionalCone, DiabolicPoint };

std::string to_string(Regime r);

struct ToyClassification {
  double delta = 0.0;
  Regime regime = Regime::RealPair;
  std::optional<krein::Involution> eta;
  std::optional<std::pair<krein::VectorType, krein::VectorType>> krein_types;
};

/// H = S D S^{-1}. `d` is diagonal off the cone and a Jordan block on it.
struct EigenDecomposition {
  Eigen::Matrix2cd s;
  Eigen::Matrix2cd d;
  std::optional<krein::Involution> eta;
  Complex epsilon;
};

/// (E-, E+) = e0 -+ eps with eps = sqrt(Delta) on the principal branch.
std::pair<Complex, Complex> eigenvalues(const ToyPoint& p);

/// Hermitian contrast model [[f, b], [conj(b), -f]]: e0 -+ sqrt(f^2 + |b|^2).
std::pair<double, double> spin_eigenvalues(const ToyPoint& p);

double discriminant(const ToyPoint& p);
double spin_discriminant(const ToyPoint& p);

ToyClassification classify_point(const ToyPoint& p, double tol = kConeTol);

/// Structure-preserving diagonalization: det S = 1 and eta = S^H sigma_3 S
/// is an involution with D = eta D^H eta.
EigenDecomposition diagonalize(const ToyPoint& p, double tol = kConeTol);

/// Jordan form on the cone f = +-|b| != 0.
EigenDecomposition jordan_at_ep(const ToyPoint& p, double tol = kConeTol);

struct ChainResiduals {
  double eigen;       // |(D - E)|->|
  double associated;  // |(D - E)|+> - |->|
  double nilpotent;   // |(D - E)^2 |+>|
};

ChainResiduals jordan_chain_check(const Eigen::Matrix2cd& d, Complex e);

/// Krein types of the D-eigenvectors |-> = (1, 0), |+> = (0, 1) with respect
/// to the eta of `diagonalize`, ordered (|->, |+>).
std::pair<krein::VectorType, krein::VectorType> eigenvector_krein_types(const ToyPoint& p,
                                                                        double tol = kConeTol);

/// Coefficients of iH = i e0 I + c1 s1 + c2 s2 + i c3 s3.
struct SuCoefficients {
  double e0, c1, c2, c3;
};

SuCoefficients su_decompose(const ToyPoint& p);

}  // namespace dynamo::toy
