#pragma once

// Indefinite (Krein) inner products generated by involutions.
//
// Convention: every inner product here is conjugate-linear in the FIRST
// argument, (x, y) = x^H y, so the Krein product is [x, y] = (eta x, y)
// = x^H eta^H y = x^H eta y for Hermitian eta.

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace dynamo::krein {

using Complex = std::complex<double>;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kVectorTypeTol = 1e-9;

/// Hermitian square matrix with eta^2 = I.
class Involution {
 public:
  /// Validates eta^2 = I and eta = eta^H to `tol` in the Frobenius norm.
  explicit Involution(Eigen::MatrixXcd matrix, double tol = kAlgebraicTol);

  static Involution identity(Eigen::Index n);
  /// diag(+1,...,+1,-1,...,-1) with `n_plus` positive entries.
  static Involution signature(Eigen::Index n_plus, Eigen::Index n_minus);
  /// Block swap [[0, I], [I, 0]] with blocks of size `half`.
  static Involution block_swap(Eigen::Index half);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  Eigen::MatrixXcd matrix_;
};

struct GradingProjectors {
  Eigen::MatrixXcd p_plus;
  Eigen::MatrixXcd p_minus;
};

enum class VectorType { Positive, Negative, Isotropic };

std::string to_string(VectorType t);

/// Result of classifying a 2x2 involution. For det = +1 only `sign` is set
/// (eta = sign * I); for det = -1 eta = a1 s1 + a2 s2 + a3 s3.
struct InvolutionClass {
  enum class Kind { Plus, Minus } kind;
  int sign = 0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
};

/// [x, y]_eta = (eta x, y).
Complex krein_product(const Involution& eta, const Eigen::VectorXcd& x,
                      const Eigen::VectorXcd& y);

/// Sign of [x, x] relative to tol * |x|^2.
VectorType vector_type(const Involution& eta, const Eigen::VectorXcd& x,
                       double tol = kVectorTypeTol);

/// |eta H^H eta^{-1} - H|_F / max(1, |H|_F).
double pseudo_hermiticity_residual(const Involution& eta, const Eigen::MatrixXcd& h);

InvolutionClass classify_involution(const Involution& eta);

/// P+- = (I +- mu) / 2.
GradingProjectors grading_projectors(const Involution& mu);

/// Pauli matrices sigma_1..sigma_3 (index 1-based, as in physics notation).
Eigen::Matrix2cd pauli(int k);

}  // namespace dynamo::krein
