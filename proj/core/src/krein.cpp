#include "dynamo/krein.hpp"

#include <cmath>

#include "dynamo/error.hpp"

namespace dynamo::krein {

Involution::Involution(Eigen::MatrixXcd matrix, double tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "involution must be a non-empty square matrix");
  }
  const auto n = matrix_.rows();
  const double square_defect =
      (matrix_ * matrix_ - Eigen::MatrixXcd::Identity(n, n)).norm();
  const double hermitian_defect = (matrix_ - matrix_.adjoint()).norm();
  if (square_defect > tol || hermitian_defect > tol) {
    throw Error(ErrorKind::NotAnInvolution,
                "|eta^2 - I| = " + std::to_string(square_defect) +
                    ", |eta - eta^H| = " + std::to_string(hermitian_defect));
  }
}

Involution Involution::identity(Eigen::Index n) {
  return Involution(Eigen::MatrixXcd::Identity(n, n));
}

Involution Involution::signature(Eigen::Index n_plus, Eigen::Index n_minus) {
  Eigen::VectorXcd d(n_plus + n_minus);
  d.head(n_plus).setConstant(1.0);
  d.tail(n_minus).setConstant(-1.0);
  return Involution(d.asDiagonal().toDenseMatrix());
}

Involution Involution::block_swap(Eigen::Index half) {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
  j.topRightCorner(half, half).setIdentity();
  j.bottomLeftCorner(half, half).setIdentity();
  return Involution(std::move(j));
}

std::string to_string(VectorType t) {
  switch (t) {
    case VectorType::Positive: return "Positive";
    case VectorType::Negative: return "Negative";
    case VectorType::Isotropic: return "Isotropic";
  }
  return "?";
}

Complex krein_product(const Involution& eta, const Eigen::VectorXcd& x,
                      const Eigen::VectorXcd& y) {
  if (x.size() != eta.dim() || y.size() != eta.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "krein_product operands");
  }
  // Eigen's dot() is conjugate-linear in the first argument.
  return (eta.matrix() * x).dot(y);
}

VectorType vector_type(const Involution& eta, const Eigen::VectorXcd& x, double tol) {
  const double norm2 = x.squaredNorm();
  if (norm2 == 0.0) throw Error(ErrorKind::ZeroVector, "vector_type of the zero vector");
  const double q = krein_product(eta, x, x).real();
  if (q > tol * norm2) return VectorType::Positive;
  if (q < -tol * norm2) return VectorType::Negative;
  return VectorType::Isotropic;
}

double pseudo_hermiticity_residual(const Involution& eta, const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols() || h.rows() != eta.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pseudo_hermiticity_residual operands");
  }
  // eta^{-1} = eta for an involution.
  const Eigen::MatrixXcd& e = eta.matrix();
  const double defect = (e * h.adjoint() * e - h).norm();
  return defect / std::max(1.0, h.norm());
}

Eigen::Matrix2cd pauli(int k) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd s;
  switch (k) {
    case 1: s << 0.0, 1.0, 1.0, 0.0; break;
    case 2: s << 0.0, -1i, 1i, 0.0; break;
    case 3: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw Error(ErrorKind::InvalidArgument, "Pauli index must be 1, 2 or 3");
  }
  return s;
}

InvolutionClass classify_involution(const Involution& eta) {
  if (eta.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "classify_involution needs 2x2");
  const Eigen::Matrix2cd m = eta.matrix();
  const Complex det = m.determinant();
  InvolutionClass out{};
  if (det.real() > 0.0) {
    out.kind = InvolutionClass::Kind::Plus;
    out.sign = m(0, 0).real() > 0.0 ? 1 : -1;
    return out;
  }
  out.kind = InvolutionClass::Kind::Minus;
  out.sign = -1;
  // Pauli matrices are trace-orthogonal: a_k = tr(sigma_k eta) / 2.
  out.a1 = 0.5 * (pauli(1) * m).trace().real();
  out.a2 = 0.5 * (pauli(2) * m).trace().real();
  out.a3 = 0.5 * (pauli(3) * m).trace().real();
  return out;
}

GradingProjectors grading_projectors(const Involution& mu) {
  const auto n = mu.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return {0.5 * (id + mu.matrix()), 0.5 * (id - mu.matrix())};
}

}  // namespace dynamo::krein
