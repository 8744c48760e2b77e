#pragma once

// Dense real nonsymmetric eigensolver.
//
// balance -> Householder Hessenberg reduction -> Francis double-shift QR
// (real Schur form) -> back substitution for eigenvectors. A subdiagonal
// entry is deflated when |h(k, k-1)| < eps (|h(k-1, k-1)| + |h(k, k)|).
// The iteration cap is 40 n double-shift sweeps in total.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dynamo::eig {

using Complex = std::complex<double>;

enum class Backend {
  QrIteration,  // in-repo Francis QR
  Eigen,        // Eigen::EigenSolver, for cross-checks
};

struct SpectrumOptions {
  bool with_residuals = false;
  Backend backend = Backend::QrIteration;
};

/// Eigenvalues sorted by real part descending, ties by imaginary part
/// descending. `residuals[i]` is |H v - lambda v| / (|H|_F |v|) for the
/// eigenvector of eigenvalues[i]; empty unless requested.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  std::vector<double> residuals;
  std::size_t matrix_dim = 0;
  bool converged = true;
};

/// Throws NonFiniteInput on NaN/Inf entries. Non-convergence is reported
/// through `converged = false`; unconverged eigenvalues are NaN.
Spectrum dense_spectrum(const Eigen::MatrixXd& h, const SpectrumOptions& options = {});

/// Total order used for Spectrum: Re descending, then Im descending.
bool spectral_order(const Complex& a, const Complex& b) noexcept;

struct EigenvectorResult {
  Eigen::VectorXcd vector;  // unit norm
  double residual = 0.0;    // |H v - lambda v| / |H|_F
  double condition = 0.0;   // |y^H v| for unit left/right vectors
  bool near_defective = false;
};

struct EigenvectorOptions {
  double residual_tol = 1e-8;
  int max_restarts = 5;
  int iterations_per_start = 12;
  /// |y^H v| below this (and no second independent eigenvector) flags a
  /// Jordan-type eigenvalue.
  double defect_tol = 1e-4;
  unsigned seed = 12345;
};

/// Shifted inverse iteration around `lambda`. Throws NonConvergence when no
/// start reaches `residual_tol`.
EigenvectorResult eigenvector(const Eigen::MatrixXd& h, Complex lambda,
                              const EigenvectorOptions& options = {});

}  // namespace dynamo::eig
