#pragma once

// Eigenvalue branches of a one-parameter matrix family H(C).
//
// The dynamo operator is affine in the profile scale, H(C) = H0 + C H1, so
// a sweep assembles two matrices once. Branches are built by matching the
// spectra of neighbouring sweep points against a linear extrapolation of
// each branch; transitions between real and complex-conjugate branch pairs
// are bracketed on the sweep grid and refined by bisection.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynamo/eig.hpp"
#include "dynamo/radial_operator.hpp"

namespace dynamo::branch {

using Complex = std::complex<double>;

struct SweepConfig {
  radial::AlphaProfile profile;  // base profile; the sweep replaces its scale
  int l = 1;
  radial::BoundaryCondition bc = radial::BoundaryCondition::Physical;
  radial::RadialGrid grid;
};

/// H(C) = h0 + C h1.
struct AffineFamily {
  Eigen::MatrixXd h0, h1;

  static AffineFamily from_config(const SweepConfig& config);
  Eigen::MatrixXd at(double c) const { return h0 + c * h1; }
};

/// Any real matrix-valued function of C (the toy model, test fixtures).
using MatrixFamily = std::function<Eigen::MatrixXd(double)>;

MatrixFamily as_family(const AffineFamily& affine);

struct SweepResult {
  std::vector<double> c_values;
  std::vector<eig::Spectrum> spectra;
  std::optional<SweepConfig> config;  // unset for generic families
  double matrix_scale = 0.0;  // max_C |H(C)|_F

  bool all_converged() const noexcept;
};

/// Worker count: DYNAMO_THREADS when set and positive, otherwise the
/// hardware concurrency.
unsigned sweep_threads();

/// Throws InvalidArgument unless c_grid is non-empty and strictly increasing.
/// Non-converged points are kept and flagged in their Spectrum.
SweepResult sweep(const MatrixFamily& family, const std::vector<double>& c_grid,
                  unsigned threads = 0);
SweepResult sweep(const SweepConfig& config, const std::vector<double>& c_grid,
                  unsigned threads = 0);

std::vector<double> uniform_grid(double lo, double hi, int count);

struct BranchPoint {
  double c = 0.0;
  Complex lambda;
  /// Largest displacement accepted by the assignment that produced this point.
  double match_radius = 0.0;
};

struct Branch {
  int id = 0;
  std::vector<BranchPoint> points;
  /// Indices of sweep steps (k -> k+1) whose assignment was a near tie.
  std::vector<std::size_t> ambiguous_steps;
};

struct MatchOptions {
  /// Two assignments whose squared-distance costs differ by less than this
  /// (relative to 1 + |lambda|^2) count as a tie.
  double ambiguity_tol = 1e-10;
};

struct MatchStats {
  int hungarian_steps = 0;
  int ambiguous_steps = 0;
};

/// 1e-7 max(1, max |lambda|) over the tracked branch points.
double default_im_tol(const std::vector<Branch>& branches);

/// Tracks the m leading eigenvalues of the first spectrum (spectral order).
/// Throws InvalidArgument if m exceeds a spectrum size or m < 1.
std::vector<Branch> match_branches(const SweepResult& sweep, int m,
                                   const MatchOptions& options = {},
                                   MatchStats* stats = nullptr);

/// Minimum-cost assignment of rows to distinct columns of a rows <= cols
/// cost matrix. Returns the column of each row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

enum class TransitionKind { RealToComplex, ComplexToReal };
enum class EventStatus { Bracketed, Refined, NearMiss };

std::string to_string(TransitionKind kind);
std::string to_string(EventStatus status);

struct TransitionEvent {
  TransitionKind kind = TransitionKind::RealToComplex;
  double c_low = 0.0;
  double c_high = 0.0;
  double c_star = 0.0;
  Complex lambda_star;
  std::pair<int, int> branch_ids{-1, -1};
  EventStatus status = EventStatus::Bracketed;
  /// Number of branches changing character near the event; 2 when local.
  int participants = 2;
  bool multi_branch = false;
  /// Filled by refinement.
  double min_gap = 0.0;
  std::optional<double> exponent;
};

std::vector<TransitionEvent> detect_transitions(const std::vector<Branch>& branches,
                                                double im_tol);

struct RefineOptions {
  double c_tol = 1e-8;  // stop at |c_high - c_low| <= c_tol max(1, |C|)
  int max_iterations = 200;
  /// Gap below which a refined pair counts as colliding, relative to max(1, |lambda*|).
  double collision_tol = 1e-6;
  /// Exponent fit offsets w0 10^-k, k = 0..fit_points-1, w0 = fit_width max(1, |C*|).
  double fit_width = 1e-3;
  int fit_points = 4;
};

/// Bisection on the sign of d(C) = ((lambda_a - lambda_b) / 2)^2 for the
/// pair closest to the event; d > 0 for a real pair, d < 0 for a conjugate
/// pair. Without a sign change the minimum gap is located instead and the
/// event becomes a NearMiss. A degenerate bracket is returned unchanged.
/// Throws LostBracket when no admissible pair exists inside the bracket.
TransitionEvent refine_ep(const TransitionEvent& event, const MatrixFamily& family,
                          const RefineOptions& options = {});

/// Least-squares slope of log g against log delta.
double fit_exponent(const std::vector<double>& delta, const std::vector<double>& gap);

struct CriticalResult {
  double c = 0.0;
  double abscissa = 0.0;  // max Re lambda at c
  Complex lambda;         // eigenvalue attaining it
  bool oscillatory = false;
  double c_low = 0.0;
  double c_high = 0.0;
};

struct CriticalOptions {
  double c_tol = 1e-8;
  int max_iterations = 200;
  double im_tol_rel = 1e-7;  // relative to max(1, |lambda|)
};

/// Spectral abscissa max Re lambda(C).
double spectral_abscissa(const Eigen::MatrixXd& h, Complex* argmax = nullptr);

/// Bisection on the spectral abscissa inside [lo, hi]. Throws NoSignChange
/// when it has the same sign at both ends.
CriticalResult critical_c(const MatrixFamily& family, double lo, double hi,
                          const CriticalOptions& options = {});

/// Doubles hi from `start` until the abscissa turns positive, then scans
/// [0, hi] for the first sign change. Throws NoSignChange after
/// `max_doublings`.
std::pair<double, double> find_critical_bracket(const MatrixFamily& family, double start = 1.0,
                                                int max_doublings = 20, int scan_points = 64);

struct WindowResult {
  double hi = 0.0;
  SweepResult sweep;
  std::vector<Branch> branches;
  std::vector<TransitionEvent> events;
};

/// Sweeps [0, hi] with `points` samples, doubling hi until at least
/// `min_events` transitions among the m leading branches are found.
WindowResult auto_window(const MatrixFamily& family, int m, double start_hi, int points,
                         int min_events = 2, int max_doublings = 8, unsigned threads = 0);

/// Branch distinctness: min_k |lambda_a - lambda_b| over the common C points
/// exceeds 10 im_tol.
bool branches_distinct(const Branch& a, const Branch& b, double im_tol,
                       double* min_gap = nullptr);

}  // namespace dynamo::branch
