#include <doctest.h>

#include <cmath>
#include <random>

#include "dynamo/branch.hpp"
#include "dynamo/error.hpp"
#include "dynamo/special.hpp"
#include "dynamo/toy2x2.hpp"

using namespace dynamo;
using namespace dynamo::branch;
using radial::AlphaProfile;
using radial::BoundaryCondition;
using radial::RadialGrid;
using radial::Scheme;

namespace {

// Toy path f = t, b1 = 1 through the cone at t = 1.
Eigen::MatrixXd toy_path(double t) { return toy::ToyPoint{0.5, t, 1.0, 0.0}.matrix().real(); }

SweepConfig constant_config(double a0, BoundaryCondition bc = BoundaryCondition::Idealized) {
  return {AlphaProfile::constant(a0), 1, bc, RadialGrid::make(Scheme::LegendreGalerkin, 24)};
}

}  // namespace

TEST_CASE("sweep input validation") {
  const MatrixFamily f = toy_path;
  CHECK_THROWS_AS(sweep(f, {}), Error);
  CHECK_THROWS_AS(sweep(f, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(sweep(f, {0.0, NAN}), Error);
  CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 5), Error);
  CHECK_THROWS_AS(uniform_grid(2.0, 1.0, 5), Error);
  const auto g = uniform_grid(0.0, 2.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g[1] == 0.5);
  CHECK(g.back() == 2.0);
  CHECK(uniform_grid(3.0, 3.0, 1) == std::vector<double>{3.0});
}

TEST_CASE("single-point sweep") {
  const SweepResult s = sweep(constant_config(1.0), {0.0});
  CHECK(s.all_converged());
  const auto b = match_branches(s, 4);
  REQUIRE(b.size() == 4);
  for (const Branch& br : b) CHECK(br.points.size() == 1);
  CHECK(detect_transitions(b, default_im_tol(b)).empty());
}

TEST_CASE("affine assembly matches direct assembly") {
  const SweepConfig cfg{AlphaProfile::quartic_reference(), 1, BoundaryCondition::Physical,
                        RadialGrid::make(Scheme::FiniteDifference2, 40)};
  const AffineFamily fam = AffineFamily::from_config(cfg);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 10; ++i) {
    const double c = u(rng);
    const Eigen::MatrixXd direct = radial::assemble(cfg.profile.with_scale(c), cfg.l, cfg.grid, cfg.bc).matrix;
    CHECK((fam.at(c) - direct).norm() <= 1e-10 * direct.norm());
  }
}

TEST_CASE("constant alpha branches are straight lines without transitions") {
  const SweepConfig cfg = constant_config(1.0);
  const SweepResult s = sweep(cfg, uniform_grid(0.1, 10.0, 34));
  const auto branches = match_branches(s, 6);
  CHECK(detect_transitions(branches, default_im_tol(branches)).empty());
  const auto kappa = special::spherical_bessel_zeros(1, 8);
  for (const Branch& b : branches) {
    for (const BranchPoint& p : b.points) CHECK(std::abs(p.lambda.imag()) < 1e-8);
    // lambda = -kappa^2 +- C kappa: constant slope along the branch.
    const double slope = (b.points[1].lambda.real() - b.points[0].lambda.real()) /
                         (b.points[1].c - b.points[0].c);
    bool is_zero = false;
    for (double k : kappa) is_zero |= std::abs(std::abs(slope) - k) < 1e-6;
    CHECK(is_zero);
    for (std::size_t k = 2; k < b.points.size(); ++k) {
      const double pred = b.points[0].lambda.real() + slope * (b.points[k].c - b.points[0].c);
      CHECK(std::abs(b.points[k].lambda.real() - pred) < 1e-7 * (1 + std::abs(pred)));
    }
  }
}

TEST_CASE("match_branches argument checks") {
  const SweepResult s = sweep(MatrixFamily(toy_path), {0.0, 1.0});
  CHECK_THROWS_AS(match_branches(s, 0), Error);
  CHECK_THROWS_AS(match_branches(s, 3), Error);
}

TEST_CASE("hungarian assignment") {
  Eigen::MatrixXd c(3, 3);
  c << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto a = hungarian(c);
  CHECK(a == std::vector<int>{1, 0, 2});
  Eigen::MatrixXd wide(2, 4);
  wide << 9, 9, 1, 9, 9, 9, 2, 0;
  CHECK(hungarian(wide) == std::vector<int>{2, 3});
  CHECK_THROWS_AS(hungarian(Eigen::MatrixXd::Zero(3, 2)), Error);
}

TEST_CASE("toy path: detection, refinement and exponent") {
  const MatrixFamily fam = toy_path;
  const SweepResult s = sweep(fam, uniform_grid(0.0, 2.0, 100));
  const auto branches = match_branches(s, 2);
  const auto events = detect_transitions(branches, default_im_tol(branches));
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == TransitionKind::ComplexToReal);
  CHECK(events[0].status == EventStatus::Bracketed);
  CHECK(events[0].c_low < 1.0);
  CHECK(events[0].c_high > 1.0);
  const TransitionEvent r = refine_ep(events[0], fam);
  CHECK(r.status == EventStatus::Refined);
  CHECK(std::abs(r.c_star - 1.0) < 1e-7);
  CHECK(std::abs(r.lambda_star - 0.5) < 1e-3);
  REQUIRE(r.exponent);
  CHECK(*r.exponent == doctest::Approx(0.5).epsilon(0.04));

  // Reversed path: the same point is crossed from the real side.
  const MatrixFamily rev = [](double t) { return toy_path(2.0 - t); };
  const SweepResult sr = sweep(rev, uniform_grid(0.0, 2.0, 100));
  const auto br = match_branches(sr, 2);
  const auto er = detect_transitions(br, default_im_tol(br));
  REQUIRE(er.size() == 1);
  CHECK(er[0].kind == TransitionKind::RealToComplex);
  const TransitionEvent rr = refine_ep(er[0], rev);
  CHECK(std::abs(rr.c_star - 1.0) < 1e-7);
  REQUIRE(rr.exponent);
  CHECK(*rr.exponent == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("toy pipeline agrees with the closed form") {
  const SweepResult s = sweep(MatrixFamily(toy_path), uniform_grid(0.0, 2.0, 41));
  const auto branches = match_branches(s, 2);
  for (std::size_t k = 0; k < s.c_values.size(); ++k) {
    const auto [em, ep] = toy::eigenvalues({0.5, s.c_values[k], 1.0, 0.0});
    for (const Branch& b : branches) {
      const Complex z = b.points[k].lambda;
      CHECK(std::min(std::abs(z - em), std::abs(z - ep)) < 1e-12);
    }
  }
}

TEST_CASE("avoided crossing is a near miss") {
  const double delta = 1e-3;
  const MatrixFamily fam = [delta](double c) {
    Eigen::MatrixXd h(2, 2);
    h << c, delta, delta, -c;
    return h;
  };
  TransitionEvent e;
  e.c_low = -1.0;
  e.c_high = 0.7;
  e.lambda_star = 0.0;
  const TransitionEvent r = refine_ep(e, fam);
  CHECK(r.status == EventStatus::NearMiss);
  CHECK(std::abs(r.c_star) < 1e-6);
  CHECK(r.min_gap == doctest::Approx(2 * delta).epsilon(1e-6));
}

TEST_CASE("refinement edge cases") {
  TransitionEvent e;
  e.c_low = e.c_high = 0.3;
  const TransitionEvent same = refine_ep(e, MatrixFamily(toy_path));
  CHECK(same.c_low == 0.3);
  CHECK(same.status == EventStatus::Bracketed);

  const MatrixFamily scalar = [](double c) { return Eigen::MatrixXd::Constant(1, 1, c); };
  e.c_low = 0.0;
  e.c_high = 1.0;
  try {
    refine_ep(e, scalar);
    FAIL("refined without a pair");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::LostBracket);
  }
}

TEST_CASE("fit_exponent") {
  CHECK(fit_exponent({1e-2, 1e-3, 1e-4}, {0.2, 0.2 * std::sqrt(0.1), 0.02}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fit_exponent({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(fit_exponent({1.0, -1.0}, {1.0, 1.0}), Error);
}

TEST_CASE("sweep is deterministic across thread counts") {
  const SweepConfig cfg{AlphaProfile::quartic_reference(), 1, BoundaryCondition::Physical,
                        RadialGrid::make(Scheme::FiniteDifference2, 30)};
  const auto grid = uniform_grid(0.0, 20.0, 37);
  const SweepResult a = sweep(cfg, grid, 1);
  const SweepResult b = sweep(cfg, grid, 5);
  REQUIRE(a.spectra.size() == b.spectra.size());
  for (std::size_t k = 0; k < a.spectra.size(); ++k) CHECK(a.spectra[k].eigenvalues == b.spectra[k].eigenvalues);
  CHECK(a.matrix_scale == b.matrix_scale);
}

TEST_CASE("critical C for constant alpha is the first Bessel zero") {
  const auto fam = as_family(AffineFamily::from_config(constant_config(1.0)));
  const auto [lo, hi] = find_critical_bracket(fam);
  const CriticalResult r = critical_c(fam, lo, hi);
  CHECK(std::abs(r.c - special::spherical_bessel_zeros(1, 1)[0]) < 1e-6);
  CHECK_FALSE(r.oscillatory);
  CHECK(std::abs(r.abscissa) < 1e-5);
  try {
    critical_c(fam, 0.0, 1.0);
    FAIL("bracket without sign change accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoSignChange);
  }
  CHECK_THROWS_AS(critical_c(fam, 2.0, 1.0), Error);

  const MatrixFamily unstable = [](double c) { return Eigen::MatrixXd::Constant(1, 1, 1.0 + c); };
  CHECK_THROWS_AS(find_critical_bracket(unstable), Error);
}

TEST_CASE("spectral abscissa") {
  Eigen::MatrixXd h(2, 2);
  h << -1, 2, -2, -1;
  Complex arg;
  CHECK(spectral_abscissa(h, &arg) == doctest::Approx(-1.0));
  CHECK(std::abs(arg.imag()) == doctest::Approx(2.0));
}

TEST_CASE("branch distinctness") {
  Branch a, b;
  for (int k = 0; k < 5; ++k) {
    a.points.push_back({double(k), Complex(k, 0)});
    b.points.push_back({double(k), Complex(k + 1.0, 0)});
  }
  double gap = 0.0;
  CHECK(branches_distinct(a, b, 1e-3, &gap));
  CHECK(gap == doctest::Approx(1.0));
  CHECK_FALSE(branches_distinct(a, b, 0.5));
}

TEST_CASE("to_string") {
  CHECK(to_string(TransitionKind::RealToComplex) != to_string(TransitionKind::ComplexToReal));
  CHECK(to_string(EventStatus::NearMiss) != to_string(EventStatus::Refined));
}
