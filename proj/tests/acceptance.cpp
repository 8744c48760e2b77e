// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "dynamo/branch.hpp"
#include "dynamo/eig.hpp"
#include "dynamo/pencil.hpp"
#include "dynamo/radial_operator.hpp"
#include "dynamo/special.hpp"
#include "dynamo/toy2x2.hpp"

using namespace dynamo;
using radial::AlphaProfile;
using radial::BoundaryCondition;
using radial::RadialGrid;
using radial::Scheme;
using Complex = std::complex<double>;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const AlphaProfile kReference = AlphaProfile::quartic_reference();

Verdict constant_alpha_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto op = radial::assemble(AlphaProfile::constant(1.0), 1, RadialGrid::make(Scheme::ChebyshevCollocation, 64),
                                   BoundaryCondition::Idealized);
  auto ev = eig::dense_spectrum(op.matrix).eigenvalues;
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  const auto oracle = radial::constant_alpha_oracle(1.0, 1, 20);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    double best = INFINITY;
    for (const Complex& o : oracle) best = std::min(best, std::abs(ev[i] - o) / std::abs(o));
    worst = std::max(worst, best);
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t <= 10.0, fmt("max rel err %.2e over 10 smallest |lambda|, %.2f s", worst, t)};
}

Verdict free_decay() {
  const int n = 64;
  const auto op = radial::assemble(AlphaProfile::constant(0.0), 1, RadialGrid::make(Scheme::ChebyshevCollocation, n),
                                   BoundaryCondition::Idealized);
  const auto ev = eig::dense_spectrum(op.matrix).eigenvalues;
  bool real_negative = true, paired = true;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    real_negative &= ev[i].imag() == 0.0 && ev[i].real() < 0.0;
    if (i % 2 == 1) paired &= std::abs(ev[i] - ev[i - 1]) <= 1e-10 * std::abs(ev[i]);
  }
  // Only the resolved part of the spectrum is compared with the Bessel zeros.
  const int resolved = 10;
  const auto kappa = special::spherical_bessel_zeros(1, resolved);
  double worst = 0.0;
  for (int k = 0; k < resolved; ++k) {
    const double want = -kappa[k] * kappa[k];
    worst = std::max({worst, std::abs(ev[2 * k].real() - want) / std::abs(want),
                      std::abs(ev[2 * k + 1].real() - want) / std::abs(want)});
  }
  return {real_negative && paired && worst <= 1e-6,
          fmt("all %zu real<0: %s, pairwise degenerate: %s, leading %d pairs rel err %.2e", ev.size(),
              real_negative ? "yes" : "no", paired ? "yes" : "no", resolved, worst)};
}

Verdict j_symmetry() {
  const RadialGrid g = RadialGrid::make(Scheme::LegendreGalerkin, 64);
  const double ideal = radial::pseudo_hermiticity_residual_disc(radial::assemble(kReference, 1, g, BoundaryCondition::Idealized));
  const double phys = radial::pseudo_hermiticity_residual_disc(radial::assemble(kReference, 1, g, BoundaryCondition::Physical));
  return {ideal <= 1e-10 && phys >= 1e-4, fmt("idealized %.2e, physical %.2e", ideal, phys)};
}

Verdict graded_blocks() {
  const RadialGrid g = RadialGrid::make(Scheme::LegendreGalerkin, 64);
  double worst = 0.0;
  for (const AlphaProfile& p : {kReference, AlphaProfile::constant(1.0)}) {
    const auto r = radial::graded_block_residuals(radial::to_graded_rep(radial::assemble(p, 1, g, BoundaryCondition::Idealized)));
    worst = std::max({worst, r.plus_plus, r.minus_minus, r.plus_minus});
  }
  return {worst <= 1e-10, fmt("max block residual %.2e", worst)};
}

Verdict toy_tables() {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ratio(0.05, 0.95), phase(0.0, 2 * std::acos(-1.0));
  using krein::VectorType;
  int eta_bad = 0, type_bad = 0, total = 0;
  for (int i = 0; i < 10000; ++i, ++total) {
    const bool dpos = (i % 4) < 2, fpos = i % 2 == 0;
    const double babs = std::abs(u(rng)) + 0.05, q = ratio(rng), t = phase(rng);
    double f = dpos ? babs / q : q * babs;
    if (!fpos) f = -f;
    const toy::ToyPoint p{u(rng), f, babs * std::cos(t), babs * std::sin(t)};
    Eigen::Matrix2cd want = Eigen::Matrix2cd::Zero();
    if (!dpos) {
      want(0, 1) = want(1, 0) = 1.0;
    } else {
      want(0, 0) = fpos ? -1.0 : 1.0;
      want(1, 1) = -want(0, 0);
    }
    const auto c = toy::classify_point(p);
    const auto d = toy::diagonalize(p);
    if (!c.eta || c.eta->matrix() != want || (d.eta->matrix() - want).norm() > 1e-9) ++eta_bad;
    const auto types = toy::eigenvector_krein_types(p);
    std::pair<VectorType, VectorType> expect{VectorType::Isotropic, VectorType::Isotropic};
    if (dpos) {
      expect = fpos ? std::pair{VectorType::Negative, VectorType::Positive}
                    : std::pair{VectorType::Positive, VectorType::Negative};
    }
    if (types != expect) ++type_bad;
  }
  double chain = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double babs = std::abs(u(rng)) + 0.05, t = phase(rng);
    const toy::ToyPoint p{u(rng), (i % 2 ? 1 : -1) * babs, babs * std::cos(t), babs * std::sin(t)};
    const auto j = toy::jordan_at_ep(p);
    const auto r = toy::jordan_chain_check(j.d, p.e0);
    const Eigen::Matrix2cd h = p.matrix();
    chain = std::max({chain, r.eigen, r.associated, r.nilpotent,
                      (j.s * j.d * j.s.inverse() - h).norm() / std::max(1.0, h.norm())});
  }
  return {eta_bad == 0 && type_bad == 0 && chain <= 1e-12,
          fmt("%d points: eta mismatches %d, Krein-type mismatches %d; cone chain residual %.2e", total, eta_bad,
              type_bad, chain)};
}

struct ReferenceRun {
  branch::WindowResult window;
  branch::MatrixFamily family;
  double seconds = 0.0;
};

const ReferenceRun& reference_run() {
  static const ReferenceRun run = [] {
    ReferenceRun r;
    const auto t0 = std::chrono::steady_clock::now();
    const branch::SweepConfig cfg{kReference, 1, BoundaryCondition::Physical,
                                  RadialGrid::make(Scheme::FiniteDifference2, 96)};
    r.family = branch::as_family(branch::AffineFamily::from_config(cfg));
    r.window = branch::auto_window(r.family, 18, 10.0, 400);
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

Verdict square_root_law() {
  // Toy: off the cone along f.
  const toy::ToyPoint cone{0.5, 1.0, 0.6, 0.8};
  std::vector<double> deltas, gaps;
  for (int k = 2; k <= 8; ++k) {
    const double d = std::pow(10.0, -k);
    const auto [em, ep] = toy::eigenvalues({cone.e0, cone.f + d, cone.b1, cone.b2});
    deltas.push_back(d);
    gaps.push_back(std::abs(ep - em));
  }
  const double toy_exp = branch::fit_exponent(deltas, gaps);

  const ReferenceRun& pr = reference_run();
  std::optional<double> dyn_exp;
  double c_star = NAN;
  for (const auto& e : pr.window.events) {
    const auto r = branch::refine_ep(e, pr.family);
    if (r.status == branch::EventStatus::Refined && r.exponent) {
      dyn_exp = r.exponent;
      c_star = r.c_star;
      break;
    }
  }
  const bool ok = std::abs(toy_exp - 0.5) <= 0.02 && dyn_exp && std::abs(*dyn_exp - 0.5) <= 0.1;
  return {ok, fmt("toy exponent %.4f, dynamo exponent %.4f at C*=%.6f", toy_exp, dyn_exp.value_or(NAN), c_star)};
}

Verdict pencil_equivalence() {
  double worst = 0.0;
  bool all = true;
  const RadialGrid g = RadialGrid::make(Scheme::LegendreGalerkin, 16);
  for (double a : {1.0, 2.0}) {
    for (BoundaryCondition bc : {BoundaryCondition::Idealized, BoundaryCondition::Physical}) {
      const AlphaProfile p = AlphaProfile::constant(a);
      const auto rep = pencil::pencil_linear_equivalence(pencil::build_pencil(p, 1, g, bc), radial::assemble(p, 1, g, bc));
      all &= rep.passed && rep.worst_linear_in_pencil <= 1e-8;
      worst = std::max(worst, rep.worst_linear_in_pencil);
    }
  }
  // The reference profile changes sign, so the chain is taken at an EP of a
  // positive profile where the pencil substitution is admissible.
  const branch::SweepConfig cfg{AlphaProfile{{1.0, 0.0, -0.9}, 1.0}, 1, BoundaryCondition::Idealized, g};
  const auto fam = branch::as_family(branch::AffineFamily::from_config(cfg));
  const auto w = branch::auto_window(fam, 12, 10.0, 200, 1, 5);
  double chain = INFINITY;
  double c_star = NAN;
  if (!w.events.empty()) {
    const auto ep = branch::refine_ep(w.events.front(), fam);
    c_star = ep.c_star;
    try {
      const auto c = pencil::solve_keldysh_chain(pencil::build_pencil(cfg.profile.with_scale(ep.c_star), 1, g, cfg.bc),
                                                 ep.lambda_star);
      chain = *std::max_element(c.relative_residuals.begin(), c.relative_residuals.end());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "chain: %s\n", e.what());
    }
  }
  return {all && chain <= 1e-5,
          fmt("max sigma_min/scale %.2e; chain residual %.2e (relative to scale) at C*=%.6f", worst, chain, c_star)};
}

Verdict reference_profile() {
  const ReferenceRun& pr = reference_run();
  int local_r2c = 0;
  for (const auto& e : pr.window.events) {
    if (e.kind == branch::TransitionKind::RealToComplex && e.participants == 2) ++local_r2c;
  }
  bool paired = true;
  for (const auto& s : pr.window.sweep.spectra) {
    for (const Complex& z : s.eigenvalues) {
      if (z.imag() == 0.0) continue;
      paired &= std::count(s.eigenvalues.begin(), s.eigenvalues.end(), std::conj(z)) == 1;
    }
    paired &= s.converged;
  }
  const auto t0 = std::chrono::steady_clock::now();
  double cc = NAN;
  bool critical_ok = false;
  try {
    const auto [lo, hi] = branch::find_critical_bracket(pr.family);
    const double below = branch::spectral_abscissa(pr.family(lo));
    const double above = branch::spectral_abscissa(pr.family(hi));
    const auto r = branch::critical_c(pr.family, lo, hi);
    cc = r.c;
    critical_ok = std::isfinite(cc) && below < 0.0 && above > 0.0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "critical: %s\n", e.what());
  }
  const double t = pr.seconds + seconds_since(t0);
  return {local_r2c >= 1 && paired && critical_ok && t <= 300.0,
          fmt("window [0, %g]: %zu events, %d RealToComplex with 2 participants; conjugation paired: %s; C_c=%.8f; %.1f s",
              pr.window.hi, pr.window.events.size(), local_r2c, paired ? "yes" : "no", cc, t)};
}

Verdict eigensolver() {
  std::mt19937 rng(99);
  std::normal_distribution<double> g;
  auto random20 = [&] {
    Eigen::MatrixXd m(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) m(i, j) = g(rng);
    return m;
  };
  double trace_err = 0.0, det_err = 0.0, sim_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd h = random20();
    auto a = eig::dense_spectrum(h).eigenvalues;
    Complex sum = 0.0, prod = 1.0;
    for (const Complex& z : a) {
      sum += z;
      prod *= z;
    }
    trace_err = std::max(trace_err, std::abs(sum - h.trace()) / h.norm());
    const double det = h.determinant();
    det_err = std::max(det_err, std::abs(prod - det) / std::max(1.0, std::abs(det)));
    const Eigen::MatrixXd p = random20() + 5.0 * Eigen::MatrixXd::Identity(20, 20);
    auto b = eig::dense_spectrum(p * h * p.inverse()).eigenvalues;
    for (std::size_t i = 0; i < a.size(); ++i) sim_err = std::max(sim_err, std::abs(a[i] - b[i]) / h.norm());
  }
  return {trace_err <= 1e-10 && det_err <= 1e-9 && sim_err <= 1e-8,
          fmt("trace %.2e, det %.2e, similarity %.2e", trace_err, det_err, sim_err)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"constant-alpha oracle", constant_alpha_oracle},
      {"free decay", free_decay},
      {"discrete J-symmetry dichotomy", j_symmetry},
      {"graded block relations", graded_blocks},
      {"toy eta and Krein-type tables", toy_tables},
      {"square-root branching", square_root_law},
      {"pencil-linear equivalence and chain", pencil_equivalence},
      {"reference profile sweep", reference_profile},
      {"eigensolver certification", eigensolver},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v{false, ""};
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
