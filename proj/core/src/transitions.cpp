#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "dynamo/branch.hpp"
#include "dynamo/error.hpp"

namespace dynamo::branch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Pair {
  Complex a, b;
  Complex center() const { return 0.5 * (a + b); }
  double gap() const { return std::abs(a - b); }
  // ((a - b) / 2)^2 is real for a real or a conjugate pair.
  double d() const { return std::real(0.25 * (a - b) * (a - b)); }
};

// The admissible pair (both real, or complex conjugate) whose centre lies
// closest to `target`.
std::optional<Pair> pair_near(const Eigen::MatrixXd& h, Complex target) {
  const eig::Spectrum s = eig::dense_spectrum(h);
  const double tiny = 1e-12 * std::max(1.0, h.norm());
  std::vector<Complex> ev;
  for (const Complex& z : s.eigenvalues)
    if (std::isfinite(z.real()) && std::isfinite(z.imag())) ev.push_back(z);
  std::sort(ev.begin(), ev.end(), [&](const Complex& x, const Complex& y) {
    return std::abs(x - target) < std::abs(y - target);
  });
  ev.resize(std::min<std::size_t>(ev.size(), 6));
  std::optional<Pair> best;
  double best_dist = kInf;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      const bool real_pair = std::abs(ev[i].imag()) <= tiny && std::abs(ev[j].imag()) <= tiny;
      const bool conjugate = std::abs(ev[i] - std::conj(ev[j])) <= tiny && std::abs(ev[i].imag()) > tiny;
      if (!real_pair && !conjugate) continue;
      Pair p{ev[i], ev[j]};
      if (real_pair) p = {Complex(ev[i].real(), 0.0), Complex(ev[j].real(), 0.0)};
      const double dist = std::abs(p.center() - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = p;
      }
    }
  }
  return best;
}

Pair pair_or_throw(const MatrixFamily& family, double c, Complex target) {
  auto p = pair_near(family(c), target);
  if (!p) throw Error(ErrorKind::LostBracket, "no real or conjugate pair near the event at C = " + std::to_string(c));
  return *p;
}

}  // namespace

std::string to_string(TransitionKind kind) {
  return kind == TransitionKind::RealToComplex ? "RealToComplex" : "ComplexToReal";
}

std::string to_string(EventStatus status) {
  switch (status) {
    case EventStatus::Bracketed: return "Bracketed";
    case EventStatus::Refined: return "Refined";
    case EventStatus::NearMiss: return "NearMiss";
  }
  return "?";
}

std::vector<TransitionEvent> detect_transitions(const std::vector<Branch>& branches, double im_tol) {
  std::vector<TransitionEvent> events;
  if (branches.empty()) return events;
  const std::size_t steps = branches.front().points.size();
  for (const auto& b : branches) {
    if (b.points.size() != steps) {
      throw Error(ErrorKind::DimensionMismatch, "detect_transitions: branches differ in length");
    }
  }
  auto is_real = [&](const Complex& z) { return std::abs(z.imag()) <= im_tol; };

  for (std::size_t k = 0; k + 1 < steps; ++k) {
    std::vector<int> to_complex, to_real;
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const bool r0 = is_real(branches[i].points[k].lambda);
      const bool r1 = is_real(branches[i].points[k + 1].lambda);
      if (r0 && !r1) to_complex.push_back(static_cast<int>(i));
      if (!r0 && r1) to_real.push_back(static_cast<int>(i));
    }
    std::vector<int> changed = to_complex;
    changed.insert(changed.end(), to_real.begin(), to_real.end());

    auto pair_up = [&](const std::vector<int>& set, TransitionKind kind) {
      // Partners are conjugates on the complex side of the step.
      const std::size_t cside = kind == TransitionKind::RealToComplex ? k + 1 : k;
      const std::size_t rside = kind == TransitionKind::RealToComplex ? k : k + 1;
      std::vector<bool> used(set.size(), false);
      for (std::size_t x = 0; x < set.size(); ++x) {
        if (used[x]) continue;
        const Complex za = branches[set[x]].points[cside].lambda;
        std::size_t best = set.size();
        double best_dist = kInf;
        for (std::size_t y = 0; y < set.size(); ++y) {
          if (y == x || used[y]) continue;
          const double dist = std::abs(branches[set[y]].points[cside].lambda - std::conj(za));
          if (dist < best_dist) {
            best_dist = dist;
            best = y;
          }
        }
        if (best == set.size()) continue;
        used[x] = used[best] = true;
        const Branch& a = branches[set[x]];
        const Branch& b = branches[set[best]];
        TransitionEvent ev;
        ev.kind = kind;
        ev.c_low = a.points[k].c;
        ev.c_high = a.points[k + 1].c;
        ev.c_star = 0.5 * (ev.c_low + ev.c_high);
        const Complex center_r = 0.5 * (a.points[rside].lambda + b.points[rside].lambda);
        const Complex center_c = 0.5 * (a.points[cside].lambda + b.points[cside].lambda);
        ev.lambda_star = Complex(0.5 * (center_r.real() + center_c.real()), 0.0);
        ev.branch_ids = {std::min(a.id, b.id), std::max(a.id, b.id)};
        ev.min_gap = std::min(std::abs(a.points[k].lambda - b.points[k].lambda),
                              std::abs(a.points[k + 1].lambda - b.points[k + 1].lambda));
        // Locality: branches changing character at this step close to the event.
        const double radius =
            2.0 * std::max(std::abs(a.points[k].lambda - b.points[k].lambda),
                           std::abs(a.points[k + 1].lambda - b.points[k + 1].lambda)) +
            std::abs(center_c - center_r) + im_tol;
        int participants = 0;
        for (int i : changed) {
          const auto& p = branches[i].points;
          if (std::abs(p[k].lambda - ev.lambda_star) <= radius ||
              std::abs(p[k + 1].lambda - ev.lambda_star) <= radius) {
            ++participants;
          }
        }
        ev.participants = std::max(participants, 2);
        ev.multi_branch = ev.participants > 2;
        events.push_back(ev);
      }
    };
    pair_up(to_complex, TransitionKind::RealToComplex);
    pair_up(to_real, TransitionKind::ComplexToReal);
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& x, const auto& y) {
    return x.c_low < y.c_low || (x.c_low == y.c_low && x.branch_ids < y.branch_ids);
  });
  return events;
}

double fit_exponent(const std::vector<double>& delta, const std::vector<double>& gap) {
  if (delta.size() != gap.size() || delta.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "fit_exponent: need two or more matching samples");
  }
  const auto n = static_cast<double>(delta.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!(delta[i] > 0.0) || !(gap[i] > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "fit_exponent: samples must be positive");
    }
    const double x = std::log(delta[i]), y = std::log(gap[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TransitionEvent refine_ep(const TransitionEvent& event, const MatrixFamily& family,
                          const RefineOptions& options) {
  if (!(event.c_high > event.c_low)) return event;
  TransitionEvent out = event;
  double lo = event.c_low, hi = event.c_high;

  Pair plo = pair_or_throw(family, lo, event.lambda_star);
  Pair phi = pair_or_throw(family, hi, event.lambda_star);
  const bool sign_change = (plo.d() > 0.0) != (phi.d() > 0.0);

  if (sign_change) {
    Complex target = 0.5 * (plo.center() + phi.center());
    for (int it = 0; it < options.max_iterations; ++it) {
      if (hi - lo <= options.c_tol * std::max(1.0, std::abs(0.5 * (lo + hi)))) break;
      const double mid = 0.5 * (lo + hi);
      const Pair pm = pair_or_throw(family, mid, target);
      target = pm.center();
      if ((pm.d() > 0.0) == (plo.d() > 0.0)) {
        lo = mid;
        plo = pm;
      } else {
        hi = mid;
        phi = pm;
      }
    }
    out.c_low = lo;
    out.c_high = hi;
    out.c_star = 0.5 * (lo + hi);
    const Pair star = pair_or_throw(family, out.c_star, target);
    out.lambda_star = star.center();
    out.min_gap = star.gap();
    out.status = EventStatus::Refined;
    out.kind = plo.d() > 0.0 ? TransitionKind::RealToComplex : TransitionKind::ComplexToReal;

    // Square-root law on the real side.
    const double side = out.kind == TransitionKind::RealToComplex ? -1.0 : 1.0;
    const double w0 = options.fit_width * std::max(1.0, std::abs(out.c_star));
    std::vector<double> deltas, gaps;
    for (int k = 0; k < options.fit_points; ++k) {
      const double delta = w0 * std::pow(10.0, -k);
      const double c = (side < 0 ? out.c_low : out.c_high) + side * delta;
      const auto p = pair_near(family(c), out.lambda_star);
      if (!p || p->d() <= 0.0) continue;
      deltas.push_back(std::abs(c - out.c_star));
      gaps.push_back(p->gap());
    }
    if (deltas.size() >= 2) out.exponent = fit_exponent(deltas, gaps);
    return out;
  }

  // No sign change: golden-section search for the smallest gap.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  Complex target = 0.5 * (plo.center() + phi.center());
  auto gap_at = [&](double c) {
    const Pair p = pair_or_throw(family, c, target);
    return p.gap();
  };
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double g1 = gap_at(x1), g2 = gap_at(x2);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (b - a <= options.c_tol * std::max(1.0, std::abs(0.5 * (a + b)))) break;
    if (g1 < g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - invphi * (b - a);
      g1 = gap_at(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + invphi * (b - a);
      g2 = gap_at(x2);
    }
  }
  out.c_low = a;
  out.c_high = b;
  out.c_star = 0.5 * (a + b);
  const Pair star = pair_or_throw(family, out.c_star, target);
  out.lambda_star = star.center();
  out.min_gap = star.gap();
  out.status = out.min_gap <= options.collision_tol * std::max(1.0, std::abs(out.lambda_star)) ? EventStatus::Refined
                                                             : EventStatus::NearMiss;
  return out;
}

double spectral_abscissa(const Eigen::MatrixXd& h, Complex* argmax) {
  const eig::Spectrum s = eig::dense_spectrum(h);
  if (!s.converged || s.eigenvalues.empty() || !std::isfinite(s.eigenvalues.front().real())) {
    throw Error(ErrorKind::NonConvergence, "spectral_abscissa: eigensolver did not converge");
  }
  if (argmax) *argmax = s.eigenvalues.front();
  return s.eigenvalues.front().real();
}

CriticalResult critical_c(const MatrixFamily& family, double lo, double hi,
                          const CriticalOptions& options) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "critical_c: need lo < hi");
  double slo = spectral_abscissa(family(lo));
  double shi = spectral_abscissa(family(hi));
  if ((slo > 0.0) == (shi > 0.0)) {
    throw Error(ErrorKind::NoSignChange,
                "spectral abscissa has the same sign at both ends of [" + std::to_string(lo) +
                    ", " + std::to_string(hi) + "]");
  }
  for (int it = 0; it < options.max_iterations && hi - lo > options.c_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = spectral_abscissa(family(mid));
    if ((s > 0.0) == (slo > 0.0)) {
      lo = mid;
      slo = s;
    } else {
      hi = mid;
      shi = s;
    }
  }
  CriticalResult r;
  r.c_low = lo;
  r.c_high = hi;
  r.c = 0.5 * (lo + hi);
  const Eigen::MatrixXd h = family(r.c);
  r.abscissa = spectral_abscissa(h, &r.lambda);
  r.oscillatory = std::abs(r.lambda.imag()) > options.im_tol_rel * std::max(1.0, std::abs(r.lambda));
  return r;
}

std::pair<double, double> find_critical_bracket(const MatrixFamily& family, double start,
                                                int max_doublings, int scan_points) {
  if (!(start > 0.0)) throw Error(ErrorKind::InvalidArgument, "find_critical_bracket: start must be positive");
  if (spectral_abscissa(family(0.0)) > 0.0) {
    throw Error(ErrorKind::NoSignChange, "already supercritical at C = 0");
  }
  double hi = start;
  int doublings = 0;
  while (spectral_abscissa(family(hi)) <= 0.0) {
    if (++doublings > max_doublings) {
      throw Error(ErrorKind::NoSignChange, "no supercritical C up to " + std::to_string(hi));
    }
    hi *= 2.0;
  }
  const std::vector<double> grid = uniform_grid(0.0, hi, std::max(2, scan_points));
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (spectral_abscissa(family(grid[k])) > 0.0) return {grid[k - 1], grid[k]};
  }
  return {grid[grid.size() - 2], hi};
}

WindowResult auto_window(const MatrixFamily& family, int m, double start_hi, int points,
                         int min_events, int max_doublings, unsigned threads) {
  if (!(start_hi > 0.0) || points < 2) {
    throw Error(ErrorKind::InvalidArgument, "auto_window: need start_hi > 0 and points >= 2");
  }
  WindowResult w;
  w.hi = start_hi;
  for (int d = 0;; ++d) {
    w.sweep = sweep(family, uniform_grid(0.0, w.hi, points), threads);
    w.branches = match_branches(w.sweep, m);
    w.events = detect_transitions(w.branches, default_im_tol(w.branches));
    if (static_cast<int>(w.events.size()) >= min_events || d >= max_doublings) return w;
    w.hi *= 2.0;
  }
}

bool branches_distinct(const Branch& a, const Branch& b, double im_tol, double* min_gap) {
  double g = kInf;
  std::size_t i = 0, j = 0;
  while (i < a.points.size() && j < b.points.size()) {
    if (a.points[i].c < b.points[j].c) {
      ++i;
    } else if (b.points[j].c < a.points[i].c) {
      ++j;
    } else {
      g = std::min(g, std::abs(a.points[i].lambda - b.points[j].lambda));
      ++i;
      ++j;
    }
  }
  if (min_gap) *min_gap = g;
  return g > 10.0 * im_tol;
}

}  // namespace dynamo::branch
