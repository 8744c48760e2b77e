#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dynamo/branch.hpp"
#include "dynamo/error.hpp"

namespace dynamo::branch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cost_of(const Complex& predicted, const Complex& candidate) {
  const double d = std::norm(candidate - predicted);
  return std::isfinite(d) ? d : kInf;
}

Complex predict(const Branch& b) {
  const auto& p = b.points;
  if (p.size() < 2) return p.back().lambda;
  return p.back().lambda + (p.back().lambda - p[p.size() - 2].lambda);
}

// Greedy assignment in order of increasing cost; ties resolved by branch
// index then candidate index, which follow the spectral order.
std::vector<int> greedy(const Eigen::MatrixXd& cost) {
  const auto rows = cost.rows(), cols = cost.cols();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(rows * cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return cost(a.first, a.second) < cost(b.first, b.second);
  });
  std::vector<int> assign(rows, -1);
  std::vector<bool> taken(cols, false);
  Eigen::Index left = rows;
  for (const auto& [i, j] : pairs) {
    if (assign[i] >= 0 || taken[j]) continue;
    assign[i] = static_cast<int>(j);
    taken[j] = true;
    if (--left == 0) break;
  }
  return assign;
}

double total(const Eigen::MatrixXd& cost, const std::vector<int>& assign) {
  double s = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i) s += cost(i, assign[i]);
  return s;
}

}  // namespace

double default_im_tol(const std::vector<Branch>& branches) {
  double r = 1.0;
  for (const auto& b : branches)
    for (const auto& p : b.points)
      if (std::isfinite(std::abs(p.lambda))) r = std::max(r, std::abs(p.lambda));
  return 1e-7 * r;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw Error(ErrorKind::InvalidArgument, "hungarian: more rows than columns");
  // Potentials method, 1-based with a virtual column 0.
  const double big = 1e300;
  auto c = [&](int i, int j) { return std::isfinite(cost(i - 1, j - 1)) ? cost(i - 1, j - 1) : big; };
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = c(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) assign[p[j] - 1] = j - 1;
  return assign;
}

std::vector<Branch> match_branches(const SweepResult& sweep, int m, const MatchOptions& options,
                                   MatchStats* stats) {
  if (sweep.spectra.empty()) throw Error(ErrorKind::InvalidArgument, "match_branches: empty sweep");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "match_branches: m must be positive");
  for (const auto& s : sweep.spectra) {
    if (static_cast<std::size_t>(m) > s.eigenvalues.size()) {
      throw Error(ErrorKind::InvalidArgument, "match_branches: m exceeds the spectrum size");
    }
  }
  MatchStats local;
  std::vector<Branch> branches(m);
  for (int i = 0; i < m; ++i) {
    branches[i].id = i;
    branches[i].points.push_back({sweep.c_values[0], sweep.spectra[0].eigenvalues[i], 0.0});
  }

  for (std::size_t k = 1; k < sweep.spectra.size(); ++k) {
    const auto& eigs = sweep.spectra[k].eigenvalues;
    const auto pool = static_cast<Eigen::Index>(std::min<std::size_t>(eigs.size(), 2 * m + 4));
    std::vector<Complex> predicted(m);
    for (int i = 0; i < m; ++i) predicted[i] = predict(branches[i]);

    Eigen::MatrixXd cost(m, pool);
    for (int i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < pool; ++j) cost(i, j) = cost_of(predicted[i], eigs[j]);

    std::vector<int> assign = greedy(cost);
    double lower = 0.0;
    for (int i = 0; i < m; ++i) lower += cost.row(i).minCoeff();
    const double greedy_cost = total(cost, assign);
    if (greedy_cost > 2.0 * lower + std::numeric_limits<double>::min()) {
      std::vector<int> optimal = hungarian(cost);
      if (total(cost, optimal) < greedy_cost) assign = std::move(optimal);
      ++local.hungarian_steps;
    }

    // Pairwise swap test for near ties.
    std::vector<bool> tied(m, false);
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        const int ja = assign[a], jb = assign[b];
        if (eigs[ja] == eigs[jb]) continue;
        const double kept = cost(a, ja) + cost(b, jb);
        const double swapped = cost(a, jb) + cost(b, ja);
        const double ref = 1.0 + std::norm(eigs[ja]) + std::norm(eigs[jb]);
        if (std::abs(swapped - kept) < options.ambiguity_tol * ref) tied[a] = tied[b] = true;
      }
    }

    double radius = 0.0;
    for (int i = 0; i < m; ++i)
      radius = std::max(radius, std::abs(eigs[assign[i]] - branches[i].points.back().lambda));
    const bool ambiguous = std::find(tied.begin(), tied.end(), true) != tied.end();
    for (int i = 0; i < m; ++i) {
      branches[i].points.push_back({sweep.c_values[k], eigs[assign[i]], radius});
      if (tied[i]) branches[i].ambiguous_steps.push_back(k - 1);
    }
    if (ambiguous) ++local.ambiguous_steps;
  }
  if (stats) *stats = local;
  return branches;
}

}  // namespace dynamo::branch
