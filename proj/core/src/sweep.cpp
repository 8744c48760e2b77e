#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "dynamo/branch.hpp"
#include "dynamo/error.hpp"

namespace dynamo::branch {

AffineFamily AffineFamily::from_config(const SweepConfig& config) {
  const Eigen::MatrixXd h0 =
      radial::assemble(config.profile.with_scale(0.0), config.l, config.grid, config.bc).matrix;
  const Eigen::MatrixXd h1 =
      radial::assemble(config.profile.with_scale(1.0), config.l, config.grid, config.bc).matrix;
  return {h0, h1 - h0};
}

MatrixFamily as_family(const AffineFamily& affine) {
  return [affine](double c) { return affine.at(c); };
}

bool SweepResult::all_converged() const noexcept {
  return std::all_of(spectra.begin(), spectra.end(),
                     [](const eig::Spectrum& s) { return s.converged; });
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("DYNAMO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult sweep(const MatrixFamily& family, const std::vector<double>& c_grid, unsigned threads) {
  if (c_grid.empty()) throw Error(ErrorKind::InvalidArgument, "sweep: empty C grid");
  for (std::size_t k = 0; k < c_grid.size(); ++k) {
    if (!std::isfinite(c_grid[k])) throw Error(ErrorKind::NonFiniteInput, "sweep: C not finite");
    if (k > 0 && !(c_grid[k] > c_grid[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "sweep: C grid must be strictly increasing");
    }
  }
  SweepResult out;
  out.c_values = c_grid;
  out.spectra.resize(c_grid.size());
  std::vector<double> norms(c_grid.size(), 0.0);

  const unsigned workers =
      std::min<unsigned>(threads == 0 ? sweep_threads() : threads, c_grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < c_grid.size(); k = next++) {
      const Eigen::MatrixXd h = family(c_grid[k]);
      norms[k] = h.norm();
      out.spectra[k] = eig::dense_spectrum(h);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  out.matrix_scale = *std::max_element(norms.begin(), norms.end());
  return out;
}

SweepResult sweep(const SweepConfig& config, const std::vector<double>& c_grid, unsigned threads) {
  SweepResult out = sweep(as_family(AffineFamily::from_config(config)), c_grid, threads);
  out.config = config;
  return out;
}

std::vector<double> uniform_grid(double lo, double hi, int count) {
  if (count < 1 || !(hi >= lo)) throw Error(ErrorKind::InvalidArgument, "uniform_grid: bad range");
  if (count == 1) return {lo};
  if (hi == lo) throw Error(ErrorKind::InvalidArgument, "uniform_grid: empty range");
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = lo + (hi - lo) * k / (count - 1);
  g.back() = hi;
  return g;
}

}  // namespace dynamo::branch
