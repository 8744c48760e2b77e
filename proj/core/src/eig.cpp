#include "dynamo/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "dynamo/error.hpp"

namespace dynamo::eig {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Diagonal similarity D^{-1} A D with power-of-two entries equalizing row
// and column norms. Returns D.
Eigen::VectorXd balance(Eigen::MatrixXd& a) {
  const auto n = a.rows();
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c >= g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg form; V accumulates the
// orthogonal similarity so that A = V H V^T.
void hessenberg(Eigen::MatrixXd& h, Eigen::MatrixXd& v) {
  const Eigen::Index n = h.rows();
  const Eigen::Index low = 0, high = n - 1;
  Eigen::VectorXd ort = Eigen::VectorXd::Zero(n);

  for (Eigen::Index m = low + 1; m <= high - 1; ++m) {
    double scale = 0.0;
    for (Eigen::Index i = m; i <= high; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;
    double hh = 0.0;
    for (Eigen::Index i = high; i >= m; --i) {
      ort(i) = h(i, m - 1) / scale;
      hh += ort(i) * ort(i);
    }
    double g = std::sqrt(hh);
    if (ort(m) > 0) g = -g;
    hh -= ort(m) * g;
    ort(m) -= g;

    for (Eigen::Index j = m; j < n; ++j) {
      double f = 0.0;
      for (Eigen::Index i = high; i >= m; --i) f += ort(i) * h(i, j);
      f /= hh;
      for (Eigen::Index i = m; i <= high; ++i) h(i, j) -= f * ort(i);
    }
    for (Eigen::Index i = 0; i <= high; ++i) {
      double f = 0.0;
      for (Eigen::Index j = high; j >= m; --j) f += ort(j) * h(i, j);
      f /= hh;
      for (Eigen::Index j = m; j <= high; ++j) h(i, j) -= f * ort(j);
    }
    ort(m) *= scale;
    h(m, m - 1) = scale * g;
  }

  v.setIdentity(n, n);
  for (Eigen::Index m = high - 1; m >= low + 1; --m) {
    if (h(m, m - 1) == 0.0) continue;
    for (Eigen::Index i = m + 1; i <= high; ++i) ort(i) = h(i, m - 1);
    for (Eigen::Index j = m; j <= high; ++j) {
      double g = 0.0;
      for (Eigen::Index i = m; i <= high; ++i) g += ort(i) * v(i, j);
      g = (g / ort(m)) / h(m, m - 1);
      for (Eigen::Index i = m; i <= high; ++i) v(i, j) += g * ort(i);
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 2; i < n; ++i) h(i, j) = 0.0;
  }
}

Complex cdiv(double xr, double xi, double yr, double yi) {
  // Smith's algorithm.
  if (std::abs(yr) > std::abs(yi)) {
    const double r = yi / yr;
    const double d = yr + r * yi;
    return {(xr + r * xi) / d, (xi - r * xr) / d};
  }
  const double r = yr / yi;
  const double d = yi + r * yr;
  return {(r * xr + xi) / d, (r * xi - xr) / d};
}

struct SchurResult {
  Eigen::VectorXd re, im;
  bool converged = true;
};

// Francis double-shift QR on the Hessenberg matrix h. On return h holds the
// quasi-triangular Schur factor and, if `vectors`, v holds the eigenvectors
// (real/imaginary parts in adjacent columns for complex pairs).
SchurResult francis_qr(Eigen::MatrixXd& h, Eigen::MatrixXd& v, bool vectors) {
  const int nn = static_cast<int>(h.rows());
  SchurResult out;
  out.re = Eigen::VectorXd::Zero(nn);
  out.im = Eigen::VectorXd::Zero(nn);
  auto& d = out.re;
  auto& e = out.im;
  const int low = 0, high = nn - 1;
  const long max_sweeps = 40L * nn;
  long sweeps = 0;

  int n = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i) {
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(h(i, j));
  }

  int iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) < kEps * s) break;
      --l;
    }

    if (l == n) {
      h(n, n) += exshift;
      d(n) = h(n, n);
      e(n) = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        d(n - 1) = x + z;
        d(n) = d(n - 1);
        if (z != 0.0) d(n) = x - w / z;
        e(n - 1) = 0.0;
        e(n) = 0.0;
        x = h(n, n - 1);
        s = std::abs(x) + std::abs(z);
        p = x / s;
        q = z / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          z = h(n - 1, j);
          h(n - 1, j) = q * z + p * h(n, j);
          h(n, j) = q * h(n, j) - p * z;
        }
        for (int i = 0; i <= n; ++i) {
          z = h(i, n - 1);
          h(i, n - 1) = q * z + p * h(i, n);
          h(i, n) = q * h(i, n) - p * z;
        }
        if (vectors) {
          for (int i = low; i <= high; ++i) {
            z = v(i, n - 1);
            v(i, n - 1) = q * z + p * v(i, n);
            v(i, n) = q * v(i, n) - p * z;
          }
        }
      } else {
        d(n - 1) = x + p;
        d(n) = x + p;
        e(n - 1) = z;
        e(n) = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++sweeps > max_sweeps) {
        out.converged = false;
        for (int i = 0; i <= n; ++i) {
          d(i) = std::numeric_limits<double>::quiet_NaN();
          e(i) = std::numeric_limits<double>::quiet_NaN();
        }
        return out;
      }
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }
      // Exceptional shifts after 10 and 30 stagnant sweeps.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) h(i, i) -= x;
        s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) h(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      // Two consecutive small subdiagonal elements.
      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1))))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }

      // Double-shift QR step on rows l..n, columns m..n.
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0) {
          if (k != m) {
            h(k, k - 1) = -s * x;
          } else if (l != m) {
            h(k, k - 1) = -h(k, k - 1);
          }
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;
          for (int j = k; j < nn; ++j) {
            p = h(k, j) + q * h(k + 1, j);
            if (notlast) {
              p += r * h(k + 2, j);
              h(k + 2, j) -= p * z;
            }
            h(k, j) -= p * x;
            h(k + 1, j) -= p * y;
          }
          for (int i = 0; i <= std::min(n, k + 3); ++i) {
            p = x * h(i, k) + y * h(i, k + 1);
            if (notlast) {
              p += z * h(i, k + 2);
              h(i, k + 2) -= p * r;
            }
            h(i, k) -= p;
            h(i, k + 1) -= p * q;
          }
          if (vectors) {
            for (int i = low; i <= high; ++i) {
              p = x * v(i, k) + y * v(i, k + 1);
              if (notlast) {
                p += z * v(i, k + 2);
                v(i, k + 2) -= p * r;
              }
              v(i, k) -= p;
              v(i, k + 1) -= p * q;
            }
          }
        }
      }
    }
  }

  if (!vectors || norm == 0.0) return out;

  // Back substitution on the quasi-triangular factor.
  for (n = nn - 1; n >= 0; --n) {
    p = d(n);
    q = e(n);
    if (q == 0) {
      int l = n;
      h(n, n) = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        w = h(i, i) - p;
        r = 0.0;
        for (int j = l; j <= n; ++j) r += h(i, j) * h(j, n);
        if (e(i) < 0.0) {
          z = w;
          s = r;
        } else {
          l = i;
          if (e(i) == 0.0) {
            h(i, n) = (w != 0.0) ? -r / w : -r / (kEps * norm);
          } else {
            x = h(i, i + 1);
            y = h(i + 1, i);
            q = (d(i) - p) * (d(i) - p) + e(i) * e(i);
            t = (x * s - z * r) / q;
            h(i, n) = t;
            h(i + 1, n) = (std::abs(x) > std::abs(z)) ? (-r - w * t) / x : (-s - y * t) / z;
          }
          t = std::abs(h(i, n));
          if ((kEps * t) * t > 1) {
            for (int j = i; j <= n; ++j) h(j, n) /= t;
          }
        }
      }
    } else if (q < 0) {
      int l = n - 1;
      if (std::abs(h(n, n - 1)) > std::abs(h(n - 1, n))) {
        h(n - 1, n - 1) = q / h(n, n - 1);
        h(n - 1, n) = -(h(n, n) - p) / h(n, n - 1);
      } else {
        const Complex c = cdiv(0.0, -h(n - 1, n), h(n - 1, n - 1) - p, q);
        h(n - 1, n - 1) = c.real();
        h(n - 1, n) = c.imag();
      }
      h(n, n - 1) = 0.0;
      h(n, n) = 1.0;
      for (int i = n - 2; i >= 0; --i) {
        double ra = 0.0, sa = 0.0;
        for (int j = l; j <= n; ++j) {
          ra += h(i, j) * h(j, n - 1);
          sa += h(i, j) * h(j, n);
        }
        w = h(i, i) - p;
        if (e(i) < 0.0) {
          z = w;
          r = ra;
          s = sa;
        } else {
          l = i;
          if (e(i) == 0) {
            const Complex c = cdiv(-ra, -sa, w, q);
            h(i, n - 1) = c.real();
            h(i, n) = c.imag();
          } else {
            x = h(i, i + 1);
            y = h(i + 1, i);
            double vr = (d(i) - p) * (d(i) - p) + e(i) * e(i) - q * q;
            const double vi = (d(i) - p) * 2.0 * q;
            if (vr == 0.0 && vi == 0.0) {
              vr = kEps * norm * (std::abs(w) + std::abs(q) + std::abs(x) + std::abs(y) + std::abs(z));
            }
            const Complex c = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
            h(i, n - 1) = c.real();
            h(i, n) = c.imag();
            if (std::abs(x) > (std::abs(z) + std::abs(q))) {
              h(i + 1, n - 1) = (-ra - w * h(i, n - 1) + q * h(i, n)) / x;
              h(i + 1, n) = (-sa - w * h(i, n) - q * h(i, n - 1)) / x;
            } else {
              const Complex c2 = cdiv(-r - y * h(i, n - 1), -s - y * h(i, n), z, q);
              h(i + 1, n - 1) = c2.real();
              h(i + 1, n) = c2.imag();
            }
          }
          t = std::max(std::abs(h(i, n - 1)), std::abs(h(i, n)));
          if ((kEps * t) * t > 1) {
            for (int j = i; j <= n; ++j) {
              h(j, n - 1) /= t;
              h(j, n) /= t;
            }
          }
        }
      }
    }
  }

  // Back-transform: eigenvectors of the original (balanced) matrix.
  for (int j = nn - 1; j >= low; --j) {
    for (int i = low; i <= high; ++i) {
      z = 0.0;
      for (int k = low; k <= std::min(j, high); ++k) z += v(i, k) * h(k, j);
      v(i, j) = z;
    }
  }
  return out;
}

void check_finite(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "dense_spectrum needs a non-empty square matrix");
  }
  if (!h.allFinite()) throw Error(ErrorKind::NonFiniteInput, "dense_spectrum: NaN/Inf entry");
}

struct RawEigen {
  std::vector<Complex> values;
  std::vector<Eigen::VectorXcd> vectors;  // empty unless requested
  bool converged = true;
};

RawEigen qr_backend(const Eigen::MatrixXd& input, bool want_vectors) {
  Eigen::MatrixXd h = input;
  const Eigen::VectorXd scale = balance(h);
  Eigen::MatrixXd v;
  hessenberg(h, v);
  const SchurResult schur = francis_qr(h, v, want_vectors);

  RawEigen out;
  out.converged = schur.converged;
  const auto n = input.rows();
  out.values.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.values.emplace_back(schur.re(i), schur.im(i));
  if (want_vectors && schur.converged) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXcd vec(n);
      if (schur.im(i) == 0.0) {
        vec = v.col(i).cast<Complex>();
      } else if (schur.im(i) > 0.0) {
        vec = v.col(i).cast<Complex>() + Complex(0.0, 1.0) * v.col(i + 1).cast<Complex>();
      } else {
        vec = v.col(i - 1).cast<Complex>() - Complex(0.0, 1.0) * v.col(i).cast<Complex>();
      }
      vec = scale.cast<Complex>().cwiseProduct(vec);
      out.vectors.push_back(std::move(vec));
    }
  }
  return out;
}

RawEigen eigen_backend(const Eigen::MatrixXd& input, bool want_vectors) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(input, want_vectors);
  RawEigen out;
  out.converged = solver.info() == Eigen::Success;
  const auto n = input.rows();
  for (Eigen::Index i = 0; i < n; ++i) out.values.push_back(solver.eigenvalues()(i));
  if (want_vectors && out.converged) {
    for (Eigen::Index i = 0; i < n; ++i) out.vectors.push_back(solver.eigenvectors().col(i));
  }
  return out;
}

}  // namespace

bool spectral_order(const Complex& a, const Complex& b) noexcept {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

Spectrum dense_spectrum(const Eigen::MatrixXd& h, const SpectrumOptions& options) {
  check_finite(h);
  const RawEigen raw = options.backend == Backend::QrIteration
                           ? qr_backend(h, options.with_residuals)
                           : eigen_backend(h, options.with_residuals);

  const std::size_t n = raw.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // NaN entries (unconverged) go last.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const bool ni = std::isnan(raw.values[i].real());
    const bool nj = std::isnan(raw.values[j].real());
    if (ni != nj) return nj;
    return spectral_order(raw.values[i], raw.values[j]);
  });

  Spectrum out;
  out.matrix_dim = n;
  out.converged = raw.converged;
  out.eigenvalues.reserve(n);
  for (std::size_t i : order) out.eigenvalues.push_back(raw.values[i]);
  if (options.with_residuals && !raw.vectors.empty()) {
    const double hnorm = std::max(h.norm(), std::numeric_limits<double>::min());
    const Eigen::MatrixXcd hc = h.cast<Complex>();
    out.residuals.reserve(n);
    for (std::size_t i : order) {
      const Eigen::VectorXcd& v = raw.vectors[i];
      const double vn = v.norm();
      out.residuals.push_back((hc * v - raw.values[i] * v).norm() / (hnorm * vn));
    }
  }
  return out;
}

}  // namespace dynamo::eig
