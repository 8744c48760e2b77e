#include "dynamo/special.hpp"

#include <cmath>
#include <numbers>

#include "dynamo/error.hpp"

namespace dynamo::special {

double spherical_bessel_j(int l, double x) {
  if (l < 0) throw Error(ErrorKind::InvalidArgument, "spherical_bessel_j: l < 0");
  return std::sph_bessel(static_cast<unsigned>(l), x);
}

std::vector<double> spherical_bessel_zeros(int l, int count, double tol) {
  if (l < 0 || count < 0) throw Error(ErrorKind::InvalidArgument, "spherical_bessel_zeros");
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  // Consecutive zeros are ~pi apart and none lies below l + 1/2.
  const double step = std::numbers::pi / 8.0;
  double a = 0.5 + l;
  double fa = spherical_bessel_j(l, a);
  while (static_cast<int>(zeros.size()) < count) {
    double b = a + step;
    double fb = spherical_bessel_j(l, b);
    if (fa == 0.0) {
      zeros.push_back(a);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = spherical_bessel_j(l, mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace dynamo::special
