#pragma once

#include <vector>

namespace dynamo::special {

/// j_l(x), the spherical Bessel function of the first kind.
double spherical_bessel_j(int l, double x);

/// First `count` positive zeros of j_l, located by scanning for sign changes
/// and bisecting each bracket down to `tol` (absolute).
std::vector<double> spherical_bessel_zeros(int l, int count, double tol = 1e-12);

}  // namespace dynamo::special
