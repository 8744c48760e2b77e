#include <cmath>
#include <cstdio>

#include "dynamo/special.hpp"

int main() {
  const auto z = dynamo::special::spherical_bessel_zeros(0, 1);
  const double err = std::abs(z.at(0) - std::acos(-1.0));
  std::printf("first zero of j0: %.15f (error %.1e)\n", z.at(0), err);
  return err < 1e-10 ? 0 : 1;
}
