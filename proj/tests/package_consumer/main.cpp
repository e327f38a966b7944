#include <cmath>
#include <cstdio>

#include "pmc/endpoint.hpp"

int main() {
  const double L_star = pmc::endpoint::compute_L_star().L_star;
  std::printf("L* = %.12g\n", L_star);
  return std::abs(L_star - 0.349967641964) < 1e-9 ? 0 : 1;
}
