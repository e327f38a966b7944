#pragma once

// Reference computations that share no code with the library: a fixed-step
// tanh-sinh rule, a dense midpoint rule, an independent formula for the time
// map and brute-force root counting.

#include <cstddef>
#include <functional>
#include <vector>

namespace pmc::oracle {

// Fixed-step tanh-sinh rule on (0, 1). Nodes cluster double-exponentially at
// both ends, so inverse-square-root singularities need no special treatment.
class TanhSinh {
 public:
  explicit TanhSinh(int level);
  /// f(z, 1 - z) integrated over (0, 1).
  [[nodiscard]] double integrate(const std::function<double(double, double)>& f) const;
  [[nodiscard]] std::size_t size() const { return z_.size(); }

 private:
  std::vector<double> z_, w_, weight_;
};

/// Step 2^-7: about 1e-14 on the integrands used here.
const TanhSinh& fine_rule();
/// Step 2^-5: cheap enough for 10^4-point scans, about 1e-10.
const TanhSinh& scan_rule();

/// Midpoint rule with n cells on (0, 1).
[[nodiscard]] double midpoint(const std::function<double(double)>& f, std::size_t n);

/// T(alpha; lambda) from the unsimplified integrand.
[[nodiscard]] double time_map(double alpha, double lambda, const TanhSinh& rule = fine_rule());

/// T(alpha; lambda) = int_0^theta_end lambda cos(theta) / (cos(theta) - E)^2 dtheta,
/// the slope-angle form of the same quantity.
[[nodiscard]] double time_map_by_angle(double alpha, double lambda);

/// g(lambda) = int_0^1 phi(z, lambda) dz.
[[nodiscard]] double endpoint_g(double lambda, const TanhSinh& rule = fine_rule());

/// Sign changes of T(.; lambda) - L over alpha_i = i / points / (1 + lambda),
/// i = 1..points. grid_max receives the largest sampled T.
[[nodiscard]] int sign_change_count(double lambda, double L, int points = 10'000,
                                    double* grid_max = nullptr);

}  // namespace pmc::oracle
