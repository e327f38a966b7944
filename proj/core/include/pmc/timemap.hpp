#pragma once

/**
 * @file timemap.hpp
 * @brief The time map T(alpha; lambda) of the prescribed mean curvature IVP
 *
 *   -(u' / sqrt(1 + u'^2))' = lambda / (1 - u)^2,   u(0) = alpha,  u'(0) = 0,
 *
 * i.e. the distance x at which the solution first reaches u = 0, written after
 * the substitution u = alpha * z as
 *
 *   T(alpha; lambda) = int_0^1 K(alpha, z; lambda) dz,
 *   K = sqrt(alpha / lambda) * N / (sqrt(1 - z) * sqrt(D)),
 *   N = (1 - alpha z)(1 - alpha) - lambda alpha (1 - z),
 *   D = 2 (1 - alpha z)(1 - alpha) - lambda alpha (1 - z).
 *
 * Admissible deflections are 0 < alpha <= 1 / (1 + lambda); on that set N and
 * D are positive for every z in (0, 1).
 */

#include <array>
#include <optional>

#include "pmc/quadrature.hpp"

namespace pmc::timemap {

/// Largest admissible midpoint deflection, 1 / (1 + lambda).
[[nodiscard]] double max_deflection(double lambda);

/// Throws DomainError unless lambda > 0 and 0 < alpha <= 1/(1+lambda).
void require_admissible(double alpha, double lambda);

struct TimeMapSample {
  double alpha = 0.0;
  double lambda = 0.0;
  double T = 0.0;
  std::optional<double> T_prime;
  std::optional<double> T_second;
};

/// Pointwise pieces of dK/dalpha = H1 - H2 + H3 and of the cubic numerator
/// p = a0 + a1 z + a2 z^2 + a3 z^3 of d2K/dalpha2.
struct KernelDecomposition {
  double H1 = 0.0;
  double H2 = 0.0;
  double H3 = 0.0;
  double p_numerator = 0.0;
  std::array<double, 4> a_coeffs{};
};

/// K(alpha, z; lambda). The four-argument form takes 1 - z explicitly so
/// callers near z = 1 do not lose it to rounding.
[[nodiscard]] double kernel(double alpha, double z, double lambda);
[[nodiscard]] double kernel(double alpha, double z, double lambda, double one_minus_z);

[[nodiscard]] KernelDecomposition kernel_decomposition(double alpha, double z, double lambda);
[[nodiscard]] KernelDecomposition kernel_decomposition(double alpha, double z, double lambda,
                                                       double one_minus_z);

/// Coefficients (a0, a1, a2, a3) of the cubic p(z, alpha; lambda).
[[nodiscard]] std::array<double, 4> second_derivative_coefficients(double alpha, double lambda);

/// p(z, alpha; lambda); its sign is the sign of d2K/dalpha2.
[[nodiscard]] double second_derivative_numerator(double z, double alpha, double lambda);

[[nodiscard]] double kernel_alpha_derivative(double alpha, double z, double lambda,
                                             double one_minus_z);
[[nodiscard]] double kernel_alpha_second_derivative(double alpha, double z, double lambda,
                                                    double one_minus_z);

/// T(alpha; lambda) on the closed admissible interval, endpoint included.
[[nodiscard]] double time_map(double alpha, double lambda,
                              double tol = quadrature::kDefaultTolerance);

/// T'(alpha; lambda); only on the open interval 0 < alpha < 1/(1+lambda).
[[nodiscard]] double time_map_deriv(double alpha, double lambda,
                                    double tol = quadrature::kDefaultTolerance);

/// T''(alpha; lambda); only on the open interval. Negative everywhere.
[[nodiscard]] double time_map_second_deriv(double alpha, double lambda,
                                           double tol = quadrature::kDefaultTolerance);

/// T and, away from the right endpoint, T' and T''.
[[nodiscard]] TimeMapSample sample(double alpha, double lambda,
                                   double tol = quadrature::kDefaultTolerance);

/// Closed-form limit of T'(alpha; lambda) as alpha -> 1/(1+lambda) from below.
/// Negative for every lambda > 0; equals -8/5 at lambda = 1.
[[nodiscard]] double endpoint_slope(double lambda);

/// The same limit computed by quadrature of dK/dalpha at the endpoint.
[[nodiscard]] double endpoint_slope_quadrature(double lambda,
                                               double tol = quadrature::kDefaultTolerance);

/// Integrand of endpoint_slope_quadrature, dK/dalpha(1/(1+lambda), z; lambda).
[[nodiscard]] double endpoint_kernel_derivative(double z, double lambda, double one_minus_z);

/// sqrt(1+lambda)/lambda * log((1+sqrt(alpha))/(1-sqrt(alpha))), an upper bound for T.
[[nodiscard]] double time_map_upper_bound(double alpha, double lambda);

struct EnvelopeCheck {
  bool h1 = false;
  bool h2 = false;
  bool h3 = false;
  [[nodiscard]] bool all() const { return h1 && h2 && h3; }
};

/// Whether |H1|, |H2|, |H3| lie under their integrable dominating functions
///   |H1| <= sqrt(1+lambda) / (2 lambda^(3/2) a) * z^(-1/2) (1-z)^(-1/2)
///   |H2| <= (2+lambda) sqrt(1+lambda) / lambda^(3/2) * z^(-1/2) (1-z)^(-1/2)
///   |H3| <= (1+lambda)(4+lambda) / (2 lambda^2) * (1 - z/(1+lambda))^(-3/2) (1-z)^(-1/2)
/// at one point with a_floor <= alpha <= 1/(1+lambda).
[[nodiscard]] EnvelopeCheck envelope_bounds(double alpha, double z, double lambda,
                                            double a_floor);

}  // namespace pmc::timemap
