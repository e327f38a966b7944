#include "pmc/timemap.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmc/errors.hpp"

namespace pmc::timemap {
namespace {

// Closed-form endpoint slopes lose digits to the (lambda - 1)^3 denominator;
// inside this window the integral form is used instead.
constexpr double kSeamWindow = 1e-2;
constexpr double kSeamTolerance = 1e-14;

// N and D regrouped by powers of z. The constant terms 1 - (1+lambda) alpha
// and 2 - (2+lambda) alpha are where cancellation happens near the endpoint,
// and in this form they are a single rounding each.
struct Factors {
  double numer;  // N
  double denom;  // D
};

Factors factors(double alpha, double z, double lambda) {
  const double numer = (1.0 - (1.0 + lambda) * alpha) + alpha * z * (lambda + alpha - 1.0);
  const double denom = (2.0 - (2.0 + lambda) * alpha) + alpha * z * (lambda + 2.0 * alpha - 2.0);
  return {numer, denom};
}

void require_open(double alpha, double lambda, const char* who) {
  require_admissible(alpha, lambda);
  if (!(alpha < max_deflection(lambda))) {
    std::ostringstream msg;
    msg << who << ": alpha = " << alpha << " must lie strictly below 1/(1+lambda)";
    throw DomainError(msg.str());
  }
}

double integrate_right_singular(const quadrature::Integrand& f, double tol) {
  quadrature::IntegralSpec spec;
  spec.integrand = f;
  spec.singular_right = true;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  return quadrature::integrate_singular(spec).value;
}

}  // namespace

double max_deflection(double lambda) { return 1.0 / (1.0 + lambda); }

void require_admissible(double alpha, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " must be positive and finite";
    throw DomainError(msg.str());
  }
  if (!(alpha > 0.0) || !(alpha <= max_deflection(lambda))) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " outside (0, 1/(1+lambda)] for lambda = " << lambda;
    throw DomainError(msg.str());
  }
}

double kernel(double alpha, double z, double lambda) {
  return kernel(alpha, z, lambda, 1.0 - z);
}

double kernel(double alpha, double z, double lambda, double one_minus_z) {
  require_admissible(alpha, lambda);
  const auto [numer, denom] = factors(alpha, z, lambda);
  return std::sqrt(alpha / lambda) * numer / (std::sqrt(one_minus_z) * std::sqrt(denom));
}

std::array<double, 4> second_derivative_coefficients(double alpha, double lambda) {
  const double a = alpha;
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a4 = a3 * a;
  return {
      -1.0 + a * (1.0 - lambda),
      a * (1.0 + 5.0 * a - 10.0 * a2 + lambda + 2.0 * a3 * (2.0 + lambda)),
      -a3 * (10.0 - 17.0 * a + a2 * (7.0 + 3.0 * lambda)),
      a4 * (4.0 + 3.0 * a2 - 2.0 * lambda + a * (-7.0 + 3.0 * lambda)),
  };
}

double second_derivative_numerator(double z, double alpha, double lambda) {
  const auto c = second_derivative_coefficients(alpha, lambda);
  return c[0] + z * (c[1] + z * (c[2] + z * c[3]));
}

KernelDecomposition kernel_decomposition(double alpha, double z, double lambda) {
  return kernel_decomposition(alpha, z, lambda, 1.0 - z);
}

KernelDecomposition kernel_decomposition(double alpha, double z, double lambda,
                                         double one_minus_z) {
  require_admissible(alpha, lambda);
  const auto [numer, denom] = factors(alpha, z, lambda);
  const double root_zc = std::sqrt(one_minus_z);
  const double root_d = std::sqrt(denom);
  const double scale = std::sqrt(alpha / lambda);

  KernelDecomposition out;
  out.H1 = numer / (2.0 * std::sqrt(lambda * alpha) * root_zc * root_d);
  out.H2 = scale * (1.0 + (1.0 - 2.0 * alpha) * z + lambda * one_minus_z) / (root_zc * root_d);
  out.H3 = scale * numer * (2.0 + lambda * one_minus_z + (2.0 - 4.0 * alpha) * z) /
           (2.0 * root_zc * denom * root_d);
  out.a_coeffs = second_derivative_coefficients(alpha, lambda);
  const auto& c = out.a_coeffs;
  out.p_numerator = c[0] + z * (c[1] + z * (c[2] + z * c[3]));
  return out;
}

double kernel_alpha_derivative(double alpha, double z, double lambda, double one_minus_z) {
  const KernelDecomposition d = kernel_decomposition(alpha, z, lambda, one_minus_z);
  return d.H1 - d.H2 + d.H3;
}

double kernel_alpha_second_derivative(double alpha, double z, double lambda,
                                      double one_minus_z) {
  require_admissible(alpha, lambda);
  const double denom = factors(alpha, z, lambda).denom;
  const double p = second_derivative_numerator(z, alpha, lambda);
  const double d52 = denom * denom * std::sqrt(denom);
  return p / (alpha * std::sqrt(alpha) * std::sqrt(lambda) * std::sqrt(one_minus_z) * d52);
}

double time_map(double alpha, double lambda, double tol) {
  require_admissible(alpha, lambda);
  return integrate_right_singular(
      [alpha, lambda](double z, double zc) { return kernel(alpha, z, lambda, zc); }, tol);
}

double time_map_deriv(double alpha, double lambda, double tol) {
  require_open(alpha, lambda, "time_map_deriv");
  return integrate_right_singular(
      [alpha, lambda](double z, double zc) {
        return kernel_alpha_derivative(alpha, z, lambda, zc);
      },
      tol);
}

double time_map_second_deriv(double alpha, double lambda, double tol) {
  require_open(alpha, lambda, "time_map_second_deriv");
  return integrate_right_singular(
      [alpha, lambda](double z, double zc) {
        return kernel_alpha_second_derivative(alpha, z, lambda, zc);
      },
      tol);
}

TimeMapSample sample(double alpha, double lambda, double tol) {
  TimeMapSample s;
  s.alpha = alpha;
  s.lambda = lambda;
  s.T = time_map(alpha, lambda, tol);
  if (alpha < max_deflection(lambda)) {
    s.T_prime = time_map_deriv(alpha, lambda, tol);
    s.T_second = time_map_second_deriv(alpha, lambda, tol);
  }
  return s;
}

double endpoint_kernel_derivative(double z, double lambda, double one_minus_z) {
  const double zm1 = -one_minus_z;
  const double l2 = lambda * lambda;
  const double numer = 3.0 * lambda * zm1 - zm1 * zm1 - l2 * (z * z - 2.0 * z + 3.0) +
                       l2 * lambda * (z * z + z - 1.0);
  const double w = one_minus_z + lambda * (1.0 + z);
  return numer / (lambda * std::sqrt(1.0 + lambda) * std::sqrt(one_minus_z) * w * std::sqrt(w));
}

double endpoint_slope_quadrature(double lambda, double tol) {
  if (!(lambda > 0.0)) throw DomainError("endpoint_slope: lambda must be positive");
  return integrate_right_singular(
      [lambda](double z, double zc) { return endpoint_kernel_derivative(z, lambda, zc); }, tol);
}

double endpoint_slope(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("endpoint_slope: lambda must be positive and finite");
  }
  if (lambda == 1.0) return -8.0 / 5.0;
  if (std::abs(lambda - 1.0) < kSeamWindow) return endpoint_slope_quadrature(lambda, kSeamTolerance);

  const double l2 = lambda * lambda;
  const double common = 1.0 + l2 - 2.0 * l2 * l2;
  const double denom = lambda * (1.0 + lambda) * std::pow(lambda - 1.0, 3);
  if (lambda < 1.0) {
    const double p = std::sqrt(1.0 + lambda);
    const double m = std::sqrt(1.0 - lambda);
    const double s = std::sqrt(1.0 - l2);
    return (common - 3.0 * l2 * s * std::log((p + m) / (p - m))) / denom;
  }
  const double s = std::sqrt(l2 - 1.0);
  return (common + 6.0 * l2 * s * std::atan(std::sqrt((lambda - 1.0) / (lambda + 1.0)))) / denom;
}

double time_map_upper_bound(double alpha, double lambda) {
  const double r = std::sqrt(alpha);
  return std::sqrt(1.0 + lambda) / lambda * std::log((1.0 + r) / (1.0 - r));
}

EnvelopeCheck envelope_bounds(double alpha, double z, double lambda, double a_floor) {
  const KernelDecomposition d = kernel_decomposition(alpha, z, lambda);
  const double root_end = std::sqrt(z) * std::sqrt(1.0 - z);
  const double l32 = lambda * std::sqrt(lambda);
  const double root_1pl = std::sqrt(1.0 + lambda);

  const double bound1 = root_1pl / (2.0 * l32 * a_floor) / root_end;
  const double bound2 = (2.0 + lambda) * root_1pl / l32 / root_end;
  const double q = 1.0 - z / (1.0 + lambda);
  const double bound3 = (1.0 + lambda) * (4.0 + lambda) / (2.0 * lambda * lambda) /
                        (q * std::sqrt(q) * std::sqrt(1.0 - z));
  return {std::abs(d.H1) <= bound1, std::abs(d.H2) <= bound2, std::abs(d.H3) <= bound3};
}

}  // namespace pmc::timemap
