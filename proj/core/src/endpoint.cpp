#include "pmc/endpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmc/errors.hpp"

namespace pmc::endpoint {
namespace {

constexpr double kValueSeam = 1e-4;
constexpr double kSlopeSeam = 1e-2;
constexpr double kSeamTolerance = 1e-14;

void require_positive(double lambda, const char* who) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << who << ": lambda = " << lambda << " must be positive and finite";
    throw DomainError(msg.str());
  }
}

double integrate(const quadrature::Integrand& f, double tol) {
  quadrature::IntegralSpec spec;
  spec.integrand = f;
  spec.singular_right = true;
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  return quadrature::integrate_singular(spec).value;
}

}  // namespace

double phi(double z, double lambda, double one_minus_z) {
  const double w = one_minus_z + lambda * (1.0 + z);
  return lambda / ((1.0 + lambda) * std::sqrt(1.0 + lambda)) * z /
         (std::sqrt(one_minus_z) * std::sqrt(w));
}

double phi_lambda(double z, double lambda, double one_minus_z) {
  const double l2 = lambda * lambda;
  const double w = one_minus_z + lambda * (1.0 + z);
  const double numer = (l2 - 1.0) * z + (l2 - lambda + 1.0) * z * z;
  return -numer / (std::pow(1.0 + lambda, 2.5) * std::sqrt(one_minus_z) * w * std::sqrt(w));
}

double g_quadrature(double lambda, double tol) {
  require_positive(lambda, "g_quadrature");
  return integrate([lambda](double z, double zc) { return phi(z, lambda, zc); }, tol);
}

double g_closed(double lambda) {
  require_positive(lambda, "g_closed");
  if (lambda == 1.0) return 1.0 / 3.0;
  if (std::abs(lambda - 1.0) < kValueSeam) return g_quadrature(lambda, kSeamTolerance);
  const double l2 = lambda * lambda;
  if (lambda < 1.0) {
    const double s = std::sqrt(1.0 - l2);
    return lambda / ((1.0 - l2) * s) * (std::log((1.0 + s) / lambda) - s);
  }
  const double s = std::sqrt(l2 - 1.0);
  return lambda / ((l2 - 1.0) * s) * (s - std::acos(1.0 / lambda));  // arcsec
}

double g_prime(double lambda) {
  require_positive(lambda, "g_prime");
  if (std::abs(lambda - 1.0) < kSlopeSeam) {
    return integrate([lambda](double z, double zc) { return phi_lambda(z, lambda, zc); },
                     kSeamTolerance);
  }
  const double l2 = lambda * lambda;
  if (lambda < 1.0) {
    const double s = std::sqrt(1.0 - l2);
    const double log_term = std::log((1.0 + s) / lambda);
    const double numer =
        -(2.0 + l2) * (1.0 - l2 + s) + (1.0 + 2.0 * l2) * (1.0 + s) * log_term;
    return numer / (std::pow(1.0 - l2, 2.5) * (1.0 + s));
  }
  const double s = std::sqrt(l2 - 1.0);
  return ((1.0 + 2.0 * l2) * std::acos(1.0 / lambda) - s * (2.0 + l2)) / std::pow(l2 - 1.0, 2.5);
}

LStar compute_L_star(double tol) {
  if (!(tol > 0.0)) throw DomainError("compute_L_star: tol must be positive");
  const auto coarse = quadrature::maximize_unimodal(g_closed, 1e-8, 1.0, tol);

  // One secant step on g' through points straddling the golden-section estimate.
  const double h = std::max(1e-6, 10.0 * tol);
  const double x0 = coarse.argmax - h;
  const double x1 = coarse.argmax + h;
  const double s0 = g_prime(x0);
  const double s1 = g_prime(x1);
  const double curvature = (s1 - s0) / (x1 - x0);
  double c = coarse.argmax;
  if (curvature < 0.0) c = x1 - s1 / curvature;

  const double slope = g_prime(c);
  const double slope_tol = std::max(tol, 1e-12) * std::max(1.0, std::abs(curvature));
  if (!(c > 0.0 && c < 1.0) || std::abs(slope) > slope_tol) {
    std::ostringstream msg;
    msg << "compute_L_star: |g'(c)| = " << std::abs(slope) << " exceeds " << slope_tol;
    throw NonConvergence(msg.str());
  }
  return {c, g_closed(c)};
}

EndpointCurve endpoint_curve(const std::vector<double>& lambda_grid) {
  EndpointCurve curve;
  curve.lambda_grid = lambda_grid;
  curve.g_values.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) curve.g_values.push_back(g_closed(lambda));
  const LStar ls = compute_L_star();
  curve.c = ls.c;
  curve.L_star = ls.L_star;
  return curve;
}

}  // namespace pmc::endpoint
