#pragma once

/**
 * @file quadrature.hpp
 * @brief Scalar numerical kernels: singular quadrature on (0,1), bracketed
 * root finding and unimodal maximization.
 *
 * Integrands with inverse-square-root endpoint behaviour are handled by the
 * substitutions z = t^2 (left endpoint) and z = 1 - t^2 (right endpoint),
 * which turn z^(-1/2) and (1-z)^(-1/2) into bounded factors. The smooth
 * transformed integrand is then integrated by globally adaptive
 * Gauss-Kronrod (7/15) bisection.
 *
 * Integrands receive both z and 1 - z. The complement is produced directly by
 * the substitution (it equals t^2 near the right endpoint), so integrands that
 * divide by sqrt(1 - z) never see a rounded-away zero.
 */

#include <cstddef>
#include <functional>

namespace pmc::quadrature {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultEvaluationBudget = 1'000'000;

/// f(z, 1 - z) for z in (0, 1).
using Integrand = std::function<double(double z, double one_minus_z)>;
using ScalarFunction = std::function<double(double)>;

struct IntegralSpec {
  Integrand integrand;
  bool singular_left = false;   // integrand ~ z^(-1/2) at 0
  bool singular_right = false;  // integrand ~ (1-z)^(-1/2) at 1
  double abs_tol = kDefaultTolerance;
  double rel_tol = kDefaultTolerance;
  std::size_t max_evaluations = kDefaultEvaluationBudget;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Integrates spec.integrand over (0,1) until the summed Kronrod error
/// estimate drops below max(abs_tol, rel_tol * |value|).
///
/// Throws DomainError for non-positive tolerances, NonFinite if the integrand
/// is not finite at a quadrature node and NonConvergence when the evaluation
/// budget is exhausted.
QuadResult integrate_singular(const IntegralSpec& spec);

/// Convenience overload for integrands that only need z.
QuadResult integrate_singular(const std::function<double(double)>& f, bool singular_left,
                              bool singular_right, double abs_tol = kDefaultTolerance,
                              double rel_tol = kDefaultTolerance);

/// Root of a continuous f on lo <= hi with f(lo) * f(hi) <= 0. Throws
/// BadBracket for a reversed bracket or ends of equal sign.
///
/// Each iteration takes a regula-falsi step inside the bracket and falls back
/// to bisection whenever the bracket failed to halve, so the width at least
/// halves every two evaluations. Returns when the bracket is narrower than
/// tol, reporting the bracket end with the smaller |f|.
double find_root(const ScalarFunction& f, double lo, double hi, double tol);

struct Extremum {
  double argmax = 0.0;
  double max = 0.0;
};

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
/// The endpoints are compared as well, so monotone functions return the
/// larger endpoint.
Extremum maximize_unimodal(const ScalarFunction& f, double lo, double hi, double tol);

}  // namespace pmc::quadrature
