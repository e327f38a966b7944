#pragma once

// Solution profiles u(x) on [-L, L] rebuilt from the first integral
//
//   (1 + u'^2)^(-1/2) - lambda / (1 - u) = E,   E = 1 - lambda / (1 - alpha),
//
// by inverting x(U), the distance from the midpoint at which u drops to U.

#include <cstddef>
#include <vector>

namespace pmc::profile {

inline constexpr double kProfileTolerance = 1e-13;
inline constexpr double kMinimumDeflection = 1e-8;

struct SolutionProfile {
  double lambda = 0.0;
  double L = 0.0;
  double alpha = 0.0;   // u(0) = max u
  double energy = 0.0;  // first-integral constant E
  std::vector<double> xs;
  std::vector<double> us;
  double residual_max = 0.0;
};

[[nodiscard]] double first_integral_energy(double alpha, double lambda);

/// x(U) = int_U^alpha (N / (sqrt(lambda (alpha - u)) sqrt(D))) du for 0 <= U <= alpha;
/// x(alpha) = 0 and x(0) = T(alpha; lambda).
[[nodiscard]] double x_of_u(double U, double alpha, double lambda,
                            double tol = kProfileTolerance);

/// |u'| where the profile crosses height U, from the first integral.
[[nodiscard]] double slope_at(double U, double alpha, double lambda);

/// |u'(+-L)|; infinite when alpha = 1/(1+lambda).
[[nodiscard]] double boundary_slope(double alpha, double lambda);

/// Samples u at n (odd, >= 3) points spanning [-L, L] with L = T(alpha; lambda).
/// The right half is parameterized by the slope angle theta, for which u(theta)
/// is closed-form and x(theta) is a regular integral; the samples are
/// equispaced in normalized arclength plus normalized turning angle. The
/// negative half is the exact mirror image of the positive half.
[[nodiscard]] SolutionProfile reconstruct_profile(double alpha, double lambda, std::size_t n,
                                                  double tol = kProfileTolerance);

/// max_j |(F_{j+1/2} - F_{j-1/2}) / dx + lambda / (1 - u_j)^2| over interior
/// samples, where F = u' / sqrt(1 + u'^2) from one-sided slopes between
/// neighbours. Needs at least five interior samples.
[[nodiscard]] double residual_check(const SolutionProfile& profile);

/// Largest deviation of (1 + u'^2)^(-1/2) - lambda/(1-u) from the energy.
/// The slope comes from the quartic through five neighbouring samples, fitted
/// either as u(x) or, on monotone stretches, as x(u); each sample takes the
/// fit whose derivative agrees better with the three-point one, so steep ends
/// are differentiated along u.
[[nodiscard]] double energy_drift(const SolutionProfile& profile);

struct ConditionReport {
  bool positivity = false;
  bool concavity = false;
  bool sup_bound = false;
  bool evenness = false;
  bool energy_conservation = false;
  double energy_drift = 0.0;
  [[nodiscard]] bool all() const {
    return positivity && concavity && sup_bound && evenness && energy_conservation;
  }
};

inline constexpr double kEnergyTolerance = 1e-6;
inline constexpr double kEvennessTolerance = 1e-12;

[[nodiscard]] ConditionReport verify_necessary_conditions(const SolutionProfile& profile);

}  // namespace pmc::profile
