#include "pmc/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pmc/errors.hpp"
#include "pmc/quadrature.hpp"
#include "pmc/timemap.hpp"

namespace pmc::profile {
namespace {

// x as a function of depth s = sqrt((alpha - U) / alpha), i.e.
// int_0^s 2 t K(alpha, 1 - t^2; lambda) dt. The substitution u = alpha (1 - t^2)
// removes the (alpha - u)^(-1/2) singularity at the midpoint.
double x_of_depth(double s, double alpha, double lambda, double tol) {
  if (s <= 0.0) return 0.0;
  quadrature::IntegralSpec spec;
  spec.integrand = [s, alpha, lambda](double w, double) {
    const double t = s * w;
    return s * 2.0 * t * timemap::kernel(alpha, (1.0 - t) * (1.0 + t), lambda, t * t);
  };
  spec.abs_tol = tol;
  spec.rel_tol = tol;
  return quadrature::integrate_singular(spec).value;
}

// The right half of a profile parameterized by the slope angle theta, with
// cos(theta) = (1 + u'^2)^(-1/2). The first integral gives
//   cos(theta) - E = lambda / (1 - u),
// and the equation itself gives dx/dtheta = lambda cos(theta) / (cos(theta) - E)^2
// and dsigma/dtheta = lambda / (cos(theta) - E)^2 for the arclength sigma.
// With q = lambda alpha / (1 - alpha) and r = 2 sin^2(theta/2) = 1 - cos(theta),
//   cos(theta) - E = q / alpha - r,   u = (q - r) / (q / alpha - r),
// so u(theta) avoids cancellation for small alpha and u(theta_end) = 0 exactly.
class AngleCurve {
 public:
  AngleCurve(double alpha, double lambda, double tol)
      : alpha_(alpha), lambda_(lambda), q_(lambda * alpha / (1.0 - alpha)), tol_(tol) {
    theta_end_ = 2.0 * std::asin(std::min(1.0, std::sqrt(0.5 * q_)));
    arclength_ = integral(theta_end_, false);
  }

  [[nodiscard]] double theta_end() const { return theta_end_; }

  [[nodiscard]] double u(double theta) const {
    const double r = versine(theta);
    return std::max(0.0, (q_ - r) / (q_ / alpha_ - r));
  }

  [[nodiscard]] double x(double theta) const { return integral(theta, true); }

  // Sampling coordinate in [0, 2]: normalized arclength plus normalized
  // turning angle, so points gather both where the profile is steep and
  // where it bends sharply.
  [[nodiscard]] double blend(double theta) const {
    return integral(theta, false) / arclength_ + theta / theta_end_;
  }

 private:
  static double versine(double theta) {
    const double s = std::sin(0.5 * theta);
    return 2.0 * s * s;
  }

  double integral(double theta, bool horizontal) const {
    if (theta <= 0.0) return 0.0;
    quadrature::IntegralSpec spec;
    spec.integrand = [this, theta, horizontal](double w, double) {
      const double phi = theta * w;
      const double r = versine(phi);
      const double gap = q_ / alpha_ - r;
      const double rate = lambda_ / (gap * gap);
      return theta * (horizontal ? rate * (1.0 - r) : rate);
    };
    spec.abs_tol = tol_;
    spec.rel_tol = tol_;
    return quadrature::integrate_singular(spec).value;
  }

  double alpha_;
  double lambda_;
  double q_;
  double tol_;
  double theta_end_ = 0.0;
  double arclength_ = 0.0;
};

// Derivative at x[mid] of the polynomial through count samples (x, u); the
// nodes need not be equispaced.
double lagrange_slope(const double* x, const double* u, int count, int mid) {
  const double at = x[mid];
  double slope = 0.0;
  for (int i = 0; i < count; ++i) {
    double weight = 0.0;
    for (int k = 0; k < count; ++k) {
      if (k == i) continue;
      double term = 1.0 / (x[i] - x[k]);
      for (int m = 0; m < count; ++m) {
        if (m != i && m != k) term *= (at - x[m]) / (x[i] - x[m]);
      }
      weight += term;
    }
    slope += weight * u[i];
  }
  return slope;
}

struct CosineEstimate {
  double value;
  double error;  // gap to the three-point estimate
};

// cos(theta) = (1 + u'^2)^(-1/2) from five samples centred on index 2.
CosineEstimate cosine_from_slope(const double* x, const double* u) {
  auto cosine = [](double s) { return 1.0 / std::sqrt(1.0 + s * s); };
  const double quartic = cosine(lagrange_slope(x, u, 5, 2));
  return {quartic, std::abs(quartic - cosine(lagrange_slope(x + 1, u + 1, 3, 1)))};
}

// The same from dx/du, for stencils on which u is strictly monotone.
CosineEstimate cosine_from_run(const double* x, const double* u) {
  auto cosine = [](double t) { return std::abs(t) / std::sqrt(1.0 + t * t); };
  const double quartic = cosine(lagrange_slope(u, x, 5, 2));
  return {quartic, std::abs(quartic - cosine(lagrange_slope(u + 1, x + 1, 3, 1)))};
}

bool strictly_monotone(const double* v) {
  bool rising = true;
  bool falling = true;
  for (int i = 1; i < 5; ++i) {
    rising = rising && v[i] > v[i - 1];
    falling = falling && v[i] < v[i - 1];
  }
  return rising || falling;
}

double flux(double slope) { return slope / std::sqrt(1.0 + slope * slope); }

void require_samples(const SolutionProfile& profile, std::size_t interior, const char* who) {
  if (profile.xs.size() != profile.us.size() || profile.xs.size() < interior + 2) {
    std::ostringstream msg;
    msg << who << ": need at least " << interior << " interior samples";
    throw DomainError(msg.str());
  }
}

}  // namespace

double first_integral_energy(double alpha, double lambda) {
  timemap::require_admissible(alpha, lambda);
  return 1.0 - lambda / (1.0 - alpha);
}

double x_of_u(double U, double alpha, double lambda, double tol) {
  timemap::require_admissible(alpha, lambda);
  if (!(U >= 0.0 && U <= alpha)) {
    std::ostringstream msg;
    msg << "x_of_u: U = " << U << " outside [0, alpha]";
    throw DomainError(msg.str());
  }
  return x_of_depth(std::sqrt((alpha - U) / alpha), alpha, lambda, tol);
}

double slope_at(double U, double alpha, double lambda) {
  timemap::require_admissible(alpha, lambda);
  const double drop = alpha - U;
  const double numer = (1.0 - U) * (1.0 - alpha) - lambda * drop;
  const double denom = 2.0 * (1.0 - U) * (1.0 - alpha) - lambda * drop;
  if (numer <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(lambda * drop) * std::sqrt(denom) / numer;
}

double boundary_slope(double alpha, double lambda) { return slope_at(0.0, alpha, lambda); }

SolutionProfile reconstruct_profile(double alpha, double lambda, std::size_t n, double tol) {
  timemap::require_admissible(alpha, lambda);
  if (alpha < kMinimumDeflection) {
    throw DomainError("reconstruct_profile: alpha below 1e-8 has a degenerate profile");
  }
  if (n < 3 || n % 2 == 0) {
    throw DomainError("reconstruct_profile: n must be odd and at least 3");
  }

  SolutionProfile out;
  out.lambda = lambda;
  out.alpha = alpha;
  out.energy = first_integral_energy(alpha, lambda);
  out.L = timemap::time_map(alpha, lambda, tol);

  const std::size_t half = (n - 1) / 2;
  const AngleCurve curve(alpha, lambda, tol);
  const double theta_end = curve.theta_end();
  std::vector<double> right_x(half + 1, 0.0);
  std::vector<double> right_u(half + 1, alpha);
  double theta_lo = 0.0;
  for (std::size_t j = 1; j <= half; ++j) {
    double theta = theta_end;
    if (j < half) {
      const double target = 2.0 * static_cast<double>(j) / static_cast<double>(half);
      auto miss = [&](double t) { return curve.blend(t) - target; };
      theta = quadrature::find_root(miss, theta_lo, theta_end, 1e-15 * theta_end);
      theta_lo = theta;
    }
    right_x[j] = curve.x(theta);
    right_u[j] = curve.u(theta);
  }
  right_x[half] = out.L;
  right_u[half] = 0.0;

  out.xs.resize(n);
  out.us.resize(n);
  for (std::size_t j = 0; j <= half; ++j) {
    out.xs[half + j] = right_x[j];
    out.xs[half - j] = -right_x[j];
    out.us[half + j] = right_u[j];
    out.us[half - j] = right_u[j];
  }
  out.xs[half] = 0.0;

  out.residual_max = n >= 7 ? residual_check(out) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double residual_check(const SolutionProfile& profile) {
  require_samples(profile, 5, "residual_check");
  const auto& x = profile.xs;
  const auto& u = profile.us;
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < x.size(); ++j) {
    const double left = flux((u[j] - u[j - 1]) / (x[j] - x[j - 1]));
    const double right = flux((u[j + 1] - u[j]) / (x[j + 1] - x[j]));
    const double divergence = (right - left) / (0.5 * (x[j + 1] - x[j - 1]));
    const double forcing = profile.lambda / ((1.0 - u[j]) * (1.0 - u[j]));
    worst = std::max(worst, std::abs(divergence + forcing));
  }
  return worst;
}

double energy_drift(const SolutionProfile& profile) {
  require_samples(profile, 5, "energy_drift");
  const auto& x = profile.xs;
  const auto& u = profile.us;
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < x.size(); ++j) {
    // u(x) is smooth near the midpoint, but near vertical ends it has a
    // square-root profile that no polynomial in x follows while x(u) stays
    // smooth. Each sample uses the form with the smaller error estimate.
    CosineEstimate best = cosine_from_slope(&x[j - 2], &u[j - 2]);
    if (strictly_monotone(&u[j - 2])) {
      const CosineEstimate alt = cosine_from_run(&x[j - 2], &u[j - 2]);
      if (alt.error < best.error) best = alt;
    }
    const double cosine = best.value;
    const double e = cosine - profile.lambda / (1.0 - u[j]);
    worst = std::max(worst, std::abs(e - profile.energy));
  }
  return worst;
}

ConditionReport verify_necessary_conditions(const SolutionProfile& profile) {
  require_samples(profile, 5, "verify_necessary_conditions");
  const auto& x = profile.xs;
  const auto& u = profile.us;
  const std::size_t n = x.size();
  ConditionReport report;

  report.positivity = std::all_of(u.begin() + 1, u.end() - 1, [](double v) { return v > 0.0; });

  report.concavity = true;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hl = x[j] - x[j - 1];
    const double hr = x[j + 1] - x[j];
    const double second = ((u[j + 1] - u[j]) / hr - (u[j] - u[j - 1]) / hl) / (0.5 * (hl + hr));
    if (!(second < 0.0)) report.concavity = false;
  }

  const double bound = timemap::max_deflection(profile.lambda);
  const double peak = *std::max_element(u.begin(), u.end());
  report.sup_bound = profile.alpha <= bound && peak <= bound;

  report.evenness = true;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = n - 1 - j;
    if (std::abs(x[j] + x[k]) > kEvennessTolerance || std::abs(u[j] - u[k]) > kEvennessTolerance) {
      report.evenness = false;
    }
  }

  report.energy_drift = energy_drift(profile);
  report.energy_conservation = report.energy_drift <= kEnergyTolerance;
  return report;
}

}  // namespace pmc::profile
