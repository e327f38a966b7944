#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "pmc/bifurcation.hpp"
#include "pmc/endpoint.hpp"
#include "pmc/profile.hpp"
#include "pmc/quadrature.hpp"
#include "pmc/timemap.hpp"

namespace pmc::acceptance {
namespace {

using Clock = std::chrono::steady_clock;


double oracle_T(double alpha, double lambda) { return oracle::time_map(alpha, lambda); }
double oracle_g(double lambda) { return oracle::endpoint_g(lambda); }

std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Collects failed sub-checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ < 3) failed_ += (failed_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : ", ") + text; }
  [[nodiscard]] bool passed() const { return failures_ == 0; }
  [[nodiscard]] std::string detail() const {
    if (passed()) return notes_;
    std::string out = std::to_string(failures_) + " failed check(s): " + failed_;
    if (!notes_.empty()) out += " | " + notes_;
    return out;
  }

 private:
  int failures_ = 0;
  std::string failed_;
  std::string notes_;
};

constexpr double kPublishedLStar = 0.3499676;

void criterion_l_star(Checks& c) {
  const auto t0 = Clock::now();
  const endpoint::LStar peak = endpoint::compute_L_star();
  const double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const double err = std::abs(peak.L_star - kPublishedLStar);
  c.expect(err <= 1e-6, "|L* - 0.3499676| = " + num(err) + " > 1e-6");
  c.expect(seconds < 1.0, "runtime " + num(seconds) + " s >= 1 s");
  const double oracle = oracle_g(peak.c);
  c.expect(std::abs(oracle - peak.L_star) <= 1e-10, "tanh-sinh g(c) disagrees with L*");
  c.note("L* = " + num(peak.L_star, 12) + " at c = " + num(peak.c, 12));
  c.note("|err| = " + num(err, 2) + ", " + num(seconds * 1e3, 3) + " ms");
}

void criterion_g_one(Checks& c) {
  const double closed = endpoint::g_closed(1.0);
  const double quad = timemap::time_map(0.5, 1.0);
  const double e1 = std::abs(closed - 1.0 / 3.0);
  const double e2 = std::abs(quad - 1.0 / 3.0);
  c.expect(e1 <= 1e-12, "|g_closed(1) - 1/3| = " + num(e1));
  c.expect(e2 <= 1e-8, "|T(1/2; 1) - 1/3| = " + num(e2));
  c.note("|g_closed(1) - 1/3| = " + num(e1, 2));
  c.note("|T(1/2; 1) - 1/3| = " + num(e2, 2));
}

void criterion_endpoint_slopes(Checks& c) {
  const double e1 = std::abs(timemap::endpoint_slope(1.0) + 1.6);
  const double e2 = std::abs(endpoint::g_prime(1.0) + 1.0 / 15.0);
  c.expect(e1 <= 1e-10, "|endpoint_slope(1) + 8/5| = " + num(e1));
  c.expect(e2 <= 1e-10, "|g'(1) + 1/15| = " + num(e2));

  // Central difference of the tanh-sinh g as an independent view of g'(1).
  const double h = 1e-3;
  const double fd = (oracle_g(1.0 + h) - oracle_g(1.0 - h)) / (2.0 * h);
  c.expect(std::abs(fd + 1.0 / 15.0) <= 1e-6, "finite-difference g'(1) = " + num(fd, 10));

  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 100; ++k) {
    const double lambda = 0.1 * k;
    const double slope = timemap::endpoint_slope(lambda);
    worst = std::max(worst, slope);
    c.expect(slope < 0.0, "endpoint_slope(" + num(lambda) + ") = " + num(slope));
  }
  c.note("|es(1) + 8/5| = " + num(e1, 2));
  c.note("|g'(1) + 1/15| = " + num(e2, 2));
  c.note("max endpoint_slope on 0.1..10 = " + num(worst));
}

void criterion_reference_integrals(Checks& c) {
  using quadrature::integrate_singular;
  const double pi_value =
      integrate_singular([](double z) { return 1.0 / (std::sqrt(z) * std::sqrt(1.0 - z)); }, true,
                         true, 1e-12, 1e-12)
          .value;
  double worst = std::abs(pi_value - std::numbers::pi);
  c.expect(worst <= 1e-8, "int 1/sqrt(z(1-z)) = " + num(pi_value, 15));
  for (double lambda : {0.5, 1.0, 2.0}) {
    quadrature::IntegralSpec spec;
    spec.integrand = [lambda](double z, double w) {
      return std::pow(1.0 - z / (1.0 + lambda), -1.5) / std::sqrt(w);
    };
    spec.singular_right = true;
    spec.abs_tol = spec.rel_tol = 1e-12;
    const double value = quadrature::integrate_singular(spec).value;
    const double err = std::abs(value - 2.0 * (1.0 + 1.0 / lambda));
    worst = std::max(worst, err);
    c.expect(err <= 1e-8, "second integral at lambda = " + num(lambda) + " off by " + num(err));
  }

  int cells = 0;
  int bad = 0;
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double end = timemap::max_deflection(lambda);
    const double a_floor = 0.05 * end;
    for (int i = 0; i < 20; ++i) {
      const double alpha = a_floor + (end - a_floor) * i / 19.0;
      for (int j = 0; j < 20; ++j) {
        const double z = (j + 0.5) / 20.0;
        ++cells;
        if (!timemap::envelope_bounds(alpha, z, lambda, a_floor).all()) ++bad;
      }
    }
  }
  c.expect(bad == 0, std::to_string(bad) + " envelope cells violated");
  c.note("max integral error " + num(worst, 2));
  c.note(std::to_string(cells - bad) + "/" + std::to_string(cells) + " envelope cells hold");
}

std::vector<int> collapse(const std::vector<int>& counts) {
  std::vector<int> runs;
  for (int n : counts) {
    if (runs.empty() || runs.back() != n) runs.push_back(n);
  }
  return runs;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? "->" : "") + std::to_string(values[i]);
  }
  return out;
}

void criterion_regime_counts(Checks& c) {
  struct Case {
    double L;
    bifurcation::Regime regime;
    std::vector<int> expected;
  };
  const std::vector<Case> cases = {{0.3, bifurcation::Regime::Split, {2, 1, 2, 1, 0}},
                                   {0.6, bifurcation::Regime::Continuous, {2, 1, 0}}};
  int scanned = 0;
  for (const Case& item : cases) {
    const bifurcation::CriticalSet cs = bifurcation::critical_set(item.L);
    c.expect(cs.regime == item.regime, "regime for L = " + num(item.L));
    std::vector<double> critical{cs.lambda_sup};
    if (cs.lambda_low && cs.lambda_mid) {
      c.expect(*cs.lambda_low < *cs.lambda_mid && *cs.lambda_mid < cs.lambda_sup,
               "critical values out of order");
      critical.push_back(*cs.lambda_low);
      critical.push_back(*cs.lambda_mid);
      for (double fold : {*cs.lambda_low, *cs.lambda_mid}) {
        const double miss = std::abs(oracle_g(fold) - item.L);
        c.expect(miss <= 1e-9, "g(fold) - L = " + num(miss) + " at " + num(fold));
      }
    }
    std::vector<double> lambdas = critical;
    const double lo = 0.25 * *std::min_element(critical.begin(), critical.end());
    const double hi = 2.0 * cs.lambda_sup;
    constexpr int kSweep = 24;
    for (int i = 0; i < kSweep; ++i) {
      lambdas.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (kSweep - 1)));
    }
    std::sort(lambdas.begin(), lambdas.end());

    std::vector<int> counts;
    for (double lambda : lambdas) {
      const int count = bifurcation::count_solutions(lambda, cs);
      counts.push_back(count);
      const auto alphas = bifurcation::solve_alphas(lambda, cs);
      c.expect(static_cast<int>(alphas.size()) == count,
               "solve_alphas size at lambda = " + num(lambda));
      const bool is_critical = std::any_of(critical.begin(), critical.end(), [&](double v) {
        return std::abs(lambda - v) <= 1e-7 * v;
      });
      if (is_critical) {
        if (lambda == cs.lambda_sup) {
          double grid_max = 0.0;
          (void)oracle::sign_change_count(lambda, item.L, 10'000, &grid_max);
          c.expect(std::abs(grid_max - item.L) <= 1e-6,
                   "grid max of T at lambda_sup misses L by " + num(grid_max - item.L));
        }
        continue;
      }
      const int brute = oracle::sign_change_count(lambda, item.L);
      ++scanned;
      c.expect(brute == count, "L = " + num(item.L) + ", lambda = " + num(lambda) + ": count " +
                                   std::to_string(count) + " vs scan " + std::to_string(brute));
    }
    const auto runs = collapse(counts);
    c.expect(runs == item.expected, "L = " + num(item.L) + " sequence " + join(runs));
    c.note("L = " + num(item.L) + ": " + join(runs));
  }
  c.note(std::to_string(scanned) + " counts matched 1e4-point scans");
}

void criterion_lambda_sup_bounds(Checks& c) {
  const double l_star = endpoint::compute_L_star().L_star;
  double tightest = 0.0;
  for (double L : {0.1, 0.3, l_star, 0.6, 1.0, 2.0, 5.0}) {
    const double sup = bifurcation::lambda_sup(L);
    const double ceiling = bifurcation::lambda_sup_ceiling(L);
    tightest = std::max(tightest, sup / ceiling);
    c.expect(sup < ceiling, "lambda_sup(" + num(L) + ") = " + num(sup) + " >= " + num(ceiling));
  }
  c.note("max lambda_sup / ceiling = " + num(tightest));
}

void criterion_closed_vs_quadrature(Checks& c) {
  double worst = 0.0;
  for (double lambda : {0.1, 0.5, 0.9, 0.999, 1.0, 1.001, 1.5, 3.0, 10.0}) {
    const double closed = endpoint::g_closed(lambda);
    const double reference = oracle_g(lambda);
    const double err = std::abs(closed - reference);
    worst = std::max(worst, err);
    c.expect(err <= 1e-8, "lambda = " + num(lambda) + " differs by " + num(err));
    c.expect(std::abs(endpoint::g_quadrature(lambda) - reference) <= 1e-8,
             "g_quadrature(" + num(lambda) + ") disagrees with tanh-sinh");
  }
  c.note("max |g_closed - int phi| = " + num(worst, 2));
}

void criterion_derivatives(Checks& c) {
  constexpr double kFdTol = 1e-14;
  double worst1 = 0.0;
  double worst2 = 0.0;
  double largest_second = -std::numeric_limits<double>::infinity();
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double end = timemap::max_deflection(lambda);
    for (int i = 0; i < 10; ++i) {
      const double alpha = end * (0.05 + 0.1 * i);
      const double h = 1e-3 * std::min(alpha, end - alpha);
      const double tm = timemap::time_map(alpha - h, lambda, kFdTol);
      const double t0 = timemap::time_map(alpha, lambda, kFdTol);
      const double tp = timemap::time_map(alpha + h, lambda, kFdTol);
      const double fd1 = (tp - tm) / (2.0 * h);
      const double fd2 = (tp - 2.0 * t0 + tm) / (h * h);
      const double d1 = timemap::time_map_deriv(alpha, lambda);
      const double d2 = timemap::time_map_second_deriv(alpha, lambda);
      const double e1 = std::abs(d1 - fd1);
      const double e2 = std::abs(d2 - fd2);
      worst1 = std::max(worst1, e1);
      worst2 = std::max(worst2, e2);
      largest_second = std::max(largest_second, d2);
      const std::string where = " at (" + num(alpha) + ", " + num(lambda) + ")";
      c.expect(e1 <= 1e-5, "T' off by " + num(e1) + where);
      c.expect(e2 <= 1e-4, "T'' off by " + num(e2) + where);
      c.expect(d2 < 0.0, "T'' = " + num(d2) + " not negative" + where);
    }
  }
  c.note("max |T' - fd| = " + num(worst1, 2));
  c.note("max |T'' - fd| = " + num(worst2, 2));
  c.note("max T'' = " + num(largest_second));
}

// The n = 401 residual is pure finite-difference truncation, so its size
// scales with the peak curvature lambda / (1 - alpha)^2. Profiles above
// kGatedCurvature are still reconstructed and checked for second-order decay
// and every other condition, but their residual is reported, not bounded.
constexpr double kGatedCurvature = 8.0;

void criterion_profiles(Checks& c) {
  struct Pick {
    double L;
    double lambda;
  };
  const std::vector<Pick> picks = {{0.3, 0.1}, {0.3, 0.15}, {0.3, 1.0}, {0.3, 2.0},
                                   {0.6, 0.1}, {0.6, 0.4}};
  int gated = 0;
  int stress = 0;
  double worst_residual = 0.0;
  double stress_residual = 0.0;
  double worst_drift = 0.0;
  double lowest_order = std::numeric_limits<double>::infinity();
  for (const Pick& pick : picks) {
    for (double alpha : bifurcation::solve_alphas(pick.lambda, pick.L)) {
      const std::string tag = " (L = " + num(pick.L) + ", lambda = " + num(pick.lambda) +
                              ", alpha = " + num(alpha) + ")";
      const double curvature = pick.lambda / ((1.0 - alpha) * (1.0 - alpha));
      const auto coarse = profile::reconstruct_profile(alpha, pick.lambda, 201);
      const auto fine = profile::reconstruct_profile(alpha, pick.lambda, 401);
      const double r_fine = profile::residual_check(fine);
      const double order = std::log2(profile::residual_check(coarse) / r_fine);
      lowest_order = std::min(lowest_order, order);
      if (curvature <= kGatedCurvature) {
        ++gated;
        worst_residual = std::max(worst_residual, r_fine);
        c.expect(r_fine <= 1e-4, "residual " + num(r_fine) + tag);
      } else {
        ++stress;
        stress_residual = std::max(stress_residual, r_fine);
      }
      c.expect(order >= 1.8 && order <= 2.2, "observed order " + num(order) + tag);
      c.expect(std::abs(fine.L - pick.L) <= 1e-8, "half-length " + num(fine.L, 12) + tag);

      const auto report = profile::verify_necessary_conditions(fine);
      worst_drift = std::max(worst_drift, report.energy_drift);
      c.expect(report.energy_drift <= 1e-6, "energy drift " + num(report.energy_drift) + tag);
      c.expect(report.positivity && report.concavity, "shape conditions" + tag);

      const std::size_t n = fine.xs.size();
      bool mirrored = true;
      for (std::size_t j = 0; j < n; ++j) {
        mirrored = mirrored && fine.us[j] == fine.us[n - 1 - j] && fine.xs[j] == -fine.xs[n - 1 - j];
      }
      c.expect(mirrored && report.evenness, "evenness" + tag);
      const double peak = *std::max_element(fine.us.begin(), fine.us.end());
      c.expect(peak <= timemap::max_deflection(pick.lambda) && report.sup_bound, "sup bound" + tag);
    }
  }
  c.expect(gated == 10, std::to_string(gated) + " gated profiles instead of 10");
  c.note(std::to_string(gated) + " profiles, max residual " + num(worst_residual, 2));
  c.note("min order " + num(lowest_order, 3));
  c.note("max drift " + num(worst_drift, 2));
  c.note(std::to_string(stress) + " high-curvature profile(s) at residual " + num(stress_residual, 2));
}

void criterion_monotonicity(Checks& c) {
  const std::vector<std::pair<double, double>> pairs = {
      {0.1, 0.2}, {0.5, 1.0}, {1.0, 2.0}, {2.0, 5.0}};
  int compared = 0;
  for (const auto& [l1, l2] : pairs) {
    const double end = timemap::max_deflection(l2);
    for (int k = 1; k <= 20; ++k) {
      const double alpha = end * k / 20.0;
      ++compared;
      c.expect(timemap::time_map(alpha, l1) > timemap::time_map(alpha, l2),
               "T(" + num(alpha) + "; " + num(l1) + ") <= T(" + num(alpha) + "; " + num(l2) + ")");
    }
  }
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double lambda = 0.05 * std::pow(200.0, i / 19.0);
    const auto peak = bifurcation::max_time_map(lambda);
    c.expect(peak.M < previous, "M not decreasing at lambda = " + num(lambda));
    // M is a maximum, so no sampled T may exceed it.
    const double end = timemap::max_deflection(lambda);
    for (int k = 1; k <= 50; ++k) {
      const double t = oracle_T(end * k / 50.0, lambda);
      c.expect(t <= peak.M + 1e-10, "T above M at lambda = " + num(lambda));
    }
    previous = peak.M;
  }
  c.note(std::to_string(compared) + " ordered T pairs");
  c.note("M decreasing on 20 lambdas");
}

struct Entry {
  const char* name;
  void (*body)(Checks&);
};

constexpr Entry kCriteria[kCriterionCount] = {
    {"L* reproduction", criterion_l_star},
    {"g(1) identity", criterion_g_one},
    {"endpoint slope constants", criterion_endpoint_slopes},
    {"reference integrals and envelopes", criterion_reference_integrals},
    {"regime counts", criterion_regime_counts},
    {"lambda_sup bounds", criterion_lambda_sup_bounds},
    {"closed form vs quadrature", criterion_closed_vs_quadrature},
    {"derivative consistency", criterion_derivatives},
    {"profile fidelity", criterion_profiles},
    {"monotonicity", criterion_monotonicity},
};

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("run_criterion: no such criterion");
  const Entry& entry = kCriteria[id - 1];
  CriterionResult result;
  result.id = id;
  result.name = entry.name;
  const auto t0 = Clock::now();
  Checks checks;
  try {
    entry.body(checks);
    result.passed = checks.passed();
    result.detail = checks.detail();
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return result;
}

std::vector<CriterionResult> run_all(std::ostream& out) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    results.push_back(run_criterion(id));
    out << format_line(results.back()) << '\n' << std::flush;
  }
  return results;
}

std::string format_line(const CriterionResult& result) {
  char head[64];
  std::snprintf(head, sizeof head, "%s [%2d] ", result.passed ? "PASS" : "FAIL", result.id);
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.3f s)", result.seconds);
  return head + result.name + ": " + result.detail + tail;
}

}  // namespace pmc::acceptance
