#include "pmc/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "pmc/endpoint.hpp"
#include "pmc/errors.hpp"
#include "pmc/timemap.hpp"

namespace pmc::bifurcation {
namespace {

constexpr int kMaxBracketSteps = 200;

void require_length(double L) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    std::ostringstream msg;
    msg << "L = " << L << " must be positive and finite";
    throw DomainError(msg.str());
  }
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " must be positive and finite";
    throw DomainError(msg.str());
  }
}

// Root-finding width on the lambda axis.
double lambda_width(double tol, double scale) { return 1e-2 * tol * std::max(1.0, scale); }

}  // namespace

std::string_view to_string(Regime regime) {
  return regime == Regime::Split ? "Split" : "Continuous";
}

TimeMapMax max_time_map(double lambda, double tol) {
  require_lambda(lambda);
  const double end = timemap::max_deflection(lambda);
  auto slope = [lambda, tol](double alpha) { return timemap::time_map_deriv(alpha, lambda, tol); };

  const double hi = end * (1.0 - 1e-10);
  if (!(slope(hi) < 0.0)) {
    throw NonConvergence("max_time_map: T' is not negative next to the right endpoint");
  }
  double lo = 0.25 * end;
  int steps = 0;
  while (!(slope(lo) > 0.0)) {
    lo *= 0.5;
    if (++steps > kMaxBracketSteps) {
      throw NonConvergence("max_time_map: no alpha with T' > 0 found");
    }
  }
  const double alpha_star = quadrature::find_root(slope, lo, hi, 1e-14 * end);
  return {alpha_star, timemap::time_map(alpha_star, lambda, tol)};
}

double max_time_map_upper_bound(double lambda) {
  const double r = std::sqrt(1.0 + lambda);
  return 2.0 * r / lambda * std::log((1.0 + r) / std::sqrt(lambda));
}

double lambda_sup_ceiling(double L) {
  return std::min(1.0 / L, std::numbers::pi * std::numbers::pi / (27.0 * L * L));
}

double lambda_sup(double L, double tol) {
  require_length(L);
  auto excess = [L, tol](double lambda) { return max_time_map(lambda, tol).M - L; };

  // M is strictly decreasing, tends to +inf at 0 and to 0 at +inf.
  double lo = 1.0;
  double hi = 1.0;
  int steps = 0;
  if (excess(1.0) > 0.0) {
    do {
      lo = hi;
      hi *= 2.0;
      if (++steps > kMaxBracketSteps) throw NonConvergence("lambda_sup: no upper bracket");
    } while (excess(hi) > 0.0);
  } else {
    do {
      hi = lo;
      lo *= 0.5;
      if (++steps > kMaxBracketSteps) throw NonConvergence("lambda_sup: no lower bracket");
    } while (!(excess(lo) > 0.0));
  }
  return quadrature::find_root(excess, lo, hi, lambda_width(tol, hi));
}

FoldPair lambda_fold_pair(double L, double tol) {
  require_length(L);
  const endpoint::LStar peak = endpoint::compute_L_star();
  if (!(L < peak.L_star)) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "lambda_fold_pair: L = " << L << " is not below L* = " << peak.L_star;
    throw RegimeError(msg.str());
  }
  auto excess = [L](double lambda) { return endpoint::g_closed(lambda) - L; };

  double lo = 0.5 * peak.c;
  int steps = 0;
  while (!(excess(lo) < 0.0)) {
    lo *= 0.5;
    if (++steps > kMaxBracketSteps) throw NonConvergence("lambda_fold_pair: no lower bracket");
  }
  double hi = 2.0 * peak.c;
  steps = 0;
  while (!(excess(hi) < 0.0)) {
    hi *= 2.0;
    if (++steps > kMaxBracketSteps) throw NonConvergence("lambda_fold_pair: no upper bracket");
  }
  return {quadrature::find_root(excess, lo, peak.c, lambda_width(tol, peak.c)),
          quadrature::find_root(excess, peak.c, hi, lambda_width(tol, hi))};
}

CriticalSet critical_set(double L, double tol) {
  require_length(L);
  const endpoint::LStar peak = endpoint::compute_L_star();
  CriticalSet out;
  out.L = L;
  out.c = peak.c;
  out.L_star = peak.L_star;
  out.regime = L < peak.L_star ? Regime::Split : Regime::Continuous;
  if (out.regime == Regime::Split) {
    const FoldPair pair = lambda_fold_pair(L, tol);
    out.lambda_low = pair.lambda_low;
    out.lambda_mid = pair.lambda_mid;
  }
  out.lambda_sup = lambda_sup(L, tol);
  return out;
}

int count_solutions(double lambda, const CriticalSet& critical) {
  require_lambda(lambda);
  if (std::abs(lambda - critical.lambda_sup) < kTangencyTolerance) return 1;
  if (lambda > critical.lambda_sup) return 0;
  if (critical.regime == Regime::Split) {
    // The folds themselves belong to the two-solution intervals.
    const double low = *critical.lambda_low + kTangencyTolerance;
    const double mid = *critical.lambda_mid - kTangencyTolerance;
    if (lambda > low && lambda < mid) return 1;
  }
  return 2;
}

int count_solutions(double lambda, double L) {
  require_lambda(lambda);
  return count_solutions(lambda, critical_set(L));
}

std::vector<double> solve_alphas(double lambda, const CriticalSet& critical, double tol) {
  const int count = count_solutions(lambda, critical);
  if (count == 0) return {};

  const double L = critical.L;
  const TimeMapMax peak = max_time_map(lambda, tol);
  if (std::abs(lambda - critical.lambda_sup) < kTangencyTolerance) return {peak.alpha_star};

  const double end = timemap::max_deflection(lambda);
  auto excess = [lambda, L, tol](double alpha) {
    return timemap::time_map(alpha, lambda, tol) - L;
  };
  if (!(peak.M > L)) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "solve_alphas: M(" << lambda << ") = " << peak.M << " does not exceed L = " << L;
    throw NonConvergence(msg.str());
  }

  const double width = 1e-14 * end;
  std::vector<double> roots;

  double lo = 0.5 * peak.alpha_star;
  int steps = 0;
  while (!(excess(lo) < 0.0)) {
    lo *= 0.5;
    if (++steps > kMaxBracketSteps) throw NonConvergence("solve_alphas: no lower bracket");
  }
  roots.push_back(quadrature::find_root(excess, lo, peak.alpha_star, width));

  if (count == 2) {
    // At lambda_low / lambda_mid the upper root sits exactly on the endpoint;
    // quadrature noise may leave T(end) a hair above L there.
    const double at_end = excess(end);
    if (at_end >= 0.0) {
      roots.push_back(end);
    } else {
      roots.push_back(quadrature::find_root(excess, peak.alpha_star, end, width));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> solve_alphas(double lambda, double L, double tol) {
  require_lambda(lambda);
  return solve_alphas(lambda, critical_set(L, tol), tol);
}

BifurcationDiagram sweep_diagram(double L, double lambda_min, double lambda_max, std::size_t n,
                                 SweepOptions options) {
  require_length(L);
  if (!(lambda_min > 0.0) || !(lambda_min < lambda_max) || !std::isfinite(lambda_max)) {
    throw DomainError("sweep_diagram: need 0 < lambda_min < lambda_max");
  }
  if (n < 2) throw DomainError("sweep_diagram: need at least two rows");

  BifurcationDiagram diagram;
  diagram.L = L;
  diagram.critical = critical_set(L, options.tol);
  diagram.rows.resize(n);

  const double log_min = std::log(lambda_min);
  const double log_step = (std::log(lambda_max) - log_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    diagram.rows[i].lambda = std::exp(log_min + log_step * static_cast<double>(i));
  }
  diagram.rows.front().lambda = lambda_min;
  diagram.rows.back().lambda = lambda_max;

  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(n));

  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](unsigned worker) {
    try {
      for (std::size_t i = worker; i < n; i += threads) {
        DiagramRow& row = diagram.rows[i];
        row.alphas = solve_alphas(row.lambda, diagram.critical, options.tol);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return diagram;
}

}  // namespace pmc::bifurcation
