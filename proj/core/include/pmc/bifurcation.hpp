#pragma once

/**
 * @file bifurcation.hpp
 * @brief Solution counting and bifurcation diagrams.
 *
 * For fixed lambda the time map T(.; lambda) is strictly concave with a single
 * interior maximum M(lambda) at alpha*(lambda). Solutions of the boundary value
 * problem on (-L, L) correspond one-to-one with roots of T(alpha; lambda) = L,
 * so the number of solutions is fixed by comparing L against M(lambda) and
 * against the endpoint value g(lambda):
 *
 *  - L < L* (Split regime):  2 solutions on (0, lambda_low] and [lambda_mid, lambda_sup),
 *                            1 on (lambda_low, lambda_mid) and at lambda_sup, 0 beyond.
 *  - L >= L* (Continuous):   2 solutions on (0, lambda_sup), 1 at lambda_sup, 0 beyond.
 *
 * lambda_low < lambda_mid are the roots of g = L, and lambda_sup is the
 * saddle-node value where M(lambda_sup) = L.
 */

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pmc/quadrature.hpp"

namespace pmc::bifurcation {

/// |lambda - v| below this counts as sitting on the critical value v itself
/// (the saddle-node lambda_sup or one of the folds).
inline constexpr double kTangencyTolerance = 1e-9;

enum class Regime { Split, Continuous };

[[nodiscard]] std::string_view to_string(Regime regime);

struct TimeMapMax {
  double alpha_star = 0.0;
  double M = 0.0;
};

/// M(lambda) and its maximizer. alpha* is located as the root of T', which is
/// strictly decreasing; tol is the quadrature tolerance.
[[nodiscard]] TimeMapMax max_time_map(double lambda, double tol = quadrature::kDefaultTolerance);

/// Analytic ceiling 2 sqrt(1+lambda)/lambda * log((1 + sqrt(1+lambda)) / sqrt(lambda)) on M.
[[nodiscard]] double max_time_map_upper_bound(double lambda);

/// The unique lambda with M(lambda) = L.
[[nodiscard]] double lambda_sup(double L, double tol = quadrature::kDefaultTolerance);

/// min(1/L, pi^2 / (27 L^2)), a strict upper bound on lambda_sup(L).
[[nodiscard]] double lambda_sup_ceiling(double L);

struct FoldPair {
  double lambda_low = 0.0;
  double lambda_mid = 0.0;
};

/// The two roots of g(lambda) = L. Throws RegimeError when L >= L*.
[[nodiscard]] FoldPair lambda_fold_pair(double L, double tol = quadrature::kDefaultTolerance);

struct CriticalSet {
  double L = 0.0;
  std::optional<double> lambda_low;
  std::optional<double> lambda_mid;
  double lambda_sup = 0.0;
  Regime regime = Regime::Continuous;
  double c = 0.0;       // argmax of g
  double L_star = 0.0;  // max of g
};

[[nodiscard]] CriticalSet critical_set(double L, double tol = quadrature::kDefaultTolerance);

/// Number of positive solutions for (lambda, L), read off the critical set.
[[nodiscard]] int count_solutions(double lambda, const CriticalSet& critical);
[[nodiscard]] int count_solutions(double lambda, double L);

/// Sorted deflections alpha with T(alpha; lambda) = L. The lower root is
/// bracketed on (0, alpha*] and the upper one on [alpha*, 1/(1+lambda)].
[[nodiscard]] std::vector<double> solve_alphas(double lambda, const CriticalSet& critical,
                                               double tol = quadrature::kDefaultTolerance);
[[nodiscard]] std::vector<double> solve_alphas(double lambda, double L,
                                               double tol = quadrature::kDefaultTolerance);

struct DiagramRow {
  double lambda = 0.0;
  std::vector<double> alphas;
};

struct BifurcationDiagram {
  double L = 0.0;
  CriticalSet critical;
  std::vector<DiagramRow> rows;
};

struct SweepOptions {
  double tol = quadrature::kDefaultTolerance;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Solves n log-spaced lambda values between lambda_min and lambda_max.
/// Rows are independent and may be computed on several threads; the result
/// is ordered by lambda either way.
[[nodiscard]] BifurcationDiagram sweep_diagram(double L, double lambda_min, double lambda_max,
                                               std::size_t n, SweepOptions options = {});

}  // namespace pmc::bifurcation
