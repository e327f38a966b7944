#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "pmc/bifurcation.hpp"
#include "pmc/endpoint.hpp"
#include "pmc/errors.hpp"
#include "pmc/timemap.hpp"

namespace pmc::bifurcation {
namespace {

// mpmath, 30 digits.
constexpr double kAlphaStar1 = 0.267432811459596633624793871364;
constexpr double kM1 = 0.502895241573044015727906439821;

constexpr double kLStar = 0.349967641964;

TEST(MaxTimeMap, FrozenAtLambdaOne) {
  const TimeMapMax peak = max_time_map(1.0);
  EXPECT_NEAR(peak.alpha_star, kAlphaStar1, 1e-9);
  EXPECT_NEAR(peak.M, kM1, 1e-11);
}

TEST(MaxTimeMap, StationaryPointOfTimeMap) {
  for (double lambda : {0.05, 0.5, 3.0, 30.0}) {
    const TimeMapMax peak = max_time_map(lambda);
    EXPECT_NEAR(timemap::time_map_deriv(peak.alpha_star, lambda), 0.0, 1e-8);
    const double end = timemap::max_deflection(lambda);
    for (double frac : {0.1, 0.5, 0.9, 1.0}) {
      EXPECT_LE(timemap::time_map(frac * end, lambda), peak.M + 1e-12);
    }
  }
}

TEST(MaxTimeMap, AboveEndpointValueBelowCeiling) {
  for (int k = 0; k <= 30; ++k) {
    const double lambda = std::pow(10.0, -2.0 + 4.0 * k / 30.0);
    const double M = max_time_map(lambda).M;
    EXPECT_GT(M, endpoint::g_closed(lambda)) << lambda;
    EXPECT_LT(M, max_time_map_upper_bound(lambda)) << lambda;
  }
}

TEST(MaxTimeMap, StrictlyDecreasing) {
  double prev = max_time_map(0.01).M;
  for (int k = 1; k <= 30; ++k) {
    const double M = max_time_map(0.01 * std::pow(1000.0, k / 30.0)).M;
    EXPECT_LT(M, prev);
    prev = M;
  }
}

TEST(MaxTimeMap, RejectsNonPositiveLambda) {
  EXPECT_THROW((void)max_time_map(0.0), DomainError);
  EXPECT_THROW((void)max_time_map(-2.0), DomainError);
}

TEST(CriticalValues, SplitRegimeFrozen) {
  const CriticalSet set = critical_set(0.3);
  EXPECT_EQ(set.regime, Regime::Split);
  ASSERT_TRUE(set.lambda_low && set.lambda_mid);
  EXPECT_NEAR(*set.lambda_low, 0.245784346689, 1e-10);
  EXPECT_NEAR(*set.lambda_mid, 1.46221810421, 1e-9);
  EXPECT_NEAR(set.lambda_sup, 2.15378843556, 1e-9);
  EXPECT_NEAR(set.L_star, kLStar, 1e-11);
}

TEST(CriticalValues, ContinuousRegimeFrozen) {
  const CriticalSet set = critical_set(0.6);
  EXPECT_EQ(set.regime, Regime::Continuous);
  EXPECT_FALSE(set.lambda_low.has_value());
  EXPECT_FALSE(set.lambda_mid.has_value());
  EXPECT_NEAR(set.lambda_sup, 0.752758893456, 1e-9);
}

TEST(CriticalValues, FoldsAreRootsOfEndpointCurve) {
  for (double L : {0.05, 0.2, 0.3, 0.34}) {
    const FoldPair pair = lambda_fold_pair(L);
    EXPECT_NEAR(endpoint::g_closed(pair.lambda_low), L, 1e-12);
    EXPECT_NEAR(endpoint::g_closed(pair.lambda_mid), L, 1e-12);
    EXPECT_NEAR(oracle::endpoint_g(pair.lambda_low), L, 1e-11);
    EXPECT_LT(pair.lambda_low, pair.lambda_mid);
  }
}

TEST(CriticalValues, FoldAtOneThirdIsExactlyOne) {
  const FoldPair pair = lambda_fold_pair(1.0 / 3.0);
  EXPECT_NEAR(pair.lambda_mid, 1.0, 1e-10);
  EXPECT_NEAR(pair.lambda_low, 0.370395881686, 1e-10);
}

TEST(CriticalValues, LambdaSupSolvesPeakEquation) {
  for (double L : {0.1, 0.3, 0.6, 2.0}) {
    const double ls = lambda_sup(L);
    EXPECT_NEAR(max_time_map(ls).M, L, 1e-10);
    EXPECT_LT(ls, lambda_sup_ceiling(L));
  }
}

TEST(CriticalValues, PeakBracketsLAroundLambdaSup) {
  const double ls = lambda_sup(0.3);
  EXPECT_GT(max_time_map(ls - 1e-4).M, 0.3);
  EXPECT_LT(max_time_map(ls + 1e-4).M, 0.3);
}

TEST(CriticalValues, RegimeBoundary) {
  const double L_star = endpoint::compute_L_star().L_star;
  const double c = endpoint::compute_L_star().c;
  const FoldPair just_below = lambda_fold_pair(L_star - 1e-9);
  EXPECT_LT(just_below.lambda_low, c);
  EXPECT_GT(just_below.lambda_mid, c);
  EXPECT_LT(just_below.lambda_mid - just_below.lambda_low, 1e-2);

  EXPECT_THROW((void)lambda_fold_pair(L_star), RegimeError);
  EXPECT_THROW((void)lambda_fold_pair(0.5), RegimeError);
  EXPECT_EQ(critical_set(L_star).regime, Regime::Continuous);
  EXPECT_EQ(critical_set(L_star - 1e-9).regime, Regime::Split);
}

TEST(CriticalValues, RejectsNonPositiveLength) {
  EXPECT_THROW((void)critical_set(0.0), DomainError);
  EXPECT_THROW((void)lambda_sup(-1.0), DomainError);
  EXPECT_THROW((void)critical_set(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(CountSolutions, SplitRegimeIntervals) {
  const CriticalSet set = critical_set(0.3);
  EXPECT_EQ(count_solutions(0.1, set), 2);
  EXPECT_EQ(count_solutions(*set.lambda_low, set), 2);
  EXPECT_EQ(count_solutions(0.5, set), 1);
  EXPECT_EQ(count_solutions(1.0, set), 1);
  EXPECT_EQ(count_solutions(*set.lambda_mid, set), 2);
  EXPECT_EQ(count_solutions(2.0, set), 2);
  EXPECT_EQ(count_solutions(set.lambda_sup, set), 1);
  EXPECT_EQ(count_solutions(2.2, set), 0);
  EXPECT_EQ(count_solutions(2.0 * lambda_sup_ceiling(0.3), set), 0);
}

TEST(CountSolutions, ContinuousRegimeIntervals) {
  const CriticalSet set = critical_set(0.6);
  EXPECT_EQ(count_solutions(0.01, set), 2);
  EXPECT_EQ(count_solutions(0.7, set), 2);
  EXPECT_EQ(count_solutions(set.lambda_sup, set), 1);
  EXPECT_EQ(count_solutions(0.8, set), 0);
}

TEST(CountSolutions, AgreesWithBruteForceScan) {
  // The lower root sits near alpha = L^2 lambda / 2; with lambda >= 0.05 and
  // L >= 0.1 it lies at least two steps into the 10^4-point alpha grid.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_lambda(std::log(0.05), std::log(5.0));
  std::uniform_real_distribution<double> length(0.1, 0.8);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double lambda = std::exp(log_lambda(rng));
    const double L = length(rng);
    const CriticalSet set = critical_set(L);
    // Skip draws so close to a critical value that the grid cannot resolve the tangency.
    bool near_critical = std::abs(lambda - set.lambda_sup) < 1e-3 * set.lambda_sup;
    if (set.lambda_low) near_critical |= std::abs(lambda - *set.lambda_low) < 1e-3;
    if (set.lambda_mid) near_critical |= std::abs(lambda - *set.lambda_mid) < 1e-3;
    if (near_critical) continue;
    EXPECT_EQ(count_solutions(lambda, set), oracle::sign_change_count(lambda, L))
        << "lambda = " << lambda << " L = " << L;
    ++checked;
  }
  EXPECT_GE(checked, 95);
}

TEST(SolveAlphas, RootsSolveTimeMapEquation) {
  for (auto [lambda, L] : {std::pair{0.1, 0.3}, std::pair{1.0, 0.3}, std::pair{2.0, 0.3},
                           std::pair{0.5, 0.6}}) {
    const std::vector<double> alphas = solve_alphas(lambda, L);
    EXPECT_EQ(static_cast<int>(alphas.size()), count_solutions(lambda, L));
    for (double a : alphas) {
      EXPECT_NEAR(timemap::time_map(a, lambda), L, 1e-9);
      EXPECT_NEAR(oracle::time_map(a, lambda), L, 1e-9);
      EXPECT_LE(a, timemap::max_deflection(lambda));
    }
    EXPECT_TRUE(std::is_sorted(alphas.begin(), alphas.end()));
  }
}

TEST(SolveAlphas, UpperRootOnEndpointAtFold) {
  const std::vector<double> alphas = solve_alphas(1.0, 1.0 / 3.0);
  ASSERT_EQ(alphas.size(), 2u);
  EXPECT_NEAR(alphas[0], 0.0643323364627, 1e-10);
  EXPECT_NEAR(alphas[1], 0.5, 1e-10);
}

TEST(SolveAlphas, SingleRootAtTangency) {
  const CriticalSet set = critical_set(0.3);
  const std::vector<double> alphas = solve_alphas(set.lambda_sup, set);
  ASSERT_EQ(alphas.size(), 1u);
  EXPECT_NEAR(alphas[0], max_time_map(set.lambda_sup).alpha_star, 1e-12);
}

TEST(SolveAlphas, EmptyBeyondSaddleNode) {
  EXPECT_TRUE(solve_alphas(3.0, 0.3).empty());
}

TEST(SweepDiagram, TwoRowsHitEnds) {
  const BifurcationDiagram d = sweep_diagram(0.3, 0.1, 2.0, 2);
  ASSERT_EQ(d.rows.size(), 2u);
  EXPECT_EQ(d.rows.front().lambda, 0.1);
  EXPECT_EQ(d.rows.back().lambda, 2.0);
  EXPECT_EQ(d.rows.front().alphas.size(), 2u);
}

TEST(SweepDiagram, RegimesDifferInShape) {
  auto counts = [](const BifurcationDiagram& d) {
    std::vector<std::size_t> runs;
    for (const DiagramRow& row : d.rows) {
      if (runs.empty() || runs.back() != row.alphas.size()) runs.push_back(row.alphas.size());
    }
    return runs;
  };
  EXPECT_EQ(counts(sweep_diagram(0.3, 0.05, 5.0, 40)), (std::vector<std::size_t>{2, 1, 2, 0}));
  EXPECT_EQ(counts(sweep_diagram(0.6, 0.05, 5.0, 40)), (std::vector<std::size_t>{2, 0}));
}

TEST(SweepDiagram, LogSpacedAndOrdered) {
  const BifurcationDiagram d = sweep_diagram(0.6, 0.01, 1.0, 5);
  const double expected[] = {0.01, std::sqrt(0.1) * 0.1, 0.1, std::sqrt(0.1), 1.0};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(d.rows[i].lambda, expected[i], 1e-15);
}

TEST(SweepDiagram, IdenticalAcrossThreadCounts) {
  const BifurcationDiagram one = sweep_diagram(0.3, 0.05, 3.0, 17, {.threads = 1});
  const BifurcationDiagram four = sweep_diagram(0.3, 0.05, 3.0, 17, {.threads = 4});
  ASSERT_EQ(one.rows.size(), four.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].lambda, four.rows[i].lambda);
    EXPECT_EQ(one.rows[i].alphas, four.rows[i].alphas);
  }
}

TEST(SweepDiagram, RejectsBadArguments) {
  EXPECT_THROW((void)sweep_diagram(0.3, 1.0, 0.5, 10), DomainError);
  EXPECT_THROW((void)sweep_diagram(0.3, 0.0, 1.0, 10), DomainError);
  EXPECT_THROW((void)sweep_diagram(0.3, 0.1, 1.0, 1), DomainError);
  EXPECT_THROW((void)sweep_diagram(-0.3, 0.1, 1.0, 10), DomainError);
}

TEST(Regime, Names) {
  EXPECT_EQ(to_string(Regime::Split), "Split");
  EXPECT_EQ(to_string(Regime::Continuous), "Continuous");
}

}  // namespace
}  // namespace pmc::bifurcation
