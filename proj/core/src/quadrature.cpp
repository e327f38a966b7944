#include "pmc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pmc/errors.hpp"

namespace pmc::quadrature {
namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Weights of the embedded 7-point Gauss rule, at kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kGoldenSection = 0.381966011250105151795413165634;  // (3 - sqrt 5) / 2

// How a piece of the t-axis maps back onto z.
enum class Map { Identity, Left, Right };

struct Piece {
  Map map;
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Piece& x, const Piece& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;  // deterministic tie-break
  }
};

class Evaluator {
 public:
  explicit Evaluator(const IntegralSpec& spec) : spec_(spec) {}

  double operator()(Map map, double t) {
    ++evaluations_;
    double value = 0.0;
    switch (map) {
      case Map::Identity:
        value = spec_.integrand(t, 1.0 - t);
        break;
      case Map::Left:  // z = t^2
        value = 2.0 * t * spec_.integrand(t * t, (1.0 - t) * (1.0 + t));
        break;
      case Map::Right:  // z = 1 - t^2
        value = 2.0 * t * spec_.integrand((1.0 - t) * (1.0 + t), t * t);
        break;
    }
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "integrate_singular: integrand is not finite at transformed node t = " << t;
      throw NonFinite(msg.str());
    }
    return value;
  }

  [[nodiscard]] std::size_t evaluations() const { return evaluations_; }

 private:
  const IntegralSpec& spec_;
  std::size_t evaluations_ = 0;
};

Piece kronrod15(Evaluator& eval, Map map, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = eval(map, center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = eval(map, center - dx) + eval(map, center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return Piece{map, a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadResult integrate_singular(const IntegralSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0)) {
    throw DomainError("integrate_singular: tolerances must be positive");
  }
  if (!spec.integrand) throw DomainError("integrate_singular: empty integrand");

  // Initial partition of the transformed axis. With both endpoints singular
  // the z-interval is split at 1/2 and each half gets its own substitution.
  struct Span {
    Map map;
    double a;
    double b;
  };
  std::vector<Span> spans;
  const double root_half = std::sqrt(0.5);
  if (spec.singular_left && spec.singular_right) {
    spans = {{Map::Left, 0.0, root_half}, {Map::Right, 0.0, root_half}};
  } else if (spec.singular_left) {
    spans = {{Map::Left, 0.0, 1.0}};
  } else if (spec.singular_right) {
    spans = {{Map::Right, 0.0, 1.0}};
  } else {
    spans = {{Map::Identity, 0.0, 1.0}};
  }

  constexpr int kInitialSplits = 4;
  Evaluator eval(spec);
  std::priority_queue<Piece, std::vector<Piece>, ByError> queue;
  for (const Span& s : spans) {
    const double w = (s.b - s.a) / kInitialSplits;
    for (int i = 0; i < kInitialSplits; ++i) {
      const double a = s.a + w * i;
      const double b = (i + 1 == kInitialSplits) ? s.b : s.a + w * (i + 1);
      queue.push(kronrod15(eval, s.map, a, b));
    }
  }

  auto totals = [&queue]() {
    // priority_queue exposes no iteration; copy is cheap relative to evaluation.
    auto copy = queue;
    double value = 0.0;
    double error = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    return std::pair{value, error};
  };

  double value = 0.0;
  double error = 0.0;
  std::tie(value, error) = totals();
  std::size_t since_resum = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (eval.evaluations() + 30 > spec.max_evaluations) {
      std::ostringstream msg;
      msg << "integrate_singular: evaluation budget exhausted (error estimate " << error
          << ", target " << std::max(spec.abs_tol, spec.rel_tol * std::abs(value)) << ")";
      throw NonConvergence(msg.str());
    }
    Piece worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NonConvergence("integrate_singular: interval cannot be subdivided further");
    }
    Piece left = kronrod15(eval, worst.map, worst.a, mid);
    Piece right = kronrod15(eval, worst.map, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Running sums drift; recompute them exactly every so often.
    if (++since_resum == 64) {
      std::tie(value, error) = totals();
      since_resum = 0;
    }
  }
  std::tie(value, error) = totals();
  return QuadResult{value, error, eval.evaluations()};
}

QuadResult integrate_singular(const std::function<double(double)>& f, bool singular_left,
                              bool singular_right, double abs_tol, double rel_tol) {
  IntegralSpec spec;
  spec.integrand = [&f](double z, double) { return f(z); };
  spec.singular_left = singular_left;
  spec.singular_right = singular_right;
  spec.abs_tol = abs_tol;
  spec.rel_tol = rel_tol;
  return integrate_singular(spec);
}

double find_root(const ScalarFunction& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw BadBracket("find_root: bracket is reversed or NaN");
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw NonFinite("find_root: function not finite at bracket ends");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb)) {
    throw BadBracket("find_root: f(lo) and f(hi) have the same sign");
  }

  // Interpolation weights; Illinois halves the weight of an end that
  // survives twice in a row so regula falsi cannot stall on one side.
  double wa = fa;
  double wb = fb;
  int kept = 0;  // -1: a survived last step, +1: b survived

  auto absorb = [&](double x, double fx) {
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = wa = fx;
      if (kept == 1) wb *= 0.5;
      kept = 1;
    } else {
      b = x;
      fb = wb = fx;
      if (kept == -1) wa *= 0.5;
      kept = -1;
    }
  };
  auto eval = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NonFinite("find_root: function not finite inside bracket");
    return v;
  };

  while (b - a > tol) {
    const double width = b - a;
    const double mid = a + 0.5 * width;
    if (!(mid > a && mid < b)) break;  // bracket is down to adjacent doubles

    double x = b - wb * (b - a) / (wb - wa);
    if (!(x > a && x < b)) x = mid;
    const double fx = eval(x);
    if (fx == 0.0) return x;
    absorb(x, fx);

    if (b - a > 0.5 * width) {
      const double m = a + 0.5 * (b - a);
      if (!(m > a && m < b)) break;
      const double fm = eval(m);
      if (fm == 0.0) return m;
      absorb(m, fm);
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

Extremum maximize_unimodal(const ScalarFunction& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw DomainError("maximize_unimodal: empty bracket");
  auto eval = [&f](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "maximize_unimodal: function not finite at x = " << x;
      throw NonFinite(msg.str());
    }
    return v;
  };

  const double f_lo = eval(lo);
  const double f_hi = eval(hi);

  double a = lo;
  double b = hi;
  double x1 = a + kGoldenSection * (b - a);
  double x2 = b - kGoldenSection * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = b - kGoldenSection * (b - a);
      if (!(x2 > x1 && x2 < b)) break;
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + kGoldenSection * (b - a);
      if (!(x1 > a && x1 < x2)) break;
      f1 = eval(x1);
    }
  }

  Extremum best = f1 >= f2 ? Extremum{x1, f1} : Extremum{x2, f2};
  if (f_lo > best.max) best = {lo, f_lo};
  if (f_hi > best.max) best = {hi, f_hi};
  return best;
}

}  // namespace pmc::quadrature
