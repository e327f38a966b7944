#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pmc::oracle {

TanhSinh::TanhSinh(int level) {
  const double h = std::ldexp(1.0, -level);
  const int half = static_cast<int>(std::lround(4.0 / h));
  for (int k = -half; k <= half; ++k) {
    const double t = k * h;
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double z = 1.0 / (1.0 + std::exp(-2.0 * u));
    const double w = 1.0 / (1.0 + std::exp(2.0 * u));
    const double weight = h * std::numbers::pi * std::cosh(t) * z * w;
    if (z <= 0.0 || w <= 0.0 || weight == 0.0) continue;
    z_.push_back(z);
    w_.push_back(w);
    weight_.push_back(weight);
  }
}

double TanhSinh::integrate(const std::function<double(double, double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) sum += weight_[i] * f(z_[i], w_[i]);
  return sum;
}

const TanhSinh& fine_rule() {
  static const TanhSinh rule(7);
  return rule;
}

const TanhSinh& scan_rule() {
  static const TanhSinh rule(5);
  return rule;
}

double midpoint(const std::function<double(double)>& f, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f((static_cast<double>(i) + 0.5) * h);
  return sum * h;
}

double time_map(double alpha, double lambda, const TanhSinh& rule) {
  return rule.integrate([alpha, lambda](double z, double w) {
    const double n = (1.0 - alpha * z) * (1.0 - alpha) - lambda * alpha * w;
    const double d = 2.0 * (1.0 - alpha * z) * (1.0 - alpha) - lambda * alpha * w;
    return std::sqrt(alpha / lambda) * n / (std::sqrt(w) * std::sqrt(d));
  });
}

double time_map_by_angle(double alpha, double lambda) {
  const double energy = 1.0 - lambda / (1.0 - alpha);
  const double theta_end = std::acos(std::clamp(1.0 - lambda * alpha / (1.0 - alpha), -1.0, 1.0));
  return fine_rule().integrate([=](double z, double) {
    const double c = std::cos(theta_end * z);
    return theta_end * lambda * c / ((c - energy) * (c - energy));
  });
}

double endpoint_g(double lambda, const TanhSinh& rule) {
  const double scale = lambda / std::pow(1.0 + lambda, 1.5);
  return rule.integrate([lambda, scale](double z, double w) {
    return scale * z / (std::sqrt(w) * std::sqrt(w + lambda * (1.0 + z)));
  });
}

int sign_change_count(double lambda, double L, int points, double* grid_max) {
  const double end = 1.0 / (1.0 + lambda);
  int changes = 0;
  bool previous_positive = false;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= points; ++i) {
    const double value = time_map(end * i / points, lambda, scan_rule());
    best = std::max(best, value);
    const bool positive = value - L > 0.0;
    if (i > 1 && positive != previous_positive) ++changes;
    previous_positive = positive;
  }
  if (grid_max) *grid_max = best;
  return changes;
}

}  // namespace pmc::oracle
