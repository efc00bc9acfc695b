#include "interp_lab/interp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace interp_lab {

void ThetaConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  if (min_exponent > max_exponent) throw std::invalid_argument("empty t-grid");
}

std::vector<double> ThetaConfig::grid() const {
  validate();
  std::vector<double> out;
  for (int k = min_exponent; k <= max_exponent; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

double geometric_identity_inf(double a0, double a1, double theta) {
  if (!(a0 > 0.0) || !(a1 > 0.0) || !std::isfinite(a0) || !std::isfinite(a1)) {
    throw std::invalid_argument("geometric identity needs positive finite a0, a1");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  const double t = a1 / a0;
  return (1.0 - theta) * a0 * std::pow(t, theta) + theta * a1 * std::pow(t, theta - 1.0);
}

RectangleSup closed_form_norm(const KernelMatrix& f, double q, double theta, Exponent p1, Exponent p2,
                              const RectOptions& options) {
  if (f.rank() != 2) throw std::invalid_argument("closed form norm needs a two-axis kernel");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  const ExponentConfig config(q, {p1, p2});
  const double powers[2] = {(1.0 - theta) * config.alpha(0), theta * config.alpha(1)};
  return product_rect_sup(f, q, powers, options);
}

double k_envelope(const KernelMatrix& f, double q, double theta, Exponent p1, Exponent p2, std::size_t limit) {
  if (f.rank() != 2) throw std::invalid_argument("envelope needs a two-axis kernel");
  const ExponentConfig config(q, {p1, p2});
  const auto& mu1 = f.product().factor(0);
  const auto& mu2 = f.product().factor(1);
  require_enumerable(mu1.size(), limit);
  require_enumerable(mu2.size(), limit);
  const std::size_t n1 = mu1.size();
  const std::size_t n2 = mu2.size();
  const auto m1 = subset_measure_table(mu1);
  const auto m2 = subset_measure_table(mu2);

  double best = 0.0;
  std::vector<double> row(n1);
  for (std::uint64_t e2 = 1; e2 < (std::uint64_t{1} << n2); ++e2) {
    for (std::size_t i = 0; i < n1; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < n2; ++j) {
        if ((e2 >> j) & 1U) total += std::pow(std::abs(f(i, j)), q) * mu1.weight(i) * mu2.weight(j);
      }
      row[i] = total;
    }
    const double b = std::pow(m2[e2], config.alpha(1));
    for (std::uint64_t e1 = 1; e1 < (std::uint64_t{1} << n1); ++e1) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n1; ++i) {
        if ((e1 >> i) & 1U) mass += row[i];
      }
      if (mass == 0.0) continue;
      const double a = std::pow(m1[e1], config.alpha(0));
      // t^{-theta} N / (a + b/t) = N / (a t^theta + b t^{theta-1}), minimized over t.
      const double denominator = geometric_identity_inf(a / (1.0 - theta), b / theta, theta);
      best = std::max(best, std::pow(mass, 1.0 / q) / denominator);
    }
  }
  return best;
}

ThetaNormGrid theta_norm_via_grid(const KernelMatrix& f, const ThetaConfig& config, Exponent p1, Exponent p2,
                                  const CuttingPlaneOptions& options) {
  config.validate();
  ThetaNormGrid out;
  for (double t : config.grid()) {
    const double k = k_exact(f, t, p1, p2, options).total;
    const double weighted = std::pow(t, -config.theta) * k;
    out.points.push_back({t, k, weighted});
    if (weighted > out.value || out.points.size() == 1) {
      out.value = weighted;
      out.argmax_t = t;
    }
  }
  return out;
}

}  // namespace interp_lab
