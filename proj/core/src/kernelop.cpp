#include "interp_lab/kernelop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "interp_lab/lorentz.hpp"

namespace interp_lab {

namespace {

void require_two_axes(const KernelMatrix& f) {
  if (f.rank() != 2) throw std::invalid_argument("kernel operators need a two-axis kernel");
}

std::vector<double> indicator(std::uint64_t mask, std::size_t n) {
  std::vector<double> g(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if ((mask >> j) & 1U) g[j] = 1.0;
  }
  return g;
}

bool close(double a, double b, double tolerance) {
  return std::abs(a - b) <= tolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

template <class TargetNorm>
double indicator_sweep(const KernelMatrix& f, Exponent r, std::size_t limit, TargetNorm&& target) {
  require_two_axes(f);
  if (!(r.value() > 1.0)) throw std::domain_error("source exponent r must lie in (1, inf]");
  const auto& mu2 = f.product().factor(1);
  const std::size_t n2 = mu2.size();
  require_enumerable(n2, limit);
  double best = 0.0;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n2); ++m) {
    const auto image = apply_kernel(f, indicator(m, n2));
    best = std::max(best, target(image) / std::pow(mu2.measure_bits(m), r.inverse()));
  }
  return best;
}

}  // namespace

std::vector<double> apply_kernel(const KernelMatrix& f, std::span<const double> g) {
  require_two_axes(f);
  const auto& mu2 = f.product().factor(1);
  if (g.size() != mu2.size()) throw std::invalid_argument("input function does not live on the second axis");
  std::vector<double> out(f.extent(0), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) total += std::abs(f(i, j)) * g[j] * mu2.weight(j);
    out[i] = total;
  }
  return out;
}

double kernel_opnorm(const KernelMatrix& f, Exponent r, Exponent s, std::size_t limit) {
  const auto& mu1 = f.product().factor(0);
  return indicator_sweep(f, r, limit, [&](const std::vector<double>& image) {
    return bracket_norm(mu1, image, s, limit);
  });
}

double kernel_opnorm_quasi(const KernelMatrix& f, Exponent r, Exponent s, std::size_t limit) {
  const auto& mu1 = f.product().factor(0);
  return indicator_sweep(f, r, limit, [&](const std::vector<double>& image) { return weak_quasinorm(mu1, image, s); });
}

double regular_norm(const KernelMatrix& f, Exponent r, Exponent s, std::size_t limit) {
  return kernel_opnorm(f.abs(), r, s, limit);
}

OperatorExponents interpolated_operator_exponents(double theta, Exponent p1, Exponent p2) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  const double inv_r = theta * p2.inverse_conjugate();
  const double inv_s_conj = (1.0 - theta) * p1.inverse_conjugate();
  return {Exponent::from_inverse(inv_r), Exponent::from_inverse(1.0 - inv_s_conj)};
}

EndpointIdentityReport rem19_identity_check(const KernelMatrix& f, Exponent p1, Exponent p2, double tolerance,
                                            std::size_t limit) {
  require_two_axes(f);
  const auto& mu1 = f.product().factor(0);
  const auto& mu2 = f.product().factor(1);
  const std::size_t n2 = mu2.size();
  require_enumerable(n2, limit);

  EndpointIdentityReport report;

  // (a): the L_inf unit ball is the hull of sign vectors.
  for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << n2); ++signs) {
    std::vector<double> g(n2);
    for (std::size_t j = 0; j < n2; ++j) g[j] = ((signs >> j) & 1U) ? -1.0 : 1.0;
    const auto image = apply_kernel(f, g);
    report.a_operator = std::max(report.a_operator, bracket_norm(mu1, image, p1, limit));
  }
  report.a_mixed = mixed_weak_norm(f, 0, p1, 1.0, limit);

  // (b): the L_{r,1} unit ball is the hull of normalized indicators.
  const Exponent source = p2.conjugate();
  const Exponent literal_source = p1.conjugate();
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n2); ++m) {
    const auto g = indicator(m, n2);
    const auto image = apply_kernel(f, g);
    double l1 = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) l1 += std::abs(image[i]) * mu1.weight(i);
    report.b_operator = std::max(report.b_operator, l1 / lorentz_p1_norm(mu2, g, source));
    report.literal_b_operator = std::max(report.literal_b_operator, l1 / lorentz_p1_norm(mu2, g, literal_source));
  }
  report.b_mixed = mixed_weak_norm(f, 1, p2, 1.0, limit);

  report.a_holds = close(report.a_operator, report.a_mixed, tolerance);
  report.b_holds = close(report.b_operator, report.b_mixed, tolerance);
  report.literal_b_holds = close(report.literal_b_operator, report.b_mixed, tolerance);
  return report;
}

}  // namespace interp_lab
