#pragma once

// Rectangle-supremum functionals over product sets E_1 x ... x E_n.

#include <cstddef>
#include <span>
#include <vector>

#include "interp_lab/exponent.hpp"
#include "interp_lab/gauge.hpp"
#include "interp_lab/kernel_matrix.hpp"
#include "interp_lab/measure.hpp"

namespace interp_lab {

/// (q, p_1..p_n) with 0 < q < p_j <= inf; alpha_j = 1/q - 1/p_j > 0.
class ExponentConfig {
 public:
  ExponentConfig(double q, std::vector<Exponent> p);

  double q() const noexcept { return q_; }
  const std::vector<Exponent>& p() const noexcept { return p_; }
  std::size_t axes() const noexcept { return p_.size(); }
  double alpha(std::size_t axis) const;
  std::vector<double> alphas() const;

 private:
  double q_;
  std::vector<Exponent> p_;
};

/// Value of a rectangle supremum and one maximizing tuple (E_1..E_n).
struct RectangleSup {
  double value = 0.0;
  std::vector<SubsetMask> argmax;
};

enum class RectMethod {
  kAuto,            // sorted fast path on a two-axis kernel with an equal-weight axis, else enumeration
  kEnumerate,       // every tuple of nonempty subsets
  kSortedFastPath,  // two axes, one equal-weight axis; throws if inapplicable
};

struct RectOptions {
  RectMethod method = RectMethod::kAuto;
  std::size_t limit = default_enumeration_limit();
};

/// sup over tuples of nonempty subsets of
///   (int_{E_1 x ... x E_n} |f|^q)^{1/q} / sum_j scales_j^{-1} mu_j(E_j)^{alphas_j}.
///
/// Under enumeration ties resolve to the lexicographically smallest mask
/// tuple (masks ordered as integers); the fast path returns some maximizer.
RectangleSup rect_sup(const KernelMatrix& f, double q, std::span<const double> alphas,
                      std::span<const double> scales, const RectOptions& options = {});

/// rect_sup with mu_j(E_j)^{alpha_j} replaced by Phi_j(mu_j(E_j)).
RectangleSup gauge_rect_sup(const KernelMatrix& f, double q, std::span<const GaugeFunction> gauges,
                            std::span<const double> scales, const RectOptions& options = {});

/// sup of (int_{E_1 x ... x E_n} |f|^q)^{1/q} / prod_j mu_j(E_j)^{powers_j}.
RectangleSup product_rect_sup(const KernelMatrix& f, double q, std::span<const double> powers,
                              const RectOptions& options = {});

/// k_t(f): the rectangle functional of a two-axis kernel with scales (1, t),
/// i.e. denominator mu_1(E_1)^{alpha_1} + t^{-1} mu_2(E_2)^{alpha_2}.
/// It bounds K_t from below.
RectangleSup k_lower_certificate(const KernelMatrix& f, const ExponentConfig& config, double t,
                                 const RectOptions& options = {});

}  // namespace interp_lab
