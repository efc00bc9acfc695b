#pragma once

// The (X_0, X_1)_{theta,inf} norm for the mixed weak couple and its
// rectangle characterization.

#include <cstddef>
#include <vector>

#include "interp_lab/exponent.hpp"
#include "interp_lab/kernel_matrix.hpp"
#include "interp_lab/kfun.hpp"
#include "interp_lab/rectangle.hpp"

namespace interp_lab {

/// theta in (0, 1) and a base-2 grid t = 2^k, k in [min_exponent, max_exponent].
struct ThetaConfig {
  double theta = 0.5;
  int min_exponent = -20;
  int max_exponent = 20;

  void validate() const;
  std::vector<double> grid() const;
};

/// inf_{t>0} (1-theta) a0 t^theta + theta a1 t^{theta-1}, evaluated at the
/// minimizer t = a1/a0. Equals a0^{1-theta} a1^theta.
double geometric_identity_inf(double a0, double a1, double theta);

/// sup over rectangles of (int |f|^q)^{1/q} / (mu_1(E_1)^{(1-theta)alpha_1} mu_2(E_2)^{theta alpha_2}).
RectangleSup closed_form_norm(const KernelMatrix& f, double q, double theta, Exponent p1, Exponent p2,
                              const RectOptions& options = {});

/// sup_{t>0} t^{-theta} k_t(f), computed rectangle by rectangle with the
/// analytic optimum in t. Always enumerates.
double k_envelope(const KernelMatrix& f, double q, double theta, Exponent p1, Exponent p2,
                  std::size_t limit = default_enumeration_limit());

struct GridPoint {
  double t;
  double k_value;  // K_t(f)
  double weighted;  // t^{-theta} K_t(f)
};

struct ThetaNormGrid {
  double value = 0.0;  // max over the grid of t^{-theta} K_t
  double argmax_t = 0.0;
  std::vector<GridPoint> points;
};

/// max over the grid of t^{-theta} K_t(f) for q = 1. The continuous
/// supremum exceeds it by at most 2^{max(theta, 1-theta)} when its maximizer
/// lies inside the grid range.
ThetaNormGrid theta_norm_via_grid(const KernelMatrix& f, const ThetaConfig& config, Exponent p1, Exponent p2,
                                  const CuttingPlaneOptions& options = {});

}  // namespace interp_lab
