#pragma once

// Lorentz-scale norms of a scalar function on one finite measure space.
//
// Functions are passed as spans with one value per atom of the accompanying
// space; only |f| matters for every quantity here.

#include <cstddef>
#include <span>
#include <vector>

#include "interp_lab/exponent.hpp"
#include "interp_lab/gauge.hpp"
#include "interp_lab/kernel_matrix.hpp"
#include "interp_lab/measure.hpp"

namespace interp_lab {

/// sup_c c * mu{|f| > c}^{1/p}, evaluated at the distinct values v of |f|
/// with the closed level set {|f| >= v}. p = inf gives max |f|.
double weak_quasinorm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p);

/// sup over nonempty E of  int_E |f| dmu / mu(E)^{1/p'},  p in [1, inf].
///
/// Uses the sorted top-k scan when all weights are equal, exhaustive
/// enumeration otherwise (subject to `limit`).
double bracket_norm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p,
                    std::size_t limit = default_enumeration_limit());

/// Exhaustive reference for bracket_norm, any weights.
double bracket_norm_enumerated(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p,
                               std::size_t limit = default_enumeration_limit());

/// Sorted top-k evaluation; exact only for equal weights (throws otherwise).
double bracket_norm_sorted(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p);

/// Heuristic lower bound for unequal weights: scans the superlevel sets of
/// |f| only. Never exact in general; not used by any verification path.
double bracket_norm_threshold_scan(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p);

/// sup over nonempty E of int_E |f| dmu / Phi(mu(E)). bracket_norm is the
/// power gauge x^{1/p'}.
double gauge_bracket_norm(const FiniteMeasureSpace& mu, std::span<const double> f, const GaugeFunction& gauge,
                          std::size_t limit = default_enumeration_limit());

/// int_0^inf mu{|f| > c}^{1/p} dc, exact over the sorted distinct values of |f|.
double lorentz_p1_norm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p);

/// One term c * phi of the level-set representation |f| = sum_k c_k phi_k.
struct LevelPiece {
  double coefficient;  // (v_k - v_{k-1}) * mu(L_k)^{1/p}
  SubsetMask level_set;  // L_k = {|f| >= v_k}
  double height;         // value of phi_k on L_k, i.e. mu(L_k)^{-1/p}
};

/// Nested superlevel decomposition with normalized indicator blocks; the
/// coefficients sum to lorentz_p1_norm(f, p). Pieces are ordered by
/// increasing threshold.
std::vector<LevelPiece> level_set_decomposition(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p);

/// Evaluates sum_k c_k phi_k atomwise.
std::vector<double> reconstruct(std::span<const LevelPiece> pieces, std::size_t atoms);

/// Fiber q-mass along `axis`: r(a) = sum over cells with coordinate a of
/// |f|^q times the weights of every other axis.
std::vector<double> fiber_masses(const KernelMatrix& f, std::size_t axis, double q = 1.0);

/// Mixed weak norm L_{p,inf}(mu_axis; L_q(other axes)):
///   ( sup_E int_E r dmu_axis / mu_axis(E)^{1 - q/p} )^{1/q}
/// with r the fiber q-mass. For q = 1 this is the bracket norm of the fiber
/// L_1 norms. Requires q < p (or p = inf).
double mixed_weak_norm(const KernelMatrix& f, std::size_t axis, Exponent p, double q = 1.0,
                       std::size_t limit = default_enumeration_limit());

/// sup_E int_E r dmu_axis / Phi(mu_axis(E)) with r the fiber L_1 mass.
double mixed_gauge_norm(const KernelMatrix& f, std::size_t axis, const GaugeFunction& gauge,
                        std::size_t limit = default_enumeration_limit());

/// Power gauge realizing the bracket-norm divisor mu(E)^{1/p'}.
GaugeFunction bracket_gauge(Exponent p);

}  // namespace interp_lab
