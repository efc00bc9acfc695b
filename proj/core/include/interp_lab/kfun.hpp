#pragma once

// Exact K-functionals of sums of mixed weak spaces, computed as linear
// programs over non-negative splits of |f| with lazily separated subset
// constraints.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "interp_lab/exponent.hpp"
#include "interp_lab/gauge.hpp"
#include "interp_lab/kernel_matrix.hpp"
#include "interp_lab/lp.hpp"
#include "interp_lab/measure.hpp"

namespace interp_lab {

// ---------------------------------------------------------------------------
// Separation

struct ViolatedSubset {
  SubsetMask mask;
  double violation;
};

/// Maximizer of  sum_{a in E} r(a) mu(a) - s * Phi(mu(E))  over nonempty E,
/// returned when the maximum exceeds `tolerance`. Exact: sorted top-k scan for
/// equal weights, enumeration otherwise.
std::optional<ViolatedSubset> separation_worst_subset(std::span<const double> r, const FiniteMeasureSpace& space,
                                                      double s, const GaugeFunction& gauge,
                                                      double tolerance = 1e-9,
                                                      std::size_t limit = default_enumeration_limit());

/// Bracket-norm flavour: Phi(x) = x^{1/p'}.
std::optional<ViolatedSubset> separation_worst_subset(std::span<const double> r, const FiniteMeasureSpace& space,
                                                      double s, Exponent p, double tolerance = 1e-9,
                                                      std::size_t limit = default_enumeration_limit());

// ---------------------------------------------------------------------------
// Generic split program

/// One summand space of a split problem. Cells map onto the atoms of a
/// (quotient) space; the summand norm of g is
///   sup_E  sum_{cells e with atom_of[e] in E} cell_weight[e] g(e) / Phi(mu(E)).
struct SplitAxis {
  FiniteMeasureSpace space;
  std::vector<std::size_t> atom_of;
  GaugeFunction gauge;
  double weight = 1.0;  // t_j in the objective sum_j t_j ||x_j||
};

struct SplitProblem {
  std::vector<double> cell_weight;
  std::vector<double> magnitude;  // |f(e)|
  std::vector<SplitAxis> axes;
};

struct CuttingPlaneOptions {
  double violation_tolerance = 1e-9;
  /// Start from every nonempty subset of every axis instead of singletons.
  bool materialize_all = false;
  std::size_t max_rounds = 100000;
  std::size_t limit = default_enumeration_limit();
  SimplexOptions simplex;
};

struct SplitSolution {
  std::vector<std::vector<double>> parts;  // g_j(e) >= 0, sum_j g_j = magnitude
  std::vector<double> epigraph;            // LP values s_j
  std::vector<double> norms;               // exact summand norms of the parts
  double lp_objective = 0.0;
  double total = 0.0;                      // sum_j weight_j * norms_j
  std::size_t rounds = 0;
  std::size_t constraints = 0;
};

/// Exact infimum of sum_j t_j ||g_j|| over g_j >= 0 with sum_j g_j = |f|.
SplitSolution solve_split(const SplitProblem& problem, const CuttingPlaneOptions& options = {});

/// Summand norm of `part` on `axis` (see SplitAxis).
double split_part_norm(const SplitProblem& problem, std::size_t axis, std::span<const double> part,
                       std::size_t limit = default_enumeration_limit());

// ---------------------------------------------------------------------------
// K-functionals

struct DecompositionResult {
  std::vector<KernelMatrix> summands;  // same signs as f, |summand| <= |f|, sum = f
  std::vector<double> norms;           // per-summand mixed weak (or gauge) norms
  std::vector<double> weights;         // t_j
  double total = 0.0;                  // sum_j t_j norms_j: the reported K value
  double lp_objective = 0.0;
  std::optional<double> certificate;   // rectangle lower bound at the same weights
  std::size_t rounds = 0;
  std::size_t constraints = 0;
};

/// K_t(f; L_{p1,inf}(mu_1; L_1(mu_2)), L_{p2,inf}(mu_2; L_1(mu_1))), t > 0.
DecompositionResult k_exact(const KernelMatrix& f, double t, Exponent p1, Exponent p2,
                            const CuttingPlaneOptions& options = {});

/// inf sum_j t_j ||x_j||_{Y_j} with Y_j = L_{p_j,inf}(mu_j; L_1(other axes)).
DecompositionResult k_multi(const KernelMatrix& f, std::span<const double> t, std::span<const Exponent> p,
                            const CuttingPlaneOptions& options = {});

/// k_multi with the divisor mu_j(E)^{1/p_j'} replaced by Phi_j(mu_j(E)).
DecompositionResult k_gauge(const KernelMatrix& f, std::span<const double> t, std::span<const GaugeFunction> gauges,
                            const CuttingPlaneOptions& options = {});

/// Certified bracket  lower <= K_t(f; L_{p1,inf}(L_q), L_{p2,inf}(L_q)) <= upper  for q != 1.
struct KBracket {
  double k_t = 0.0;           // rectangle functional
  double lower_factor = 1.0;  // lower = lower_factor * k_t (1 for q >= 1/2)
  double lower = 0.0;
  double upper = 0.0;
  DecompositionResult decomposition;  // disjoint-support witness for `upper`
};

KBracket k_bracket_general_q(const KernelMatrix& f, double t, double q, Exponent p1, Exponent p2,
                             const CuttingPlaneOptions& options = {});

// ---------------------------------------------------------------------------
// Duality certificate

struct DualityPiece {
  double lower_level = 0.0;  // c ranges over (lower_level, upper_level]
  double upper_level = 0.0;
  SubsetMask rows;           // E_c = {alpha > c}
  SubsetMask cols;           // F_c = {beta > c}
  double mass = 0.0;         // (upper - lower) * (mu_1(E_c)^{1/p1'} + mu_2(F_c)^{1/p2'})
  double integral = 0.0;     // int |f| psi_c
};

struct DualityReport {
  std::vector<double> alpha;  // row sup of |g|
  std::vector<double> beta;   // column sup of |g|
  std::vector<DualityPiece> pieces;
  double pairing = 0.0;            // int |f g|
  double envelope_pairing = 0.0;   // int |f| (alpha ^ beta)
  double piece_mass = 0.0;         // sum of piece masses
  double lorentz_alpha = 0.0;      // [alpha]_{p1',1}
  double lorentz_beta = 0.0;       // [beta]_{p2',1}
  double sup_piece = 0.0;          // max_c int |f| psi_c
  double rect_bound = 0.0;         // rectangle functional with scales (1, 1)
  double final_bound = 0.0;        // 2 max(lorentz_alpha, lorentz_beta) rect_bound
  double reconstruction_error = 0.0;
  bool pass = false;
};

DualityReport duality_certificate(const KernelMatrix& f, const KernelMatrix& g, Exponent p1, Exponent p2);

}  // namespace interp_lab
