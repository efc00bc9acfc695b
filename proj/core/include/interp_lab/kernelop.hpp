#pragma once

// Positive kernel operators T g(x) = sum_y |f(x,y)| g(y) mu_2(y) between
// Lorentz-scale spaces.

#include <cstddef>
#include <span>
#include <vector>

#include "interp_lab/exponent.hpp"
#include "interp_lab/kernel_matrix.hpp"

namespace interp_lab {

/// (T_{|f|} g)(x) = sum_y |f(x,y)| g(y) mu_2(y); g lives on the second axis.
std::vector<double> apply_kernel(const KernelMatrix& f, std::span<const double> g);

/// ||T_{|f|} : L_{r,1}(mu_2) -> L_{s,inf}(mu_1)||, target normed by the
/// bracket norm. Computed as sup over nonempty E_2 of
///   bracket_norm(T 1_{E_2}, s) / mu_2(E_2)^{1/r},
/// which is exact because normalized indicators are the extreme points of
/// the L_{r,1} ball and the kernel is positive. r in (1, inf] (inf meaning the
/// L_inf source), s in [1, inf] (1 meaning the L_1 target).
double kernel_opnorm(const KernelMatrix& f, Exponent r, Exponent s, std::size_t limit = default_enumeration_limit());

/// Same operator norm with the weak quasinorm on the target; it is at most
/// kernel_opnorm and at least kernel_opnorm / s'.
double kernel_opnorm_quasi(const KernelMatrix& f, Exponent r, Exponent s,
                           std::size_t limit = default_enumeration_limit());

/// Regular norm of a signed kernel operator: the norm of its absolute kernel.
double regular_norm(const KernelMatrix& f, Exponent r, Exponent s, std::size_t limit = default_enumeration_limit());

/// Operator exponents (r, s) of the interpolated kernel class:
/// 1/r = theta / p2',  1/s' = (1 - theta) / p1'.
struct OperatorExponents {
  Exponent r;
  Exponent s;
};
OperatorExponents interpolated_operator_exponents(double theta, Exponent p1, Exponent p2);

/// Both sides of the two endpoint identities for T_{|f|}:
///  (a) ||T : L_inf(mu_2) -> L_{p1,inf}(mu_1)|| = ||f||_{L_{p1,inf}(mu_1; L_1(mu_2))}
///  (b) ||T : L_{p2',1}(mu_2) -> L_1(mu_1)||    = ||f||_{L_{p2,inf}(mu_2; L_1(mu_1))}
/// Operator sides are computed by brute force over extreme points (sign
/// vectors for L_inf, normalized indicators for L_{r,1}); norm sides by the
/// mixed weak norm. `literal_b_lhs` uses the source L_{p1',1} instead.
struct EndpointIdentityReport {
  double a_operator = 0.0;
  double a_mixed = 0.0;
  double b_operator = 0.0;
  double b_mixed = 0.0;
  double literal_b_operator = 0.0;
  bool a_holds = false;
  bool b_holds = false;
  bool literal_b_holds = false;
};

EndpointIdentityReport rem19_identity_check(const KernelMatrix& f, Exponent p1, Exponent p2,
                                            double tolerance = 1e-9,
                                            std::size_t limit = default_enumeration_limit());

}  // namespace interp_lab
