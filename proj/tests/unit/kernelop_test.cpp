#include <gtest/gtest.h>

#include <cmath>

#include "interp_lab/interp.hpp"
#include "interp_lab/kernelop.hpp"
#include "interp_lab/lorentz.hpp"
#include "interp_lab_cli/generate.hpp"
#include "oracles.hpp"

namespace interp_lab {
namespace {

const Exponent kInf = Exponent::infinity();

KernelMatrix random_kernel(cli::Rng& rng, std::size_t max1, std::size_t max2, bool signed_entries = true) {
  cli::GenSpec spec;
  spec.shape = {1 + rng.index(max1), 1 + rng.index(max2)};
  spec.distribution = static_cast<cli::Distribution>(rng.index(3));
  spec.weights = rng.coin() ? cli::WeightKind::kCounting : cli::WeightKind::kDirichlet;
  spec.signed_entries = signed_entries;
  return cli::gen_random(rng, spec);
}

Exponent random_exponent(cli::Rng& rng) {
  static const double choices[] = {1.5, 2.0, 4.0, INFINITY};
  return Exponent(choices[rng.index(4)]);
}

KernelMatrix identity(std::size_t n) {
  const auto mu = FiniteMeasureSpace::counting(n);
  KernelMatrix f(ProductSpace({mu, mu}));
  for (std::size_t i = 0; i < n; ++i) f(i, i) = 1.0;
  return f;
}

TEST(ApplyKernel, Examples) {
  const std::vector<double> g{0.5, -2.0, 3.0};
  EXPECT_EQ(apply_kernel(identity(3), g), g);
  EXPECT_EQ(apply_kernel(identity(3), std::vector<double>(3, 0.0)), std::vector<double>(3, 0.0));
  const auto mu = FiniteMeasureSpace::counting(2);
  const auto ones = KernelMatrix::from_rows(mu, mu, {{1, 1}, {1, 1}});
  EXPECT_EQ(apply_kernel(ones, std::vector<double>{1, 1}), (std::vector<double>{2, 2}));
  EXPECT_THROW(apply_kernel(ones, std::vector<double>{1}), std::invalid_argument);
}

TEST(KernelOpnorm, IdentityExample) {
  for (std::size_t n : {1u, 3u, 6u}) EXPECT_NEAR(kernel_opnorm(identity(n), Exponent(2), Exponent(2)), 1.0, 1e-14);
}

// sup over E_1, E_2 of the kernel mass on E_1 x E_2 over mu_1(E_1)^{1/s'} mu_2(E_2)^{1/r}.
double double_rectangle(const KernelMatrix& f, Exponent r, Exponent s) {
  const std::vector<double> powers{oracle::inv_conj(s), r.inverse()};
  return oracle::rect_product(f, 1.0, powers);
}

TEST(KernelOpnorm, DoubleRectangleForm) {
  cli::Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, 5, 5);
    const Exponent r = Exponent(rng.coin() ? INFINITY : rng.uniform(1.1, 5.0));
    const Exponent s = Exponent(rng.coin() ? INFINITY : rng.uniform(1.0, 5.0));
    const double expect = double_rectangle(f, r, s);
    EXPECT_NEAR(kernel_opnorm(f, r, s), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(KernelOpnorm, QuasinormFlavourWithinFactor) {
  cli::Rng rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, 5, 5);
    const Exponent r(rng.uniform(1.1, 5.0));
    const Exponent s(rng.uniform(1.1, 5.0));
    const double norm = kernel_opnorm(f, r, s);
    const double quasi = kernel_opnorm_quasi(f, r, s);
    EXPECT_LE(quasi, norm + 1e-12);
    EXPECT_GE(quasi * s.value() / (s.value() - 1.0), norm - 1e-12);
  }
}

TEST(RegularNorm, AbsoluteKernel) {
  cli::Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_kernel(rng, 4, 4);
    const Exponent r(rng.uniform(1.1, 5.0));
    const Exponent s(rng.uniform(1.1, 5.0));
    EXPECT_EQ(regular_norm(f, r, s), kernel_opnorm(f.abs(), r, s));
    EXPECT_EQ(regular_norm(f.abs(), r, s), kernel_opnorm(f.abs(), r, s));
    KernelMatrix flipped = f;
    for (double& v : flipped.entries()) {
      if (rng.coin()) v = -v;
    }
    EXPECT_EQ(regular_norm(flipped, r, s), regular_norm(f, r, s));
  }
}

TEST(KernelOpnorm, MonotoneInModulus) {
  cli::Rng rng(74);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_kernel(rng, 4, 4);
    KernelMatrix f = g;
    for (double& v : f.entries()) v *= rng.uniform(-1.0, 1.0);
    EXPECT_LE(kernel_opnorm(f, Exponent(2), Exponent(3)), kernel_opnorm(g, Exponent(2), Exponent(3)) + 1e-12);
  }
}

TEST(OperatorExponents, Formula) {
  const auto e = interpolated_operator_exponents(0.5, Exponent(2), Exponent(4));
  // 1/r = 0.5 * 3/4, 1/s' = 0.5 * 1/2.
  EXPECT_NEAR(e.r.inverse(), 0.375, 1e-15);
  EXPECT_NEAR(e.s.inverse(), 0.75, 1e-15);
  const auto inf = interpolated_operator_exponents(0.25, kInf, kInf);
  EXPECT_NEAR(inf.r.inverse(), 0.25, 1e-15);
  EXPECT_NEAR(inf.s.inverse(), 0.25, 1e-15);
  EXPECT_THROW(interpolated_operator_exponents(1.0, kInf, kInf), std::invalid_argument);
}

TEST(OperatorExponents, EndpointLimits) {
  // theta -> 0 sends r to inf (the L_inf source) and s to p1;
  // theta -> 1 sends s to 1 (the L_1 target) and r to p2'.
  const Exponent p1(3.0);
  const Exponent p2(1.5);
  const auto near0 = interpolated_operator_exponents(1e-12, p1, p2);
  EXPECT_NEAR(near0.r.inverse(), 0.0, 1e-11);
  EXPECT_NEAR(near0.s.inverse(), p1.inverse(), 1e-11);
  const auto near1 = interpolated_operator_exponents(1.0 - 1e-12, p1, p2);
  EXPECT_NEAR(near1.r.inverse(), p2.inverse_conjugate(), 1e-11);
  EXPECT_NEAR(near1.s.inverse(), 1.0, 1e-11);
}

TEST(KernelOpnorm, MatchesClosedFormUnderInterpolatedExponents) {
  cli::Rng rng(75);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, 5, 5);
    const double theta = rng.uniform(0.05, 0.95);
    const Exponent p1 = random_exponent(rng);
    const Exponent p2 = random_exponent(rng);
    const auto e = interpolated_operator_exponents(theta, p1, p2);
    const double closed = closed_form_norm(f, 1.0, theta, p1, p2).value;
    EXPECT_NEAR(kernel_opnorm(f, e.r, e.s), closed, 1e-9);
  }
}

TEST(Rem19, IdentityExample) {
  const auto r = rem19_identity_check(identity(2), Exponent(2), Exponent(2));
  EXPECT_NEAR(r.a_operator, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.a_mixed, std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(r.a_holds);
  EXPECT_TRUE(r.b_holds);
}

TEST(Rem19, ZeroKernel) {
  const auto mu = FiniteMeasureSpace::counting(3);
  const auto r = rem19_identity_check(KernelMatrix(ProductSpace({mu, mu})), Exponent(2), kInf);
  EXPECT_EQ(r.a_operator, 0.0);
  EXPECT_EQ(r.a_mixed, 0.0);
  EXPECT_EQ(r.b_operator, 0.0);
  EXPECT_EQ(r.b_mixed, 0.0);
  EXPECT_TRUE(r.a_holds && r.b_holds);
}

TEST(Rem19, RandomKernels) {
  cli::Rng rng(76);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_kernel(rng, 5, 5);
    const Exponent p1 = random_exponent(rng);
    const Exponent p2 = random_exponent(rng);
    const auto r = rem19_identity_check(f, p1, p2);
    EXPECT_NEAR(r.a_operator, r.a_mixed, 1e-9);
    EXPECT_NEAR(r.b_operator, r.b_mixed, 1e-9);
    EXPECT_NEAR(r.a_mixed, oracle::mixed_weak(f, 0, p1), 1e-12 * std::max(1.0, r.a_mixed));
    // For a positive kernel the L_inf sup sits at g = 1.
    const std::vector<double> ones(f.extent(1), 1.0);
    EXPECT_NEAR(r.a_operator, bracket_norm(f.product().factor(0), apply_kernel(f, ones), p1), 1e-12);
    EXPECT_NEAR(r.b_mixed, oracle::mixed_weak(f, 1, p2), 1e-12 * std::max(1.0, r.b_mixed));
  }
}

TEST(Rem19, LiteralSourceIndexFails) {
  // With the source L_{p1',1} in place of L_{p2',1} the second identity breaks
  // as soon as p1 != p2 and the measure of the second axis is not 1.
  const auto mu = FiniteMeasureSpace::counting(2);
  const auto ones = KernelMatrix::from_rows(mu, mu, {{1, 1}, {1, 1}});
  const auto r = rem19_identity_check(ones, Exponent(2), Exponent(4));
  EXPECT_TRUE(r.b_holds);
  EXPECT_FALSE(r.literal_b_holds);
  // By hand: ||T 1_E||_1 = 2 |E|, [1_E]_{4/3,1} = |E|^{3/4}, so the sup is 2 * 2^{1/4}.
  EXPECT_NEAR(r.b_operator, 2.0 * std::pow(2.0, 0.25), 1e-14);
  // The literal source gives 2 |E| / |E|^{1/2}, i.e. 2 sqrt 2.
  EXPECT_NEAR(r.literal_b_operator, 2.0 * std::sqrt(2.0), 1e-14);
}

}  // namespace
}  // namespace interp_lab
