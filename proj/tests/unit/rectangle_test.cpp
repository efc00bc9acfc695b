#include <gtest/gtest.h>

#include <cmath>

#include "interp_lab/rectangle.hpp"
#include "interp_lab_cli/generate.hpp"
#include "oracles.hpp"

namespace interp_lab {
namespace {

const Exponent kInf = Exponent::infinity();

KernelMatrix identity2() {
  const auto mu = FiniteMeasureSpace::counting(2);
  return KernelMatrix::from_rows(mu, mu, {{1, 0}, {0, 1}});
}

KernelMatrix random_kernel(cli::Rng& rng, std::vector<std::size_t> max_shape, bool counting_first = false) {
  cli::GenSpec spec;
  spec.shape.clear();
  for (std::size_t n : max_shape) spec.shape.push_back(1 + rng.index(n));
  spec.distribution = static_cast<cli::Distribution>(rng.index(3));
  spec.weights = rng.coin() ? cli::WeightKind::kCounting : cli::WeightKind::kDirichlet;
  spec.signed_entries = rng.coin();
  auto f = cli::gen_random(rng, spec);
  if (counting_first) {
    std::vector<FiniteMeasureSpace> factors = f.product().factors();
    factors[0] = FiniteMeasureSpace::counting(factors[0].size());
    f = f.with_product(ProductSpace(factors));
  }
  return f;
}

TEST(RectSup, IdentityWithUnitAlphas) {
  const double alphas[] = {1, 1};
  const double scales[] = {1, 1};
  const auto r = rect_sup(identity2(), 1.0, alphas, scales, {RectMethod::kEnumerate});
  EXPECT_DOUBLE_EQ(r.value, 0.5);
  ASSERT_EQ(r.argmax.size(), 2u);
  EXPECT_EQ(r.argmax[0].to_string(), "{0}");
  EXPECT_EQ(r.argmax[1].to_string(), "{0}");
  EXPECT_DOUBLE_EQ(oracle::rect_sum(identity2(), 1.0, {1, 1}, {1, 1}), 0.5);
}

TEST(RectSup, IdentityWithHalfAlphas) {
  const double alphas[] = {0.5, 0.5};
  const double scales[] = {1, 1};
  const auto r = rect_sup(identity2(), 1.0, alphas, scales, {RectMethod::kEnumerate});
  EXPECT_NEAR(r.value, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(r.argmax[0].to_string(), "{0,1}");
  EXPECT_EQ(r.argmax[1].to_string(), "{0,1}");
}

TEST(RectSup, AllOnes) {
  const auto mu = FiniteMeasureSpace::counting(2);
  const auto ones = KernelMatrix::from_rows(mu, mu, {{1, 1}, {1, 1}});
  const double alphas[] = {1, 1};
  const double scales[] = {1, 1};
  const auto r = rect_sup(ones, 1.0, alphas, scales);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.argmax[0].to_string(), "{0,1}");
}

TEST(RectSup, ZeroKernel) {
  const auto mu = FiniteMeasureSpace::counting(3);
  const double alphas[] = {1, 1};
  const double scales[] = {1, 1};
  EXPECT_EQ(rect_sup(KernelMatrix(ProductSpace({mu, mu})), 1.0, alphas, scales).value, 0.0);
}

TEST(RectSup, RejectsBadInput) {
  const double alphas[] = {1, 1};
  const double bad_scales[] = {1, 0};
  EXPECT_THROW(rect_sup(identity2(), 1.0, alphas, bad_scales), std::invalid_argument);
  const double one[] = {1};
  EXPECT_THROW(rect_sup(identity2(), 1.0, one, one), std::invalid_argument);
  EXPECT_THROW(ExponentConfig(2.0, {Exponent(1.5)}), std::invalid_argument);
}

TEST(RectSup, MatchesOracle) {
  cli::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_kernel(rng, trial % 4 == 0 ? std::vector<std::size_t>{3, 3, 3} : std::vector<std::size_t>{5, 5});
    const double q = trial % 3 == 0 ? 0.5 : 1.0;
    std::vector<double> alphas;
    std::vector<double> scales;
    for (std::size_t j = 0; j < f.rank(); ++j) {
      alphas.push_back(rng.uniform(0.1, 2.0));
      scales.push_back(std::ldexp(1.0, static_cast<int>(rng.index(7)) - 3));
    }
    const double expect = oracle::rect_sum(f, q, alphas, scales);
    const auto r = rect_sup(f, q, alphas, scales, {RectMethod::kEnumerate});
    EXPECT_NEAR(r.value, expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(RectSup, ArgmaxAttainsValue) {
  cli::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, {4, 4});
    const double alphas[] = {0.7, 0.3};
    const double scales[] = {1.0, 2.0};
    const auto r = rect_sup(f, 1.0, alphas, scales);
    if (r.value == 0.0) continue;
    double mass = 0.0;
    for (std::size_t i : r.argmax[0].indices()) {
      for (std::size_t j : r.argmax[1].indices()) {
        mass += std::abs(f(i, j)) * f.product().factor(0).weight(i) * f.product().factor(1).weight(j);
      }
    }
    const double den = std::pow(subset_measure(f.product().factor(0), r.argmax[0]), 0.7) +
                       std::pow(subset_measure(f.product().factor(1), r.argmax[1]), 0.3) / 2.0;
    EXPECT_NEAR(mass / den, r.value, 1e-12);
  }
}

TEST(RectSup, SortedFastPathMatchesEnumeration) {
  cli::Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    auto f = random_kernel(rng, {6, 6}, true);
    if (rng.coin()) f = f.transposed();
    const double alphas[] = {rng.uniform(0.1, 1.5), rng.uniform(0.1, 1.5)};
    const double scales[] = {1.0, std::ldexp(1.0, static_cast<int>(rng.index(11)) - 5)};
    const double q = rng.coin() ? 1.0 : 2.0;
    const auto fast = rect_sup(f, q, alphas, scales, {RectMethod::kSortedFastPath});
    const auto full = rect_sup(f, q, alphas, scales, {RectMethod::kEnumerate});
    EXPECT_NEAR(fast.value, full.value, 1e-9 * std::max(1.0, full.value));
  }
}

TEST(RectSup, FastPathRequiresEqualWeights) {
  const auto f = KernelMatrix::from_rows(FiniteMeasureSpace({1, 2}), FiniteMeasureSpace({1, 3}), {{1, 0}, {0, 1}});
  const double alphas[] = {1, 1};
  const double scales[] = {1, 1};
  EXPECT_THROW(rect_sup(f, 1.0, alphas, scales, {RectMethod::kSortedFastPath}), std::invalid_argument);
}

TEST(RectSup, TransposeSymmetry) {
  cli::Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, {5, 5});
    const double alphas[] = {0.4, 0.9};
    const double scales[] = {1.0, 0.25};
    const double ra[] = {0.9, 0.4};
    const double rs[] = {0.25, 1.0};
    EXPECT_NEAR(rect_sup(f, 1.0, alphas, scales).value, rect_sup(f.transposed(), 1.0, ra, rs).value, 1e-12);
  }
}

TEST(RectSup, MonotoneInModulus) {
  cli::Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_kernel(rng, {5, 5});
    KernelMatrix f = g;
    for (double& v : f.entries()) v *= rng.uniform(-1.0, 1.0);
    const double alphas[] = {0.5, 0.5};
    const double scales[] = {1.0, 1.0};
    EXPECT_LE(rect_sup(f, 1.0, alphas, scales).value, rect_sup(g, 1.0, alphas, scales).value + 1e-12);
  }
}

TEST(RectSup, SubstitutionLaw) {
  // Replacing f by |f|^q, q by 1 and alpha_j by q alpha_j: exact for product
  // denominators; for sums (a + b)^q and a^q + b^q differ by at most 2^{|1-q|}.
  cli::Rng rng(26);
  for (double q : {0.5, 2.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_kernel(rng, {4, 4});
      KernelMatrix fq = f;
      for (double& v : fq.entries()) v = std::pow(std::abs(v), q);
      const ExponentConfig config(q, {Exponent(q * rng.uniform(1.2, 4.0)), kInf});
      const auto a = config.alphas();
      const double qa[] = {q * a[0], q * a[1]};
      const double lhs = product_rect_sup(f, q, a).value;
      const double rhs = std::pow(product_rect_sup(fq, 1.0, qa).value, 1.0 / q);
      EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, lhs));

      const double t = std::ldexp(1.0, static_cast<int>(rng.index(7)) - 3);
      const double scales[] = {1.0, t};
      const double scales_q[] = {1.0, std::pow(t, q)};
      const double sum_lhs = std::pow(rect_sup(f, q, a, scales).value, q);
      const double sum_rhs = rect_sup(fq, 1.0, qa, scales_q).value;
      const double c = std::pow(2.0, std::abs(1.0 - q));
      EXPECT_LE(sum_lhs, c * sum_rhs * (1 + 1e-12) + 1e-15);
      EXPECT_LE(sum_rhs, c * sum_lhs * (1 + 1e-12) + 1e-15);
    }
  }
}

TEST(KLowerCertificate, Examples) {
  const ExponentConfig config(1.0, {kInf, kInf});
  EXPECT_DOUBLE_EQ(k_lower_certificate(identity2(), config, 1.0).value, 0.5);
  cli::Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_kernel(rng, {4, 4});
    const ExponentConfig c(1.0, {Exponent(2), Exponent(4)});
    double previous = 0.0;
    for (int k = -6; k <= 6; ++k) {
      const double v = k_lower_certificate(f, c, std::ldexp(1.0, k)).value;
      EXPECT_GE(v, previous - 1e-15);
      previous = v;
    }
    const double c3 = -2.5;
    EXPECT_NEAR(k_lower_certificate(f.scaled(c3), c, 0.7).value, 2.5 * k_lower_certificate(f, c, 0.7).value, 1e-12);
  }
}

TEST(GaugeRectSup, Examples) {
  const std::vector<GaugeFunction> identity{GaugeFunction(), GaugeFunction()};
  const double scales[] = {1, 1};
  EXPECT_DOUBLE_EQ(gauge_rect_sup(identity2(), 1.0, identity, scales).value, 0.5);
  const auto capped = GaugeFunction::piecewise_linear({{0, 0}, {1, 1}}, 0.0);
  const std::vector<GaugeFunction> caps{capped, capped};
  const auto r = gauge_rect_sup(identity2(), 1.0, caps, scales);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.argmax[0].to_string(), "{0,1}");
  EXPECT_EQ(r.argmax[1].to_string(), "{0,1}");
}

TEST(GaugeRectSup, PowerGaugesReproduceRectSup) {
  cli::Rng rng(28);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, {5, 5});
    const double alphas[] = {rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)};
    const double scales[] = {1.0, rng.uniform(0.1, 10.0)};
    const std::vector<GaugeFunction> gauges{GaugeFunction::power(alphas[0]), GaugeFunction::power(alphas[1])};
    EXPECT_EQ(gauge_rect_sup(f, 1.0, gauges, scales, {RectMethod::kEnumerate}).value,
              rect_sup(f, 1.0, alphas, scales, {RectMethod::kEnumerate}).value);
  }
}

TEST(GaugeRectSup, MatchesOracle) {
  cli::Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, {5, 5});
    const std::vector<GaugeFunction> gauges{cli::random_concave_gauge(rng, 3), cli::random_concave_gauge(rng, 2)};
    const std::vector<double> scales{1.0, rng.uniform(0.1, 10.0)};
    const double expect = oracle::rect_gauge(f, 1.0, gauges, scales);
    EXPECT_NEAR(gauge_rect_sup(f, 1.0, gauges, scales).value, expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(ProductRectSup, MatchesOracle) {
  cli::Rng rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_kernel(rng, {5, 5});
    const std::vector<double> powers{rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0)};
    const double expect = oracle::rect_product(f, 1.0, powers);
    EXPECT_NEAR(product_rect_sup(f, 1.0, powers).value, expect, 1e-12 * std::max(1.0, expect));
  }
}

}  // namespace
}  // namespace interp_lab
