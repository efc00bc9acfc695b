#include <gtest/gtest.h>

#include <cmath>

#include "interp_lab/lorentz.hpp"
#include "interp_lab_cli/generate.hpp"
#include "oracles.hpp"

namespace interp_lab {
namespace {

const Exponent kInf = Exponent::infinity();

std::vector<double> random_values(cli::Rng& rng, std::size_t n) {
  std::vector<double> f(n);
  for (auto& v : f) v = rng.coin(0.8) ? rng.uniform(-3.0, 3.0) : 0.0;
  if (rng.coin(0.3) && n > 1) f[1] = f[0];  // ties
  return f;
}

FiniteMeasureSpace random_weights(cli::Rng& rng, std::size_t n) {
  return cli::random_space(rng, n, rng.coin() ? cli::WeightKind::kCounting : cli::WeightKind::kDirichlet);
}

TEST(WeakQuasinorm, Examples) {
  const auto mu = FiniteMeasureSpace::counting(3);
  EXPECT_NEAR(weak_quasinorm(mu, std::vector<double>{3, 1, 1}, Exponent(2)), oracle::weak(mu, {3, 1, 1}, Exponent(2)),
              1e-15);
  EXPECT_DOUBLE_EQ(weak_quasinorm(mu, std::vector<double>{3, 1, 1}, Exponent(2)), 3.0);
  const FiniteMeasureSpace w({0.5, 2.0, 0.25});
  EXPECT_NEAR(weak_quasinorm(w, std::vector<double>{1, 0, 1}, Exponent(3)), std::pow(0.75, 1.0 / 3.0), 1e-15);
  EXPECT_EQ(weak_quasinorm(w, std::vector<double>{0, 0, 0}, Exponent(3)), 0.0);
  EXPECT_DOUBLE_EQ(weak_quasinorm(w, std::vector<double>{1, -4, 2}, kInf), 4.0);
  EXPECT_NEAR(weak_quasinorm(w, std::vector<double>{1, 0, 1}, Exponent(0.5)), 0.75 * 0.75, 1e-15);
}

TEST(BracketNorm, Examples) {
  const auto mu = FiniteMeasureSpace::counting(3);
  const std::vector<double> f{3, 1, 1};
  EXPECT_NEAR(bracket_norm(mu, f, Exponent(2)), oracle::bracket(mu, f, Exponent(2)), 1e-15);
  EXPECT_DOUBLE_EQ(bracket_norm(mu, f, Exponent(2)), 3.0);
  const FiniteMeasureSpace w({0.5, 2.0, 0.25});
  const std::vector<double> c{1.5, 1.5, 1.5};
  EXPECT_NEAR(bracket_norm(w, c, Exponent(3)), 1.5 * std::pow(2.75, 1.0 / 3.0), 1e-14);
  EXPECT_DOUBLE_EQ(bracket_norm(w, std::vector<double>{1, -4, 2}, kInf), 4.0);
  EXPECT_DOUBLE_EQ(bracket_norm(w, std::vector<double>{1, -4, 2}, Exponent(1)), 0.5 + 8.0 + 0.5);
}

TEST(BracketNorm, SortedPathNeedsEqualWeights) {
  EXPECT_THROW(bracket_norm_sorted(FiniteMeasureSpace({1.0, 2.0}), std::vector<double>{1, 1}, Exponent(2)),
               std::invalid_argument);
}

TEST(BracketNorm, MatchesOracleAndFastPath) {
  cli::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    for (Exponent p : {Exponent(1.5), Exponent(2), Exponent(4), kInf}) {
      const double expect = oracle::bracket(mu, f, p);
      EXPECT_NEAR(bracket_norm_enumerated(mu, f, p), expect, 1e-12 * std::max(1.0, expect));
      EXPECT_NEAR(bracket_norm(mu, f, p), expect, 1e-12 * std::max(1.0, expect));
      const auto counting = FiniteMeasureSpace::counting(n);
      EXPECT_NEAR(bracket_norm_sorted(counting, f, p), oracle::bracket(counting, f, p), 1e-9);
    }
  }
}

TEST(BracketNorm, ThresholdScanIsALowerBound) {
  cli::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    EXPECT_LE(bracket_norm_threshold_scan(mu, f, Exponent(2)), bracket_norm(mu, f, Exponent(2)) + 1e-12);
  }
}

TEST(LorentzNorm, Examples) {
  const auto mu = FiniteMeasureSpace::counting(2);
  EXPECT_NEAR(lorentz_p1_norm(mu, std::vector<double>{2, 1}, Exponent(2)), std::sqrt(2.0) + 1.0, 1e-15);
  const FiniteMeasureSpace single({0.3});
  EXPECT_NEAR(lorentz_p1_norm(single, std::vector<double>{5}, Exponent(3)), 5.0 * std::pow(0.3, 1.0 / 3.0), 1e-15);
  const FiniteMeasureSpace w({0.5, 2.0, 0.25});
  EXPECT_EQ(lorentz_p1_norm(w, std::vector<double>{1, 0, 1}, Exponent(4)), std::pow(0.75, 0.25));
  EXPECT_DOUBLE_EQ(lorentz_p1_norm(w, std::vector<double>{1, -4, 2}, kInf), 4.0);
}

TEST(LorentzNorm, IndicatorAnchorIsExact) {
  cli::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto mu = random_weights(rng, n);
    std::vector<double> f(n, 0.0);
    SubsetMask e(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.coin()) {
        f[i] = 1.0;
        e.insert(i);
      }
    }
    if (e.empty()) continue;
    const Exponent p(rng.uniform(1.1, 6.0));
    EXPECT_EQ(lorentz_p1_norm(mu, f, p), std::pow(subset_measure(mu, e), p.inverse()));
  }
}

TEST(LorentzNorm, MatchesLayerCakeOracle) {
  cli::Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(9);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    const Exponent p(rng.uniform(1.1, 6.0));
    EXPECT_NEAR(lorentz_p1_norm(mu, f, p), oracle::lorentz(mu, f, p), 1e-12);
  }
}

TEST(LevelSets, Examples) {
  const auto mu = FiniteMeasureSpace::counting(2);
  const std::vector<double> f{2, 1};
  const auto pieces = level_set_decomposition(mu, f, Exponent(2));
  ASSERT_EQ(pieces.size(), 2u);
  double sum = 0.0;
  for (const auto& piece : pieces) sum += piece.coefficient;
  EXPECT_NEAR(sum, std::sqrt(2.0) + 1.0, 1e-15);
  const auto back = reconstruct(pieces, 2);
  EXPECT_NEAR(back[0], 2.0, 1e-12);
  EXPECT_NEAR(back[1], 1.0, 1e-12);

  const FiniteMeasureSpace w({0.5, 2.0, 0.25});
  const auto one = level_set_decomposition(w, std::vector<double>{1, 0, 1}, Exponent(3));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].coefficient, std::pow(0.75, 1.0 / 3.0), 1e-15);
}

TEST(LevelSets, ReconstructionAndCoefficientSum) {
  cli::Rng rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.index(9);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    const Exponent p(rng.uniform(1.1, 6.0));
    const auto pieces = level_set_decomposition(mu, f, p);
    const auto back = reconstruct(pieces, n);
    double sum = 0.0;
    for (const auto& piece : pieces) sum += piece.coefficient;
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], std::abs(f[i]), 1e-12);
    EXPECT_NEAR(sum, lorentz_p1_norm(mu, f, p), 1e-12);
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      // Level sets are nested and shrink.
      for (std::size_t i : pieces[k].level_set.indices()) EXPECT_TRUE(pieces[k - 1].level_set.contains(i));
    }
  }
}

TEST(LorentzScale, EquivalenceAndDuality) {
  cli::Rng rng(16);
  double worst = 1.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    const auto g = random_values(rng, n);
    for (Exponent p : {Exponent(1.5), Exponent(2), Exponent(4), kInf}) {
      const double weak = weak_quasinorm(mu, f, p);
      const double br = bracket_norm(mu, f, p);
      const double pc = p.is_infinite() ? 1.0 : p.value() / (p.value() - 1.0);
      EXPECT_LE(weak, br + 1e-12);
      EXPECT_LE(br, pc * weak + 1e-12);
      if (weak > 0.0) worst = std::max(worst, br / weak);
      double pairing = 0.0;
      for (std::size_t i = 0; i < n; ++i) pairing += std::abs(f[i] * g[i]) * mu.weight(i);
      if (!p.is_infinite()) {
        EXPECT_LE(pairing, br * lorentz_p1_norm(mu, g, p.conjugate()) * (1 + 1e-12) + 1e-12);
      }
    }
  }
  EXPECT_LE(worst, 3.0);  // largest p' in the ensemble
}

TEST(LorentzScale, Homogeneity) {
  cli::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(8);
    const auto mu = random_weights(rng, n);
    const auto f = random_values(rng, n);
    const double c = rng.uniform(-5.0, 5.0);
    std::vector<double> cf(f);
    for (auto& v : cf) v *= c;
    const Exponent p(2.5);
    auto close = [&](double a, double b) { EXPECT_NEAR(a, std::abs(c) * b, 1e-12 * std::max(1.0, std::abs(a))); };
    close(weak_quasinorm(mu, cf, p), weak_quasinorm(mu, f, p));
    close(bracket_norm(mu, cf, p), bracket_norm(mu, f, p));
    close(lorentz_p1_norm(mu, cf, p), lorentz_p1_norm(mu, f, p));
  }
}

TEST(MixedWeakNorm, MatchesOracle) {
  cli::Rng rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    cli::GenSpec spec;
    spec.shape = {1 + rng.index(5), 1 + rng.index(5)};
    if (rng.coin()) spec.shape.push_back(1 + rng.index(3));
    spec.weights = rng.coin() ? cli::WeightKind::kCounting : cli::WeightKind::kDirichlet;
    spec.signed_entries = true;
    const auto f = cli::gen_random(rng, spec);
    const std::size_t axis = rng.index(f.rank());
    const double q = rng.coin() ? 1.0 : 0.5;
    const Exponent p(rng.coin() ? INFINITY : rng.uniform(1.2, 5.0));
    const double expect = oracle::mixed_weak(f, axis, p, q);
    EXPECT_NEAR(mixed_weak_norm(f, axis, p, q), expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(MixedWeakNorm, RequiresQBelowP) {
  const auto mu = FiniteMeasureSpace::counting(2);
  const auto f = KernelMatrix::from_rows(mu, mu, {{1, 2}, {3, 4}});
  EXPECT_THROW(mixed_weak_norm(f, 0, Exponent(2), 2.0), std::domain_error);
}

}  // namespace
}  // namespace interp_lab
