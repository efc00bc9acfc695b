#include <gtest/gtest.h>

#include <cmath>

#include "interp_lab/lp.hpp"
#include "interp_lab_cli/generate.hpp"

namespace interp_lab {
namespace {

TEST(SolveLp, SingleBound) {
  LPModel m;
  m.add_variable(1.0);
  m.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  const auto s = solve_lp(m);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
}

TEST(SolveLp, DegenerateTie) {
  LPModel m;
  m.add_variable(1.0);
  m.add_variable(1.0);
  m.add_constraint({1.0, 1.0}, Relation::kGreaterEqual, 2.0);
  const auto s = solve_lp(m);
  EXPECT_NEAR(s.objective, 2.0, 1e-12);
  EXPECT_NEAR(s.x[0] + s.x[1], 2.0, 1e-9);
  EXPECT_GE(s.x[0], -1e-12);
  EXPECT_GE(s.x[1], -1e-12);
}

TEST(SolveLp, Infeasible) {
  LPModel m;
  m.add_variable(1.0);
  m.add_constraint({1.0}, Relation::kLessEqual, 0.0);
  m.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  try {
    solve_lp(m);
    FAIL() << "expected infeasibility";
  } catch (const LPError& e) {
    EXPECT_EQ(e.status(), LPStatus::kInfeasible);
  }
}

TEST(SolveLp, Unbounded) {
  LPModel m;
  m.add_variable(-1.0);
  m.add_constraint({1.0}, Relation::kGreaterEqual, 1.0);
  try {
    solve_lp(m);
    FAIL() << "expected unboundedness";
  } catch (const LPError& e) {
    EXPECT_EQ(e.status(), LPStatus::kUnbounded);
  }
}

TEST(SolveLp, IterationCap) {
  LPModel m;
  for (int i = 0; i < 4; ++i) m.add_variable(-1.0 - i, 0.0, 1.0);
  m.add_constraint({1, 1, 1, 1}, Relation::kLessEqual, 2.5);
  SimplexOptions opts;
  opts.iteration_cap = 1;
  try {
    solve_lp(m, opts);
    FAIL() << "expected the iteration cap";
  } catch (const LPError& e) {
    EXPECT_EQ(e.status(), LPStatus::kIterationLimit);
  }
}

TEST(SolveLp, BoundsAndEqualities) {
  // min -x - 2y + z  s.t. x + y + z = 4, x in [-1, 1], y <= 2 (free below), z >= 0.5
  LPModel m;
  m.add_variable(-1.0, -1.0, 1.0);
  m.add_variable(-2.0, -LPModel::kInfinity, 2.0);
  m.add_variable(1.0, 0.5);
  m.add_constraint({1, 1, 1}, Relation::kEqual, 4.0);
  const auto s = solve_lp(m);
  EXPECT_NEAR(s.x[0], 1.0, 1e-9);
  EXPECT_NEAR(s.x[1], 2.0, 1e-9);
  EXPECT_NEAR(s.x[2], 1.0, 1e-9);
  EXPECT_NEAR(s.objective, -4.0, 1e-9);
}

TEST(SolveLp, FreeVariable) {
  // min |x - 3| via epigraph with x free.
  LPModel m;
  m.add_variable(0.0, -LPModel::kInfinity, LPModel::kInfinity);
  m.add_variable(1.0);
  m.add_constraint({1, -1}, Relation::kLessEqual, 3.0);
  m.add_constraint({-1, -1}, Relation::kLessEqual, -3.0);
  const auto s = solve_lp(m);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
  EXPECT_NEAR(s.x[0], 3.0, 1e-9);
}

TEST(SolveLp, RejectsMalformedModels) {
  LPModel m;
  m.add_variable(1.0);
  EXPECT_THROW(m.add_constraint({1.0, 2.0}, Relation::kLessEqual, 1.0), std::invalid_argument);
  EXPECT_THROW(m.add_constraint({NAN}, Relation::kLessEqual, 1.0), std::invalid_argument);
  EXPECT_THROW(m.add_variable(1.0, 2.0, 1.0), std::invalid_argument);
}

// Random transportation problems: the optimum of a balanced problem with a
// feasible flow is bounded below by sum_i supply_i min_j cost_ij.
TEST(SolveLp, TransportationProblems) {
  cli::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t a = 2 + rng.index(3);
    const std::size_t b = 2 + rng.index(3);
    std::vector<double> supply(a);
    std::vector<double> demand(b, 0.0);
    double total = 0.0;
    for (auto& s : supply) total += (s = rng.uniform(0.5, 2.0));
    for (std::size_t j = 0; j < b; ++j) demand[j] = total / static_cast<double>(b);
    LPModel m;
    std::vector<double> cost(a * b);
    for (auto& c : cost) m.add_variable(c = rng.uniform(0.0, 3.0));
    for (std::size_t i = 0; i < a; ++i) {
      std::vector<double> row(a * b, 0.0);
      for (std::size_t j = 0; j < b; ++j) row[i * b + j] = 1.0;
      m.add_constraint(row, Relation::kEqual, supply[i]);
    }
    for (std::size_t j = 0; j < b; ++j) {
      std::vector<double> row(a * b, 0.0);
      for (std::size_t i = 0; i < a; ++i) row[i * b + j] = 1.0;
      m.add_constraint(row, Relation::kEqual, demand[j]);
    }
    const auto s = solve_lp(m);
    double lower = 0.0;
    for (std::size_t i = 0; i < a; ++i) {
      double best = INFINITY;
      for (std::size_t j = 0; j < b; ++j) best = std::min(best, cost[i * b + j]);
      lower += supply[i] * best;
    }
    EXPECT_GE(s.objective, lower - 1e-9);
    double check = 0.0;
    for (std::size_t k = 0; k < a * b; ++k) {
      EXPECT_GE(s.x[k], -1e-9);
      check += cost[k] * s.x[k];
    }
    EXPECT_NEAR(check, s.objective, 1e-9);
    for (std::size_t i = 0; i < a; ++i) {
      double out = 0.0;
      for (std::size_t j = 0; j < b; ++j) out += s.x[i * b + j];
      EXPECT_NEAR(out, supply[i], 1e-9);
    }
  }
}

}  // namespace
}  // namespace interp_lab

namespace interp_lab {
namespace {

// Long pivot sequences on cut-style programs: the returned point must satisfy
// every row of the model, not just the final tableau.
TEST(SolveLp, ReturnedPointIsFeasible) {
  cli::Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.index(20);
    const std::size_t rows = 2 + rng.index(40);
    LPModel m;
    for (std::size_t j = 0; j < n; ++j) {
      const double upper = rng.coin(0.7) ? rng.uniform(0.01, 2.0) : LPModel::kInfinity;
      m.add_variable(rng.uniform(0.0, 2.0), 0.0, upper);
    }
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<double> row(n, 0.0);
      for (auto& a : row) {
        if (rng.coin(0.4)) a = rng.uniform(-1.0, 1.0) * std::pow(10.0, -4.0 * rng.uniform());
      }
      const Relation rel = rng.coin(0.8) ? Relation::kGreaterEqual : Relation::kLessEqual;
      // The all-ones point with enough slack keeps every instance feasible.
      double at_anchor = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(m.upper()[j])) at_anchor += row[j] * m.upper()[j] * 0.5;
      }
      const double rhs = rel == Relation::kGreaterEqual ? at_anchor - rng.uniform(0.0, 0.1)
                                                        : at_anchor + rng.uniform(0.0, 0.1);
      m.add_constraint(std::move(row), rel, rhs);
    }
    const auto s = solve_lp(m);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_GE(s.x[j], -1e-9);
      EXPECT_LE(s.x[j], m.upper()[j] + 1e-9);
    }
    for (const auto& c : m.constraints()) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += c.coefficients[j] * s.x[j];
      if (c.relation == Relation::kGreaterEqual) {
        EXPECT_GE(lhs, c.rhs - 1e-9);
      } else {
        EXPECT_LE(lhs, c.rhs + 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace interp_lab
