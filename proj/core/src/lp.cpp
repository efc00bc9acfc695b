#include "interp_lab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace interp_lab {

std::size_t LPModel::add_variable(double cost, double lower, double upper) {
  if (!std::isfinite(cost)) throw std::invalid_argument("objective coefficients must be finite");
  if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInfinity || upper == -kInfinity) {
    throw std::invalid_argument("invalid variable bounds");
  }
  objective_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  for (auto& row : constraints_) row.coefficients.push_back(0.0);
  return objective_.size() - 1;
}

void LPModel::add_constraint(std::vector<double> coefficients, Relation relation, double rhs) {
  if (coefficients.size() != variables()) {
    throw std::invalid_argument("constraint has " + std::to_string(coefficients.size()) + " coefficients for " +
                                std::to_string(variables()) + " variables");
  }
  if (!std::isfinite(rhs)) throw std::invalid_argument("constraint right-hand sides must be finite");
  for (double a : coefficients) {
    if (!std::isfinite(a)) throw std::invalid_argument("constraint coefficients must be finite");
  }
  constraints_.push_back({std::move(coefficients), relation, rhs});
}

void LPModel::validate() const {
  for (std::size_t j = 0; j < variables(); ++j) {
    if (!std::isfinite(objective_[j])) throw std::invalid_argument("objective coefficients must be finite");
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] == kInfinity || upper_[j] == -kInfinity) {
      throw std::invalid_argument("invalid variable bounds");
    }
  }
  for (const auto& row : constraints_) {
    if (row.coefficients.size() != variables()) throw std::invalid_argument("constraint width mismatch");
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("constraint right-hand sides must be finite");
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) throw std::invalid_argument("constraint coefficients must be finite");
    }
  }
}

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal:
      return "optimal";
    case LPStatus::kInfeasible:
      return "infeasible";
    case LPStatus::kUnbounded:
      return "unbounded";
    case LPStatus::kIterationLimit:
      return "iteration limit exceeded";
  }
  return "unknown";
}

namespace {

// x_j = offset + sum over (column, sign) of sign * y_column, y >= 0.
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> columns;
};

struct StandardRow {
  std::vector<double> a;  // over structural columns
  Relation relation;
  double b;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), width_(cols + 1), data_((rows + 1) * width_, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }
  double* row(std::size_t i) { return &data_[i * width_]; }
  double& rhs(std::size_t i) { return data_[i * width_ + cols_]; }
  double& cost(std::size_t j) { return data_[rows_ * width_ + j]; }
  // The cost row's rhs slot holds minus the current objective.
  double& neg_objective() { return data_[rows_ * width_ + cols_]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t width() const { return width_; }

  void pivot(std::size_t r, std::size_t e) {
    double* pivot_row = row(r);
    const double inv = 1.0 / pivot_row[e];
    for (std::size_t j = 0; j < width_; ++j) pivot_row[j] *= inv;
    pivot_row[e] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* other = row(i);
      const double factor = other[e];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) other[j] -= factor * pivot_row[j];
      other[e] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<double> data_;
};

// Rebuilds the constraint rows as B^{-1} [A | b] from the original rows by
// Gauss-Jordan elimination with partial pivoting, so rounding does not
// accumulate over long pivot sequences. Returns false (leaving t untouched)
// when the basis is numerically singular.
bool refactor(Tableau& t, const Tableau& original, const std::vector<std::size_t>& basis) {
  const std::size_t m = t.rows();
  const std::size_t w = t.width();
  std::vector<double> work(m * w);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < w; ++j) work[i * w + j] = original.at(i, j);
  }
  std::vector<std::size_t> order(m);
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t col = basis[c];
    std::size_t best = m;
    double best_abs = 0.0;
    for (std::size_t r = c; r < m; ++r) {
      const double v = std::abs(work[r * w + col]);
      if (v > best_abs) {
        best = r;
        best_abs = v;
      }
    }
    if (best_abs < 1e-12) return false;
    if (best != c) std::swap_ranges(work.begin() + c * w, work.begin() + (c + 1) * w, work.begin() + best * w);
    double* pivot_row = &work[c * w];
    const double inv = 1.0 / pivot_row[col];
    for (std::size_t j = 0; j < w; ++j) pivot_row[j] *= inv;
    pivot_row[col] = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      double* other = &work[r * w];
      const double factor = other[col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) other[j] -= factor * pivot_row[j];
      other[col] = 0.0;
    }
  }
  for (std::size_t i = 0; i < m; ++i) std::copy_n(&work[i * w], w, t.row(i));
  return true;
}

void reset_costs(Tableau& t, const std::vector<std::size_t>& basis, const std::vector<double>& cost) {
  for (std::size_t j = 0; j <= t.cols(); ++j) {
    double reduced = j < t.cols() ? cost[j] : 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) reduced -= cost[basis[i]] * t.at(i, j);
    if (j < t.cols()) {
      t.cost(j) = reduced;
    } else {
      t.neg_objective() = reduced;
    }
  }
}

enum class PhaseResult { kOptimal, kUnbounded, kIterationLimit };

constexpr std::size_t kRefactorInterval = 32;

// Bland's entering rule (lowest-index improving column) with a two-pass
// ratio test: the step bound allows each row a small feasibility slack, then
// the largest pivot within the bound leaves (lowest basic index on ties).
// Optimality is only declared on a freshly refactored tableau.
PhaseResult run_phase(Tableau& t, const Tableau& original, std::vector<std::size_t>& basis,
                      const std::vector<double>& cost, const std::vector<bool>& allowed,
                      const SimplexOptions& options, std::size_t& iterations) {
  std::size_t since_refactor = 0;
  reset_costs(t, basis, cost);
  while (true) {
    std::size_t entering = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (allowed[j] && t.cost(j) < -options.cost_tolerance) {
        entering = j;
        break;
      }
    }
    if (entering == t.cols()) {
      if (since_refactor == 0) return PhaseResult::kOptimal;
      if (refactor(t, original, basis)) reset_costs(t, basis, cost);
      since_refactor = 0;
      continue;
    }
    if (iterations >= options.iteration_cap) return PhaseResult::kIterationLimit;

    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a > options.pivot_tolerance) {
        bound = std::min(bound, (std::max(t.rhs(i), 0.0) + options.feasibility_tolerance) / a);
      }
    }
    std::size_t leaving = t.rows();
    double best_pivot = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= options.pivot_tolerance || std::max(t.rhs(i), 0.0) / a > bound) continue;
      if (a > best_pivot || (a == best_pivot && basis[i] < basis[leaving])) {
        leaving = i;
        best_pivot = a;
      }
    }
    if (leaving == t.rows()) return PhaseResult::kUnbounded;

    t.pivot(leaving, entering);
    basis[leaving] = entering;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.rhs(i) < 0.0 && t.rhs(i) > -options.feasibility_tolerance) t.rhs(i) = 0.0;
    }
    ++iterations;
    if (++since_refactor >= kRefactorInterval) {
      if (refactor(t, original, basis)) reset_costs(t, basis, cost);
      since_refactor = 0;
    }
  }
}

}  // namespace

LPSolution solve_lp(const LPModel& model, const SimplexOptions& options) {
  model.validate();
  const std::size_t n = model.variables();

  // Map every variable onto non-negative structural columns.
  std::vector<VariableMap> maps(n);
  std::vector<StandardRow> rows;
  std::size_t structural = 0;
  std::vector<std::pair<std::size_t, double>> bound_rows;  // (column, upper) rows y <= upper
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = model.lower()[j];
    const double hi = model.upper()[j];
    if (std::isfinite(lo)) {
      maps[j] = {lo, {{structural, 1.0}}};
      if (std::isfinite(hi)) bound_rows.emplace_back(structural, hi - lo);
      ++structural;
    } else if (std::isfinite(hi)) {
      maps[j] = {hi, {{structural, -1.0}}};
      ++structural;
    } else {
      maps[j] = {0.0, {{structural, 1.0}, {structural + 1, -1.0}}};
      structural += 2;
    }
  }

  for (const auto& c : model.constraints()) {
    StandardRow row{std::vector<double>(structural, 0.0), c.relation, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = c.coefficients[j];
      if (a == 0.0) continue;
      row.b -= a * maps[j].offset;
      for (auto [col, sign] : maps[j].columns) row.a[col] += a * sign;
    }
    rows.push_back(std::move(row));
  }
  for (auto [col, cap] : bound_rows) {
    StandardRow row{std::vector<double>(structural, 0.0), Relation::kLessEqual, cap};
    row.a[col] = 1.0;
    rows.push_back(std::move(row));
  }

  // Normalize rows and make every right-hand side non-negative.
  for (auto& row : rows) {
    double scale = 0.0;
    for (double a : row.a) scale = std::max(scale, std::abs(a));
    if (scale == 0.0) {
      const bool ok = (row.relation == Relation::kLessEqual && row.b >= -options.feasibility_tolerance) ||
                      (row.relation == Relation::kGreaterEqual && row.b <= options.feasibility_tolerance) ||
                      (row.relation == Relation::kEqual && std::abs(row.b) <= options.feasibility_tolerance);
      if (!ok) throw LPError(LPStatus::kInfeasible);
      row.relation = Relation::kLessEqual;
      row.b = 0.0;
      continue;
    }
    for (double& a : row.a) a /= scale;
    row.b /= scale;
    if (row.b < 0.0) {
      for (double& a : row.a) a = -a;
      row.b = -row.b;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
  }

  // Column layout: structural | slack/surplus | artificial.
  const std::size_t m = rows.size();
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (const auto& row : rows) {
    if (row.relation != Relation::kEqual) ++slack_count;
    if (row.relation != Relation::kLessEqual) ++artificial_count;
  }
  const std::size_t first_slack = structural;
  const std::size_t first_artificial = structural + slack_count;
  const std::size_t cols = first_artificial + artificial_count;

  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = first_slack;
  std::size_t next_artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = rows[i];
    for (std::size_t j = 0; j < structural; ++j) t.at(i, j) = row.a[j];
    t.rhs(i) = row.b;
    switch (row.relation) {
      case Relation::kLessEqual:
        t.at(i, next_slack) = 1.0;
        basis[i] = next_slack++;
        break;
      case Relation::kGreaterEqual:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_artificial) = 1.0;
        basis[i] = next_artificial++;
        break;
      case Relation::kEqual:
        t.at(i, next_artificial) = 1.0;
        basis[i] = next_artificial++;
        break;
    }
  }

  const Tableau original = t;
  std::size_t iterations = 0;
  auto is_artificial = [&](std::size_t col) { return col >= first_artificial; };

  if (artificial_count > 0) {
    // Phase 1: minimize the sum of artificial variables.
    std::vector<double> phase1_cost(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1_cost[j] = 1.0;
    const std::vector<bool> allowed(cols, true);
    const auto phase = run_phase(t, original, basis, phase1_cost, allowed, options, iterations);
    if (phase == PhaseResult::kIterationLimit) throw LPError(LPStatus::kIterationLimit);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (is_artificial(basis[i])) infeasibility += std::max(t.rhs(i), 0.0);
    }
    if (infeasibility > options.feasibility_tolerance) throw LPError(LPStatus::kInfeasible);

    // Drive zero-level artificials out of the basis where a non-artificial
    // column can replace them. The rest sit on redundant rows and stay basic
    // at zero; phase 2 never pivots on those rows.
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (!is_artificial(basis[i])) continue;
      std::size_t entering = first_artificial;
      double best = options.pivot_tolerance;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > best) {
          entering = j;
          best = std::abs(t.at(i, j));
        }
      }
      if (entering == first_artificial) continue;
      t.pivot(i, entering);
      basis[i] = entering;
    }
    if (refactor(t, original, basis)) {
      for (std::size_t i = 0; i < t.rows(); ++i) {
        if (is_artificial(basis[i])) t.rhs(i) = 0.0;
      }
    }
  }

  // Phase 2 costs over structural columns.
  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (auto [col, sign] : maps[j].columns) cost[col] += model.objective()[j] * sign;
  }
  std::vector<bool> allowed(cols, true);
  for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  const auto phase = run_phase(t, original, basis, cost, allowed, options, iterations);
  if (phase == PhaseResult::kIterationLimit) throw LPError(LPStatus::kIterationLimit);
  if (phase == PhaseResult::kUnbounded) throw LPError(LPStatus::kUnbounded);

  std::vector<double> y(cols, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) y[basis[i]] = std::max(t.rhs(i), 0.0);

  LPSolution solution;
  solution.iterations = iterations;
  solution.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = maps[j].offset;
    for (auto [col, sign] : maps[j].columns) v += sign * y[col];
    solution.x[j] = v;
  }
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.objective += model.objective()[j] * solution.x[j];
  return solution;
}

}  // namespace interp_lab
