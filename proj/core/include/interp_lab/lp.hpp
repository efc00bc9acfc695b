#pragma once

// Dense linear programming: minimize c.x subject to row constraints and
// variable bounds, solved by a two-phase tableau simplex with Bland's rule.

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace interp_lab {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LPConstraint {
  std::vector<double> coefficients;  // one per variable
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

/// Minimization problem. Bounds may be infinite.
class LPModel {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  /// Adds a variable and returns its index; existing rows get a zero coefficient.
  std::size_t add_variable(double cost, double lower = 0.0, double upper = kInfinity);
  void add_constraint(std::vector<double> coefficients, Relation relation, double rhs);

  std::size_t variables() const noexcept { return objective_.size(); }
  std::size_t rows() const noexcept { return constraints_.size(); }
  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<LPConstraint>& constraints() const noexcept { return constraints_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  /// Throws std::invalid_argument on non-finite coefficients or inconsistent sizes.
  void validate() const;

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<LPConstraint> constraints_;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LPStatus status);

class LPError : public std::runtime_error {
 public:
  explicit LPError(LPStatus status) : std::runtime_error("linear program: " + to_string(status)), status_(status) {}
  LPStatus status() const noexcept { return status_; }

 private:
  LPStatus status_;
};

struct SimplexOptions {
  std::size_t iteration_cap = 1'000'000;
  double feasibility_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  double cost_tolerance = 1e-11;
};

struct LPSolution {
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

/// Optimal basic solution; throws LPError when infeasible, unbounded or the
/// iteration cap is reached.
LPSolution solve_lp(const LPModel& model, const SimplexOptions& options = {});

}  // namespace interp_lab
