#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace interp_lab {

/// Concave increasing gauge Phi with Phi(0) = 0, evaluated on set measures.
///
/// Two families are supported:
///  - power: Phi(x) = x^gamma, gamma in [0, 1]. gamma = 0 is the degenerate
///    gauge that equals 1 on every set of positive measure (the L_1 endpoint).
///  - piecewise linear: breakpoints (x_k, y_k) starting at (0, 0) with
///    strictly increasing x, slopes that are positive and non-increasing,
///    extended past the last breakpoint with `tail_slope` (>= 0 and no larger
///    than the last segment slope).
class GaugeFunction {
 public:
  struct Power {
    double gamma;
  };
  struct PiecewiseLinear {
    std::vector<std::pair<double, double>> breakpoints;
    double tail_slope = 0.0;
  };

  /// Identity gauge x -> x.
  GaugeFunction() : GaugeFunction(Power{1.0}) {}
  explicit GaugeFunction(Power power);
  explicit GaugeFunction(PiecewiseLinear pwl);

  static GaugeFunction power(double gamma) { return GaugeFunction(Power{gamma}); }
  static GaugeFunction piecewise_linear(std::vector<std::pair<double, double>> breakpoints, double tail_slope = 0.0) {
    return GaugeFunction(PiecewiseLinear{std::move(breakpoints), tail_slope});
  }

  double operator()(double x) const;

  bool is_power() const noexcept { return std::holds_alternative<Power>(kind_); }
  /// Requires is_power().
  double gamma() const { return std::get<Power>(kind_).gamma; }
  const std::variant<Power, PiecewiseLinear>& kind() const noexcept { return kind_; }

  std::string describe() const;

 private:
  std::variant<Power, PiecewiseLinear> kind_;
};

}  // namespace interp_lab
