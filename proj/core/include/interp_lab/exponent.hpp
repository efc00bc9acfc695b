#pragma once

#include <limits>
#include <string>

namespace interp_lab {

/// An integrability exponent p in (0, inf]; infinity is representable.
class Exponent {
 public:
  /// p = infinity.
  Exponent() = default;
  explicit Exponent(double p);

  static Exponent infinity() { return Exponent(); }

  double value() const noexcept { return p_; }
  bool is_infinite() const noexcept { return p_ == std::numeric_limits<double>::infinity(); }

  /// 1/p (0 for p = inf).
  double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / p_; }
  /// 1/p' = 1 - 1/p; requires p >= 1.
  double inverse_conjugate() const;
  /// p' = p/(p-1), with 1' = inf and inf' = 1; requires p >= 1.
  Exponent conjugate() const;
  /// Exponent with 1/result = `inv`; inv in [0, inf).
  static Exponent from_inverse(double inv);

  /// p / c, used to pass between |f|^q and f; c > 0.
  Exponent divided_by(double c) const;

  /// Decimal value or "inf".
  std::string to_string() const;

  bool operator==(const Exponent&) const = default;

 private:
  double p_ = std::numeric_limits<double>::infinity();
};

}  // namespace interp_lab
