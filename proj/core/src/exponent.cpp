#include "interp_lab/exponent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace interp_lab {

Exponent::Exponent(double p) : p_(p) {
  if (std::isnan(p) || !(p > 0.0)) throw std::invalid_argument("exponent must be in (0, inf]");
}

double Exponent::inverse_conjugate() const {
  if (p_ < 1.0) throw std::domain_error("conjugate exponent requires p >= 1");
  return 1.0 - inverse();
}

Exponent Exponent::conjugate() const {
  if (p_ < 1.0) throw std::domain_error("conjugate exponent requires p >= 1");
  if (is_infinite()) return Exponent(1.0);
  if (p_ == 1.0) return infinity();
  return Exponent(p_ / (p_ - 1.0));
}

Exponent Exponent::from_inverse(double inv) {
  if (std::isnan(inv) || inv < 0.0 || std::isinf(inv)) throw std::invalid_argument("inverse exponent must be in [0, inf)");
  if (inv == 0.0) return infinity();
  return Exponent(1.0 / inv);
}

Exponent Exponent::divided_by(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("divisor must be positive and finite");
  if (is_infinite()) return infinity();
  return Exponent(p_ / c);
}

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << p_;
  return os.str();
}

}  // namespace interp_lab
