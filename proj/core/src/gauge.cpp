#include "interp_lab/gauge.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace interp_lab {

namespace {

constexpr double kSlopeSlack = 1e-12;

}  // namespace

GaugeFunction::GaugeFunction(Power power) : kind_(power) {
  if (!(power.gamma >= 0.0 && power.gamma <= 1.0)) throw std::invalid_argument("power gauge exponent must lie in [0, 1]");
}

GaugeFunction::GaugeFunction(PiecewiseLinear pwl) : kind_(pwl) {
  const auto& bp = pwl.breakpoints;
  if (bp.size() < 2) throw std::invalid_argument("piecewise-linear gauge needs at least two breakpoints");
  if (bp.front().first != 0.0 || bp.front().second != 0.0) {
    throw std::invalid_argument("piecewise-linear gauge must start at (0, 0)");
  }
  double previous_slope = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < bp.size(); ++k) {
    const double dx = bp[k].first - bp[k - 1].first;
    const double dy = bp[k].second - bp[k - 1].second;
    if (!std::isfinite(dx) || !std::isfinite(dy) || !(dx > 0.0)) {
      throw std::invalid_argument("gauge breakpoints must have strictly increasing finite x");
    }
    const double slope = dy / dx;
    if (!(slope > 0.0)) throw std::invalid_argument("gauge must be strictly increasing between breakpoints");
    if (slope > previous_slope * (1.0 + kSlopeSlack)) throw std::invalid_argument("gauge must be concave");
    previous_slope = slope;
  }
  if (!(pwl.tail_slope >= 0.0) || pwl.tail_slope > previous_slope * (1.0 + kSlopeSlack)) {
    throw std::invalid_argument("gauge tail slope must lie in [0, last slope]");
  }
}

double GaugeFunction::operator()(double x) const {
  if (x < 0.0) throw std::domain_error("gauge evaluated at negative measure");
  if (const auto* power = std::get_if<Power>(&kind_)) {
    if (x == 0.0) return 0.0;
    if (power->gamma == 1.0) return x;
    if (power->gamma == 0.0) return 1.0;
    return std::pow(x, power->gamma);
  }
  const auto& pwl = std::get<PiecewiseLinear>(kind_);
  const auto& bp = pwl.breakpoints;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    if (x <= bp[k].first) {
      const double lambda = (x - bp[k - 1].first) / (bp[k].first - bp[k - 1].first);
      return bp[k - 1].second + lambda * (bp[k].second - bp[k - 1].second);
    }
  }
  return bp.back().second + pwl.tail_slope * (x - bp.back().first);
}

std::string GaugeFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* power = std::get_if<Power>(&kind_)) {
    os << "power(" << power->gamma << ")";
    return os.str();
  }
  const auto& pwl = std::get<PiecewiseLinear>(kind_);
  os << "pwl[";
  for (std::size_t k = 0; k < pwl.breakpoints.size(); ++k) {
    if (k) os << ",";
    os << "(" << pwl.breakpoints[k].first << "," << pwl.breakpoints[k].second << ")";
  }
  os << "] tail " << pwl.tail_slope;
  return os.str();
}

}  // namespace interp_lab
