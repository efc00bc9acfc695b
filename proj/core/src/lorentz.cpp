#include "interp_lab/lorentz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace interp_lab {

namespace {

void require_matching(const FiniteMeasureSpace& mu, std::span<const double> f) {
  if (f.size() != mu.size()) {
    throw std::invalid_argument("function has " + std::to_string(f.size()) + " values, space has " +
                                std::to_string(mu.size()) + " atoms");
  }
}

void require_norm_exponent(Exponent p) {
  if (p.value() < 1.0) throw std::domain_error("exponent must be >= 1 for this norm, got " + p.to_string());
}

// Atom indices sorted by decreasing |f| (stable, so ties keep index order).
std::vector<std::size_t> order_by_magnitude(std::span<const double> f) {
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });
  return order;
}

double sorted_gauge_sup(const FiniteMeasureSpace& mu, std::span<const double> f, const GaugeFunction& gauge) {
  if (!mu.uniform()) throw std::invalid_argument("sorted top-k evaluation requires equal weights");
  if (mu.size() == 0) return 0.0;
  const double w = mu.weight(0);
  const auto order = order_by_magnitude(f);
  double prefix = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    prefix += std::abs(f[order[k]]);
    best = std::max(best, w * prefix / gauge(w * static_cast<double>(k + 1)));
  }
  return best;
}

double enumerated_gauge_sup(const FiniteMeasureSpace& mu, std::span<const double> f, const GaugeFunction& gauge,
                            std::size_t limit) {
  require_enumerable(mu.size(), limit);
  const std::uint64_t count = std::uint64_t{1} << mu.size();
  std::vector<double> integral(count, 0.0);
  std::vector<double> measure(count, 0.0);
  double best = 0.0;
  for (std::uint64_t m = 1; m < count; ++m) {
    const std::uint64_t low = m & (~m + 1);
    const auto atom = static_cast<std::size_t>(std::countr_zero(low));
    integral[m] = integral[m ^ low] + std::abs(f[atom]) * mu.weight(atom);
    measure[m] = measure[m ^ low] + mu.weight(atom);
    best = std::max(best, integral[m] / gauge(measure[m]));
  }
  return best;
}

// Weights of every axis except `axis`, multiplied per cell.
std::vector<double> complementary_weights(const KernelMatrix& f, std::size_t axis) {
  std::vector<double> w(f.cells(), 1.0);
  for (std::size_t a = 0; a < f.rank(); ++a) {
    if (a == axis) continue;
    const auto coords = f.axis_coordinates(a);
    const auto weights = f.product().factor(a).weights();
    for (std::size_t c = 0; c < w.size(); ++c) w[c] *= weights[coords[c]];
  }
  return w;
}

}  // namespace

GaugeFunction bracket_gauge(Exponent p) {
  require_norm_exponent(p);
  return GaugeFunction::power(p.inverse_conjugate());
}

double weak_quasinorm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p) {
  require_matching(mu, f);
  if (p.is_infinite()) {
    double best = 0.0;
    for (double v : f) best = std::max(best, std::abs(v));
    return best;
  }
  const auto order = order_by_magnitude(f);
  double best = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    tail += mu.weight(order[k]);
    const double v = std::abs(f[order[k]]);
    // Evaluate once per distinct value, after all atoms with that value joined.
    if (k + 1 < order.size() && std::abs(f[order[k + 1]]) == v) continue;
    best = std::max(best, v * std::pow(tail, p.inverse()));
  }
  return best;
}

double bracket_norm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p, std::size_t limit) {
  require_matching(mu, f);
  const GaugeFunction gauge = bracket_gauge(p);
  if (mu.uniform()) return sorted_gauge_sup(mu, f, gauge);
  return enumerated_gauge_sup(mu, f, gauge, limit);
}

double bracket_norm_enumerated(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p,
                               std::size_t limit) {
  require_matching(mu, f);
  return enumerated_gauge_sup(mu, f, bracket_gauge(p), limit);
}

double bracket_norm_sorted(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p) {
  require_matching(mu, f);
  return sorted_gauge_sup(mu, f, bracket_gauge(p));
}

double bracket_norm_threshold_scan(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p) {
  require_matching(mu, f);
  const GaugeFunction gauge = bracket_gauge(p);
  const auto order = order_by_magnitude(f);
  double integral = 0.0;
  double measure = 0.0;
  double best = 0.0;
  for (std::size_t atom : order) {
    integral += std::abs(f[atom]) * mu.weight(atom);
    measure += mu.weight(atom);
    best = std::max(best, integral / gauge(measure));
  }
  return best;
}

double gauge_bracket_norm(const FiniteMeasureSpace& mu, std::span<const double> f, const GaugeFunction& gauge,
                          std::size_t limit) {
  require_matching(mu, f);
  if (mu.uniform()) return sorted_gauge_sup(mu, f, gauge);
  return enumerated_gauge_sup(mu, f, gauge, limit);
}

double lorentz_p1_norm(const FiniteMeasureSpace& mu, std::span<const double> f, Exponent p) {
  double total = 0.0;
  for (const auto& piece : level_set_decomposition(mu, f, p)) total += piece.coefficient;
  return total;
}

std::vector<LevelPiece> level_set_decomposition(const FiniteMeasureSpace& mu, std::span<const double> f,
                                                Exponent p) {
  require_matching(mu, f);
  std::vector<double> levels;
  levels.reserve(f.size());
  for (double v : f) {
    if (v != 0.0) levels.push_back(std::abs(v));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<LevelPiece> pieces;
  pieces.reserve(levels.size());
  double previous = 0.0;
  for (double v : levels) {
    SubsetMask level_set(mu.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(f[i]) >= v) {
        level_set.insert(i);
        mass += mu.weight(i);
      }
    }
    const double scale = std::pow(mass, p.inverse());
    pieces.push_back({(v - previous) * scale, std::move(level_set), 1.0 / scale});
    previous = v;
  }
  return pieces;
}

std::vector<double> reconstruct(std::span<const LevelPiece> pieces, std::size_t atoms) {
  std::vector<double> out(atoms, 0.0);
  for (const auto& piece : pieces) {
    for (std::size_t i : piece.level_set.indices()) out.at(i) += piece.coefficient * piece.height;
  }
  return out;
}

std::vector<double> fiber_masses(const KernelMatrix& f, std::size_t axis, double q) {
  if (axis >= f.rank()) throw std::out_of_range("axis out of range");
  if (!(q > 0.0)) throw std::domain_error("fiber exponent q must be positive");
  const auto coords = f.axis_coordinates(axis);
  const auto weights = complementary_weights(f, axis);
  std::vector<double> r(f.extent(axis), 0.0);
  const auto entries = f.entries();
  for (std::size_t c = 0; c < f.cells(); ++c) {
    const double magnitude = q == 1.0 ? std::abs(entries[c]) : std::pow(std::abs(entries[c]), q);
    r[coords[c]] += magnitude * weights[c];
  }
  return r;
}

double mixed_weak_norm(const KernelMatrix& f, std::size_t axis, Exponent p, double q, std::size_t limit) {
  if (!(q > 0.0)) throw std::domain_error("fiber exponent q must be positive");
  if (!p.is_infinite() && !(p.value() > q)) throw std::domain_error("mixed weak norm requires q < p");
  const auto r = fiber_masses(f, axis, q);
  const double inner = bracket_norm(f.product().factor(axis), r, p.divided_by(q), limit);
  return q == 1.0 ? inner : std::pow(inner, 1.0 / q);
}

double mixed_gauge_norm(const KernelMatrix& f, std::size_t axis, const GaugeFunction& gauge, std::size_t limit) {
  const auto r = fiber_masses(f, axis, 1.0);
  return gauge_bracket_norm(f.product().factor(axis), r, gauge, limit);
}

}  // namespace interp_lab
