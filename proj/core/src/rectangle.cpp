#include "interp_lab/rectangle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace interp_lab {

// ---------------------------------------------------------------------------
// ExponentConfig

ExponentConfig::ExponentConfig(double q, std::vector<Exponent> p) : q_(q), p_(std::move(p)) {
  if (!(q_ > 0.0) || !std::isfinite(q_)) throw std::invalid_argument("q must be positive and finite");
  for (const auto& pj : p_) {
    if (!pj.is_infinite() && !(pj.value() > q_)) {
      throw std::invalid_argument("every p_j must exceed q (got p=" + pj.to_string() + ")");
    }
  }
}

double ExponentConfig::alpha(std::size_t axis) const { return 1.0 / q_ - p_.at(axis).inverse(); }

std::vector<double> ExponentConfig::alphas() const {
  std::vector<double> out;
  for (std::size_t j = 0; j < p_.size(); ++j) out.push_back(alpha(j));
  return out;
}

namespace {

using MaskTuple = std::vector<std::uint64_t>;

struct Best {
  double value = -1.0;
  MaskTuple tuple;

  void offer(double candidate, const MaskTuple& masks) {
    if (candidate > value || (candidate == value && masks < tuple)) {
      value = candidate;
      tuple = masks;
    }
  }
};

std::vector<double> weighted_magnitudes(const KernelMatrix& f, double q) {
  const auto weights = f.cell_weights();
  const auto entries = f.entries();
  std::vector<double> h(f.cells());
  for (std::size_t c = 0; c < h.size(); ++c) {
    const double a = std::abs(entries[c]);
    h[c] = (q == 1.0 ? a : std::pow(a, q)) * weights[c];
  }
  return h;
}

RectangleSup finish(const KernelMatrix& f, const Best& best) {
  RectangleSup out;
  out.value = std::max(best.value, 0.0);
  for (std::size_t axis = 0; axis < best.tuple.size(); ++axis) {
    out.argmax.push_back(SubsetMask::from_bits(best.tuple[axis], f.extent(axis)));
  }
  return out;
}

template <class Denominator>
RectangleSup sweep_enumerate(const KernelMatrix& f, double q, Denominator& den, std::size_t limit) {
  const std::size_t rank = f.rank();
  for (std::size_t axis = 0; axis < rank; ++axis) require_enumerable(f.extent(axis), limit);

  const auto h = weighted_magnitudes(f, q);
  std::vector<std::vector<double>> measure_tables;
  std::vector<std::vector<std::size_t>> coords;
  for (std::size_t axis = 0; axis < rank; ++axis) {
    measure_tables.push_back(subset_measure_table(f.product().factor(axis)));
    coords.push_back(f.axis_coordinates(axis));
  }

  const std::size_t n0 = f.extent(0);
  const std::uint64_t count0 = std::uint64_t{1} << n0;
  std::vector<double> row(n0);
  std::vector<double> sums(count0);
  std::vector<double> measures(rank);
  MaskTuple tuple(rank, 1);
  Best best;

  while (true) {
    // Restricted axis-0 masses for the current outer masks.
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t c = 0; c < h.size(); ++c) {
      bool inside = true;
      for (std::size_t axis = 1; axis < rank && inside; ++axis) inside = (tuple[axis] >> coords[axis][c]) & 1U;
      if (inside) row[coords[0][c]] += h[c];
    }
    for (std::size_t axis = 1; axis < rank; ++axis) measures[axis] = measure_tables[axis][tuple[axis]];

    sums[0] = 0.0;
    for (std::uint64_t m = 1; m < count0; ++m) {
      const std::uint64_t low = m & (~m + 1);
      sums[m] = sums[m ^ low] + row[static_cast<std::size_t>(std::countr_zero(low))];
      measures[0] = measure_tables[0][m];
      const double numerator = q == 1.0 ? sums[m] : std::pow(sums[m], 1.0 / q);
      tuple[0] = m;
      best.offer(numerator / den(measures), tuple);
    }

    // Odometer over the outer axes, each ranging over nonempty masks.
    std::size_t axis = 1;
    for (; axis < rank; ++axis) {
      if (++tuple[axis] < (std::uint64_t{1} << f.extent(axis))) break;
      tuple[axis] = 1;
    }
    if (axis == rank) break;
  }
  return finish(f, best);
}

template <class Denominator>
RectangleSup sweep_sorted(const KernelMatrix& f, double q, Denominator& den, std::size_t sorted_axis,
                          std::size_t limit) {
  const std::size_t outer_axis = 1 - sorted_axis;
  const auto& sorted_space = f.product().factor(sorted_axis);
  if (!sorted_space.uniform()) throw std::invalid_argument("sorted fast path requires an equal-weight axis");
  require_enumerable(f.extent(outer_axis), limit);

  const auto h = weighted_magnitudes(f, q);
  const auto outer_table = subset_measure_table(f.product().factor(outer_axis));
  const std::size_t ns = f.extent(sorted_axis);
  const std::size_t no = f.extent(outer_axis);
  const double w = sorted_space.weight(0);
  auto cell = [&](std::size_t s, std::size_t o) { return sorted_axis == 0 ? h[s * no + o] : h[o * ns + s]; };

  std::vector<double> mass(ns);
  std::vector<std::size_t> order(ns);
  std::vector<double> measures(2);
  MaskTuple tuple(2, 0);
  Best best;
  for (std::uint64_t mo = 1; mo < (std::uint64_t{1} << no); ++mo) {
    for (std::size_t s = 0; s < ns; ++s) {
      double total = 0.0;
      for (std::size_t o = 0; o < no; ++o) {
        if ((mo >> o) & 1U) total += cell(s, o);
      }
      mass[s] = total;
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
    measures[outer_axis] = outer_table[mo];
    tuple[outer_axis] = mo;
    double prefix = 0.0;
    std::uint64_t ms = 0;
    for (std::size_t k = 0; k < ns; ++k) {
      prefix += mass[order[k]];
      ms |= std::uint64_t{1} << order[k];
      measures[sorted_axis] = w * static_cast<double>(k + 1);
      const double numerator = q == 1.0 ? prefix : std::pow(prefix, 1.0 / q);
      tuple[sorted_axis] = ms;
      best.offer(numerator / den(measures), tuple);
    }
  }
  return finish(f, best);
}

template <class Denominator>
RectangleSup sweep(const KernelMatrix& f, double q, Denominator den, const RectOptions& options) {
  if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("q must be positive and finite");
  for (std::size_t axis = 0; axis < f.rank(); ++axis) {
    if (f.extent(axis) == 0) return {};
  }
  auto uniform_axis = [&]() -> int {
    if (f.rank() != 2) return -1;
    if (f.product().factor(0).uniform()) return 0;
    if (f.product().factor(1).uniform()) return 1;
    return -1;
  };
  switch (options.method) {
    case RectMethod::kEnumerate:
      return sweep_enumerate(f, q, den, options.limit);
    case RectMethod::kSortedFastPath: {
      const int axis = uniform_axis();
      if (axis < 0) throw std::invalid_argument("sorted fast path needs a two-axis kernel with an equal-weight axis");
      return sweep_sorted(f, q, den, static_cast<std::size_t>(axis), options.limit);
    }
    case RectMethod::kAuto:
    default: {
      const int axis = uniform_axis();
      if (axis < 0) return sweep_enumerate(f, q, den, options.limit);
      return sweep_sorted(f, q, den, static_cast<std::size_t>(axis), options.limit);
    }
  }
}

void require_axes(const KernelMatrix& f, std::size_t got, const char* what) {
  if (got != f.rank()) {
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(got) + " entries for a rank-" +
                                std::to_string(f.rank()) + " kernel");
  }
}

void require_scales(std::span<const double> scales) {
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("scales must be positive and finite");
  }
}

}  // namespace

RectangleSup rect_sup(const KernelMatrix& f, double q, std::span<const double> alphas,
                      std::span<const double> scales, const RectOptions& options) {
  require_axes(f, alphas.size(), "alphas");
  require_axes(f, scales.size(), "scales");
  require_scales(scales);
  for (double a : alphas) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("alphas must be finite and non-negative");
  }
  std::vector<double> a(alphas.begin(), alphas.end());
  std::vector<double> inv_scale;
  for (double s : scales) inv_scale.push_back(1.0 / s);
  auto den = [&](std::span<const double> measures) {
    double total = 0.0;
    for (std::size_t j = 0; j < measures.size(); ++j) {
      const double power = a[j] == 1.0 ? measures[j] : std::pow(measures[j], a[j]);
      total += inv_scale[j] * power;
    }
    return total;
  };
  return sweep(f, q, den, options);
}

RectangleSup gauge_rect_sup(const KernelMatrix& f, double q, std::span<const GaugeFunction> gauges,
                            std::span<const double> scales, const RectOptions& options) {
  require_axes(f, gauges.size(), "gauges");
  require_axes(f, scales.size(), "scales");
  require_scales(scales);
  std::vector<double> inv_scale;
  for (double s : scales) inv_scale.push_back(1.0 / s);
  auto den = [&](std::span<const double> measures) {
    double total = 0.0;
    for (std::size_t j = 0; j < measures.size(); ++j) total += inv_scale[j] * gauges[j](measures[j]);
    return total;
  };
  return sweep(f, q, den, options);
}

RectangleSup product_rect_sup(const KernelMatrix& f, double q, std::span<const double> powers,
                              const RectOptions& options) {
  require_axes(f, powers.size(), "powers");
  std::vector<double> e(powers.begin(), powers.end());
  auto den = [&](std::span<const double> measures) {
    double total = 1.0;
    for (std::size_t j = 0; j < measures.size(); ++j) total *= std::pow(measures[j], e[j]);
    return total;
  };
  return sweep(f, q, den, options);
}

RectangleSup k_lower_certificate(const KernelMatrix& f, const ExponentConfig& config, double t,
                                 const RectOptions& options) {
  if (f.rank() != 2 || config.axes() != 2) throw std::invalid_argument("k_t is defined for two-axis kernels");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive and finite");
  const auto alphas = config.alphas();
  const double scales[2] = {1.0, t};
  return rect_sup(f, config.q(), alphas, scales, options);
}

}  // namespace interp_lab
