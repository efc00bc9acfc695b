#include "interp_lab/kfun.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "interp_lab/error.hpp"
#include "interp_lab/lorentz.hpp"
#include "interp_lab/rectangle.hpp"

namespace interp_lab {

namespace {

void require_matching(std::span<const double> r, const FiniteMeasureSpace& space) {
  if (r.size() != space.size()) throw std::invalid_argument("separation input does not match space");
}

// Every violated top-k set (equal weights) or the single most violated set.
std::vector<ViolatedSubset> violated_subsets(std::span<const double> r, const FiniteMeasureSpace& space, double s,
                                             const GaugeFunction& gauge, double tolerance, std::size_t limit) {
  require_matching(r, space);
  std::vector<ViolatedSubset> out;
  const std::size_t n = space.size();
  if (n == 0) return out;
  if (space.uniform()) {
    const double w = space.weight(0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });
    SubsetMask mask(n);
    double prefix = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      prefix += r[order[k]] * w;
      mask.insert(order[k]);
      const double violation = prefix - s * gauge(w * static_cast<double>(k + 1));
      if (violation > tolerance) out.push_back({mask, violation});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ViolatedSubset& a, const ViolatedSubset& b) { return a.violation > b.violation; });
    return out;
  }
  require_enumerable(n, limit);
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> integral(count, 0.0);
  std::vector<double> measure(count, 0.0);
  double best = tolerance;
  std::uint64_t best_mask = 0;
  for (std::uint64_t m = 1; m < count; ++m) {
    const std::uint64_t low = m & (~m + 1);
    const auto atom = static_cast<std::size_t>(std::countr_zero(low));
    integral[m] = integral[m ^ low] + r[atom] * space.weight(atom);
    measure[m] = measure[m ^ low] + space.weight(atom);
    const double violation = integral[m] - s * gauge(measure[m]);
    if (violation > best) {
      best = violation;
      best_mask = m;
    }
  }
  if (best_mask != 0) out.push_back({SubsetMask::from_bits(best_mask, n), best});
  return out;
}

// r(a) = sum_{e -> a} cell_weight(e) part(e) / mu(a)
std::vector<double> quotient_density(const SplitProblem& problem, std::size_t axis, std::span<const double> part) {
  const auto& ax = problem.axes[axis];
  std::vector<double> r(ax.space.size(), 0.0);
  for (std::size_t e = 0; e < part.size(); ++e) r[ax.atom_of[e]] += problem.cell_weight[e] * part[e];
  for (std::size_t a = 0; a < r.size(); ++a) r[a] /= ax.space.weight(a);
  return r;
}

void validate(const SplitProblem& problem) {
  const std::size_t cells = problem.magnitude.size();
  if (problem.cell_weight.size() != cells) throw std::invalid_argument("cell weights do not match magnitudes");
  if (problem.axes.empty()) throw std::invalid_argument("split problem needs at least one axis");
  for (std::size_t e = 0; e < cells; ++e) {
    if (!(problem.cell_weight[e] > 0.0) || !std::isfinite(problem.cell_weight[e])) {
      throw std::invalid_argument("cell weights must be positive and finite");
    }
    if (!(problem.magnitude[e] >= 0.0) || !std::isfinite(problem.magnitude[e])) {
      throw std::invalid_argument("magnitudes must be finite and non-negative");
    }
  }
  for (const auto& ax : problem.axes) {
    if (ax.atom_of.size() != cells) throw std::invalid_argument("axis map does not cover every cell");
    for (std::size_t a : ax.atom_of) {
      if (a >= ax.space.size()) throw std::out_of_range("axis map points outside its space");
    }
    if (!(ax.weight > 0.0) || !std::isfinite(ax.weight)) throw std::invalid_argument("axis weights must be positive");
  }
}

class SplitProgram {
 public:
  SplitProgram(const SplitProblem& problem, std::span<const double> magnitude)
      : problem_(problem), magnitude_(magnitude), axes_(problem.axes.size()) {
    for (std::size_t e = 0; e < magnitude.size(); ++e) {
      if (magnitude[e] > 0.0) active_.push_back(e);
    }
    // Variables: g_k(e) for k < axes-1 over active cells, then s_j.
    for (std::size_t k = 0; k + 1 < axes_; ++k) {
      for (std::size_t e : active_) model_.add_variable(0.0, 0.0, magnitude[e]);
    }
    for (std::size_t j = 0; j < axes_; ++j) model_.add_variable(problem.axes[j].weight, 0.0);
    if (axes_ >= 3) {
      for (std::size_t idx = 0; idx < active_.size(); ++idx) {
        std::vector<double> row(model_.variables(), 0.0);
        for (std::size_t k = 0; k + 1 < axes_; ++k) row[var(k, idx)] = 1.0;
        model_.add_constraint(std::move(row), Relation::kLessEqual, magnitude[active_[idx]]);
      }
    }
    added_.resize(axes_);
  }

  // Returns false when the set was already present.
  bool add_cut(std::size_t axis, const SubsetMask& mask) {
    if (!added_[axis].insert(mask).second) return false;
    const auto& ax = problem_.axes[axis];
    std::vector<double> row(model_.variables(), 0.0);
    double rhs = 0.0;
    for (std::size_t idx = 0; idx < active_.size(); ++idx) {
      const std::size_t e = active_[idx];
      if (!mask.contains(ax.atom_of[e])) continue;
      const double w = problem_.cell_weight[e];
      if (axis + 1 < axes_) {
        row[var(axis, idx)] += w;
      } else {
        for (std::size_t k = 0; k + 1 < axes_; ++k) row[var(k, idx)] -= w;
        rhs -= w * magnitude_[e];
      }
    }
    row[epigraph(axis)] = -ax.gauge(ax.space.measure(mask));
    model_.add_constraint(std::move(row), Relation::kLessEqual, rhs);
    return true;
  }

  LPSolution solve(const SimplexOptions& options) const { return solve_lp(model_, options); }

  // Non-negative parts summing to the magnitude exactly.
  std::vector<std::vector<double>> parts(const LPSolution& solution) const {
    std::vector<std::vector<double>> g(axes_, std::vector<double>(magnitude_.size(), 0.0));
    for (std::size_t idx = 0; idx < active_.size(); ++idx) {
      const std::size_t e = active_[idx];
      double sum = 0.0;
      for (std::size_t k = 0; k + 1 < axes_; ++k) {
        g[k][e] = std::clamp(solution.x[var(k, idx)], 0.0, magnitude_[e]);
        sum += g[k][e];
      }
      if (sum > magnitude_[e]) {
        const double shrink = magnitude_[e] / sum;
        sum = 0.0;
        for (std::size_t k = 0; k + 1 < axes_; ++k) {
          g[k][e] *= shrink;
          sum += g[k][e];
        }
      }
      g[axes_ - 1][e] = std::max(magnitude_[e] - sum, 0.0);
    }
    return g;
  }

  double epigraph_value(const LPSolution& solution, std::size_t axis) const { return solution.x[epigraph(axis)]; }
  std::size_t rows() const { return model_.rows(); }

 private:
  std::size_t var(std::size_t k, std::size_t idx) const { return k * active_.size() + idx; }
  std::size_t epigraph(std::size_t axis) const { return (axes_ - 1) * active_.size() + axis; }

  const SplitProblem& problem_;
  std::span<const double> magnitude_;
  std::size_t axes_;
  std::vector<std::size_t> active_;
  LPModel model_;
  std::vector<std::set<SubsetMask>> added_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Separation

std::optional<ViolatedSubset> separation_worst_subset(std::span<const double> r, const FiniteMeasureSpace& space,
                                                      double s, const GaugeFunction& gauge, double tolerance,
                                                      std::size_t limit) {
  for (double v : r) {
    if (!(v >= 0.0)) throw std::invalid_argument("separation requires a non-negative density");
  }
  auto violated = violated_subsets(r, space, s, gauge, tolerance, limit);
  if (violated.empty()) return std::nullopt;
  return violated.front();
}

std::optional<ViolatedSubset> separation_worst_subset(std::span<const double> r, const FiniteMeasureSpace& space,
                                                      double s, Exponent p, double tolerance, std::size_t limit) {
  return separation_worst_subset(r, space, s, bracket_gauge(p), tolerance, limit);
}

// ---------------------------------------------------------------------------
// Split programs

double split_part_norm(const SplitProblem& problem, std::size_t axis, std::span<const double> part,
                       std::size_t limit) {
  const auto r = quotient_density(problem, axis, part);
  return gauge_bracket_norm(problem.axes.at(axis).space, r, problem.axes[axis].gauge, limit);
}

SplitSolution solve_split(const SplitProblem& problem, const CuttingPlaneOptions& options) {
  validate(problem);
  const std::size_t axes = problem.axes.size();
  const std::size_t cells = problem.magnitude.size();

  SplitSolution out;
  out.parts.assign(axes, std::vector<double>(cells, 0.0));
  out.epigraph.assign(axes, 0.0);
  out.norms.assign(axes, 0.0);

  const double scale = cells == 0 ? 0.0 : *std::max_element(problem.magnitude.begin(), problem.magnitude.end());
  if (scale == 0.0) return out;
  if (axes == 1) {
    out.parts[0] = problem.magnitude;
    out.norms[0] = split_part_norm(problem, 0, out.parts[0], options.limit);
    out.epigraph[0] = out.norms[0];
    out.total = out.lp_objective = problem.axes[0].weight * out.norms[0];
    return out;
  }

  // Work on |f| / max|f| so the violation tolerance is relative.
  std::vector<double> magnitude(problem.magnitude);
  for (double& v : magnitude) v /= scale;

  SplitProgram program(problem, magnitude);
  for (std::size_t j = 0; j < axes; ++j) {
    const std::size_t n = problem.axes[j].space.size();
    if (options.materialize_all) {
      require_enumerable(n, options.limit);
      for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) program.add_cut(j, SubsetMask::from_bits(m, n));
    } else {
      for (std::size_t a = 0; a < n; ++a) {
        SubsetMask mask(n);
        mask.insert(a);
        program.add_cut(j, mask);
      }
    }
  }

  LPSolution solution;
  std::vector<std::vector<double>> parts;
  for (std::size_t round = 0;; ++round) {
    if (round >= options.max_rounds) throw LPError(LPStatus::kIterationLimit);
    solution = program.solve(options.simplex);
    parts = program.parts(solution);
    ++out.rounds;
    bool added = false;
    for (std::size_t j = 0; j < axes; ++j) {
      const auto& ax = problem.axes[j];
      const auto r = quotient_density(problem, j, parts[j]);
      for (const auto& cut : violated_subsets(r, ax.space, program.epigraph_value(solution, j), ax.gauge,
                                              options.violation_tolerance, options.limit)) {
        added = program.add_cut(j, cut.mask) || added;
      }
    }
    if (!added) break;
  }

  out.constraints = program.rows();
  out.lp_objective = solution.objective * scale;
  for (std::size_t j = 0; j < axes; ++j) {
    out.epigraph[j] = program.epigraph_value(solution, j) * scale;
    for (std::size_t e = 0; e < cells; ++e) out.parts[j][e] = parts[j][e] * scale;
    out.norms[j] = split_part_norm(problem, j, parts[j], options.limit) * scale;
    out.total += problem.axes[j].weight * out.norms[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// K-functionals

namespace {

SplitProblem product_split(const KernelMatrix& f, std::span<const double> t, std::span<const GaugeFunction> gauges) {
  SplitProblem problem;
  problem.cell_weight = f.cell_weights();
  problem.magnitude.reserve(f.cells());
  for (double v : f.entries()) problem.magnitude.push_back(std::abs(v));
  for (std::size_t j = 0; j < f.rank(); ++j) {
    problem.axes.push_back({f.product().factor(j), f.axis_coordinates(j), gauges[j], t[j]});
  }
  return problem;
}

KernelMatrix signed_part(const KernelMatrix& f, std::span<const double> part) {
  KernelMatrix out(f.product());
  const auto src = f.entries();
  auto dst = out.entries();
  for (std::size_t e = 0; e < dst.size(); ++e) dst[e] = src[e] < 0.0 ? -part[e] : part[e];
  return out;
}

void require_weights(const KernelMatrix& f, std::span<const double> t, std::size_t count) {
  if (f.rank() < 2) throw std::invalid_argument("K-functionals need at least two axes");
  if (t.size() != f.rank() || count != f.rank()) throw std::invalid_argument("one weight and one exponent per axis");
  for (double w : t) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("K-functional weights must lie in (0, inf)");
  }
}

DecompositionResult decompose(const KernelMatrix& f, std::span<const double> t, std::span<const GaugeFunction> gauges,
                              const CuttingPlaneOptions& options) {
  const SplitProblem problem = product_split(f, t, gauges);
  const SplitSolution split = solve_split(problem, options);
  DecompositionResult out;
  out.weights.assign(t.begin(), t.end());
  out.lp_objective = split.lp_objective;
  out.rounds = split.rounds;
  out.constraints = split.constraints;
  for (std::size_t j = 0; j < f.rank(); ++j) {
    out.summands.push_back(signed_part(f, split.parts[j]));
    out.norms.push_back(mixed_gauge_norm(out.summands.back(), j, gauges[j], options.limit));
    out.total += t[j] * out.norms.back();
  }
  try {
    out.certificate = gauge_rect_sup(f, 1.0, gauges, t, {RectMethod::kAuto, options.limit}).value;
  } catch (const EnumerationLimitError&) {
    out.certificate.reset();
  }
  return out;
}

}  // namespace

DecompositionResult k_exact(const KernelMatrix& f, double t, Exponent p1, Exponent p2,
                            const CuttingPlaneOptions& options) {
  if (f.rank() != 2) throw std::invalid_argument("k_exact needs a two-axis kernel");
  const Exponent p[2] = {p1, p2};
  const double weights[2] = {1.0, t};
  return k_multi(f, weights, p, options);
}

DecompositionResult k_multi(const KernelMatrix& f, std::span<const double> t, std::span<const Exponent> p,
                            const CuttingPlaneOptions& options) {
  require_weights(f, t, p.size());
  std::vector<GaugeFunction> gauges;
  for (const auto& pj : p) {
    if (!(pj.value() > 1.0)) throw std::domain_error("K-functional exponents must lie in (1, inf]");
    gauges.push_back(bracket_gauge(pj));
  }
  return decompose(f, t, gauges, options);
}

DecompositionResult k_gauge(const KernelMatrix& f, std::span<const double> t, std::span<const GaugeFunction> gauges,
                            const CuttingPlaneOptions& options) {
  require_weights(f, t, gauges.size());
  return decompose(f, t, gauges, options);
}

KBracket k_bracket_general_q(const KernelMatrix& f, double t, double q, Exponent p1, Exponent p2,
                             const CuttingPlaneOptions& options) {
  if (f.rank() != 2) throw std::invalid_argument("k_bracket_general_q needs a two-axis kernel");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must lie in (0, inf)");
  const ExponentConfig config(q, {p1, p2});

  KBracket out;
  out.k_t = k_lower_certificate(f, config, t, {RectMethod::kAuto, options.limit}).value;
  // Quasi-triangle loss for q < 1/2: M_q <= M_{1/2} up to 2^{1/q - 2}.
  out.lower_factor = q >= 0.5 ? 1.0 : std::pow(2.0, -(1.0 / q - 2.0));
  out.lower = out.lower_factor * out.k_t;

  auto cost = [&](const KernelMatrix& f1, const KernelMatrix& f2, double& n1, double& n2) {
    n1 = mixed_weak_norm(f1, 0, p1, q, options.limit);
    n2 = mixed_weak_norm(f2, 1, p2, q, options.limit);
    return n1 + t * n2;
  };
  auto consider = [&](KernelMatrix f1, KernelMatrix f2, std::size_t rounds) {
    double n1 = 0.0;
    double n2 = 0.0;
    const double value = cost(f1, f2, n1, n2);
    if (!out.decomposition.summands.empty() && value >= out.upper) return;
    out.upper = value;
    out.decomposition.summands = {std::move(f1), std::move(f2)};
    out.decomposition.norms = {n1, n2};
    out.decomposition.weights = {1.0, t};
    out.decomposition.total = value;
    out.decomposition.rounds = rounds;
  };

  const KernelMatrix zero(f.product());
  consider(f, zero, 0);
  consider(zero, f, 0);

  // q = 1 program for |f|^q with exponents p_j / q, rounded to disjoint supports.
  KernelMatrix h(f.product());
  for (std::size_t e = 0; e < f.cells(); ++e) h.entries()[e] = std::pow(std::abs(f.entries()[e]), q);
  const GaugeFunction gauges[2] = {bracket_gauge(p1.divided_by(q)), bracket_gauge(p2.divided_by(q))};
  const double weights[2] = {1.0, std::pow(t, q)};
  const SplitSolution split = solve_split(product_split(h, weights, gauges), options);
  KernelMatrix f1(f.product());
  KernelMatrix f2(f.product());
  for (std::size_t e = 0; e < f.cells(); ++e) {
    if (split.parts[0][e] >= split.parts[1][e]) {
      f1.entries()[e] = f.entries()[e];
    } else {
      f2.entries()[e] = f.entries()[e];
    }
  }
  consider(std::move(f1), std::move(f2), split.rounds);
  out.decomposition.certificate = out.lower;
  return out;
}

// ---------------------------------------------------------------------------
// Duality certificate

DualityReport duality_certificate(const KernelMatrix& f, const KernelMatrix& g, Exponent p1, Exponent p2) {
  if (f.rank() != 2 || g.rank() != 2 || f.shape() != g.shape()) {
    throw std::invalid_argument("duality certificate needs two same-shape two-axis kernels");
  }
  if (!(f.product() == g.product())) throw std::invalid_argument("f and g must live on the same product space");
  const auto& mu1 = f.product().factor(0);
  const auto& mu2 = f.product().factor(1);
  const std::size_t n1 = mu1.size();
  const std::size_t n2 = mu2.size();
  const double a1 = p1.inverse_conjugate();
  const double a2 = p2.inverse_conjugate();

  DualityReport report;
  report.alpha.assign(n1, 0.0);
  report.beta.assign(n2, 0.0);
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double v = std::abs(g(i, j));
      report.alpha[i] = std::max(report.alpha[i], v);
      report.beta[j] = std::max(report.beta[j], v);
    }
  }

  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double w = mu1.weight(i) * mu2.weight(j);
      report.pairing += std::abs(f(i, j) * g(i, j)) * w;
      report.envelope_pairing += std::abs(f(i, j)) * std::min(report.alpha[i], report.beta[j]) * w;
    }
  }

  std::vector<double> levels;
  for (double v : report.alpha) {
    if (v > 0.0) levels.push_back(v);
  }
  for (double v : report.beta) {
    if (v > 0.0) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<double> rebuilt(n1 * n2, 0.0);
  double previous = 0.0;
  for (double level : levels) {
    DualityPiece piece{previous, level, SubsetMask(n1), SubsetMask(n2), 0.0, 0.0};
    for (std::size_t i = 0; i < n1; ++i) {
      if (report.alpha[i] >= level) piece.rows.insert(i);
    }
    for (std::size_t j = 0; j < n2; ++j) {
      if (report.beta[j] >= level) piece.cols.insert(j);
    }
    const double m1 = mu1.measure(piece.rows);
    const double m2 = mu2.measure(piece.cols);
    const double divisor = (m1 > 0.0 ? std::pow(m1, a1) : 0.0) + (m2 > 0.0 ? std::pow(m2, a2) : 0.0);
    const double length = level - previous;
    piece.mass = length * divisor;
    double on_rectangle = 0.0;
    for (std::size_t i : piece.rows.indices()) {
      for (std::size_t j : piece.cols.indices()) {
        on_rectangle += std::abs(f(i, j)) * mu1.weight(i) * mu2.weight(j);
        rebuilt[i * n2 + j] += length;
      }
    }
    piece.integral = divisor > 0.0 ? on_rectangle / divisor : 0.0;
    report.piece_mass += piece.mass;
    report.sup_piece = std::max(report.sup_piece, piece.integral);
    report.pieces.push_back(std::move(piece));
    previous = level;
  }
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double target = std::min(report.alpha[i], report.beta[j]);
      report.reconstruction_error = std::max(report.reconstruction_error, std::abs(rebuilt[i * n2 + j] - target));
    }
  }

  report.lorentz_alpha = lorentz_p1_norm(mu1, report.alpha, p1.conjugate());
  report.lorentz_beta = lorentz_p1_norm(mu2, report.beta, p2.conjugate());
  const double alphas[2] = {a1, a2};
  const double scales[2] = {1.0, 1.0};
  report.rect_bound = rect_sup(f, 1.0, alphas, scales).value;
  report.final_bound = 2.0 * std::max(report.lorentz_alpha, report.lorentz_beta) * report.rect_bound;

  auto leq = [](double a, double b) { return a <= b + 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
  double split_pairing = 0.0;
  for (const auto& piece : report.pieces) split_pairing += piece.mass * piece.integral;
  const double level_scale = levels.empty() ? 1.0 : std::max(1.0, levels.back());
  report.pass = leq(report.pairing, report.envelope_pairing) &&
                std::abs(split_pairing - report.envelope_pairing) <=
                    1e-9 * std::max(1.0, report.envelope_pairing) &&
                leq(report.envelope_pairing, report.piece_mass * report.sup_piece) &&
                std::abs(report.piece_mass - (report.lorentz_alpha + report.lorentz_beta)) <=
                    1e-9 * std::max(1.0, report.piece_mass) &&
                leq(report.sup_piece, report.rect_bound) &&
                leq(report.piece_mass * report.sup_piece, report.final_bound) &&
                report.reconstruction_error <= 1e-12 * level_scale;
  return report;
}

}  // namespace interp_lab
