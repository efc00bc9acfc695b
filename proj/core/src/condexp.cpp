#include "interp_lab/condexp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "interp_lab/lorentz.hpp"

namespace interp_lab {

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t atoms)
    : blocks_(std::move(blocks)), block_of_(atoms, atoms) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw std::invalid_argument("partition block " + std::to_string(b) + " is empty");
    for (std::size_t atom : blocks_[b]) {
      if (atom >= atoms) throw std::out_of_range("partition atom " + std::to_string(atom) + " out of range");
      if (block_of_[atom] != atoms) throw std::invalid_argument("partition blocks overlap at atom " + std::to_string(atom));
      block_of_[atom] = b;
    }
  }
  for (std::size_t atom = 0; atom < atoms; ++atom) {
    if (block_of_[atom] == atoms) throw std::invalid_argument("partition misses atom " + std::to_string(atom));
  }
}

Partition Partition::singletons(std::size_t atoms) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < atoms; ++i) blocks.push_back({i});
  return Partition(std::move(blocks), atoms);
}

Partition Partition::trivial(std::size_t atoms) {
  std::vector<std::size_t> all(atoms);
  for (std::size_t i = 0; i < atoms; ++i) all[i] = i;
  return Partition(atoms == 0 ? std::vector<std::vector<std::size_t>>{} : std::vector<std::vector<std::size_t>>{all},
                   atoms);
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  std::vector<std::size_t> seen;
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t atom = 0; atom < labels.size(); ++atom) {
    auto it = std::find(seen.begin(), seen.end(), labels[atom]);
    if (it == seen.end()) {
      seen.push_back(labels[atom]);
      blocks.emplace_back();
      it = seen.end() - 1;
    }
    blocks[static_cast<std::size_t>(it - seen.begin())].push_back(atom);
  }
  return Partition(std::move(blocks), labels.size());
}

FiniteMeasureSpace Partition::quotient(const FiniteMeasureSpace& space) const {
  if (space.size() != atoms()) throw std::invalid_argument("partition does not match space");
  std::vector<double> w(blocks_.size(), 0.0);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (std::size_t atom : blocks_[b]) w[b] += space.weight(atom);
  }
  return FiniteMeasureSpace(std::move(w));
}

SubsetMask Partition::atoms_of(const SubsetMask& block_set) const {
  SubsetMask out(atoms());
  for (std::size_t b : block_set.indices()) {
    for (std::size_t atom : blocks_.at(b)) out.insert(atom);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CondExpConfig

CondExpConfig::CondExpConfig(const FiniteMeasureSpace& space, std::vector<Partition> partitions)
    : space_(space.size() == 0 ? space : space.scaled(1.0 / space.total_mass())), partitions_(std::move(partitions)) {
  for (const auto& p : partitions_) {
    if (p.atoms() != space_.size()) throw std::invalid_argument("partition does not match space");
  }
}

// ---------------------------------------------------------------------------
// Norms

namespace {

void require_matching(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p) {
  if (x.size() != space.size() || p.atoms() != space.size()) {
    throw std::invalid_argument("function, partition and space sizes differ");
  }
}

}  // namespace

std::vector<double> cond_expectation(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p) {
  require_matching(space, x, p);
  std::vector<double> out(x.size(), 0.0);
  for (const auto& block : p.blocks()) {
    double integral = 0.0;
    double mass = 0.0;
    for (std::size_t atom : block) {
      integral += x[atom] * space.weight(atom);
      mass += space.weight(atom);
    }
    for (std::size_t atom : block) out[atom] = integral / mass;
  }
  return out;
}

double c_norm(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p) {
  std::vector<double> magnitude(x.size());
  std::transform(x.begin(), x.end(), magnitude.begin(), [](double v) { return std::abs(v); });
  const auto averaged = cond_expectation(space, magnitude, p);
  double best = 0.0;
  for (double v : averaged) best = std::max(best, v);
  return best;
}

double multiplication_operator_norm(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p) {
  require_matching(space, x, p);
  double best = 0.0;
  for (const auto& block : p.blocks()) {
    double mass = 0.0;
    for (std::size_t atom : block) mass += space.weight(atom);
    // Image of the L_1-normalized indicator 1_A / mu(A).
    double image_norm = 0.0;
    for (std::size_t atom : block) image_norm += std::abs(x[atom] / mass) * space.weight(atom);
    best = std::max(best, image_norm);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Intersection condition

CondExpSup condexp_condition_sup(const CondExpConfig& config, std::span<const double> x,
                                 std::span<const GaugeFunction> gauges, std::size_t limit) {
  const auto& space = config.space();
  const auto& partitions = config.partitions();
  const std::size_t n = partitions.size();
  if (n < 1) throw std::invalid_argument("need at least one partition");
  if (x.size() != space.size()) throw std::invalid_argument("function does not match space");
  if (!gauges.empty() && gauges.size() != n) throw std::invalid_argument("one gauge per partition");
  const GaugeFunction identity;
  auto gauge = [&](std::size_t j) -> const GaugeFunction& { return gauges.empty() ? identity : gauges[j]; };

  std::vector<std::vector<double>> measure_tables;
  for (const auto& p : partitions) {
    require_enumerable(p.block_count(), limit);
    measure_tables.push_back(subset_measure_table(p.quotient(space)));
  }
  CondExpSup out;
  if (space.size() == 0) return out;

  const std::size_t b0 = partitions[0].block_count();
  std::vector<double> block_mass(b0);
  std::vector<double> sums(std::uint64_t{1} << b0);
  std::vector<std::uint64_t> tuple(n, 1);
  std::vector<std::uint64_t> best_tuple;
  double best = -1.0;
  while (true) {
    std::fill(block_mass.begin(), block_mass.end(), 0.0);
    for (std::size_t atom = 0; atom < space.size(); ++atom) {
      bool inside = true;
      for (std::size_t j = 1; j < n && inside; ++j) inside = (tuple[j] >> partitions[j].block_of()[atom]) & 1U;
      if (inside) block_mass[partitions[0].block_of()[atom]] += std::abs(x[atom]) * space.weight(atom);
    }
    double outer_den = 0.0;
    for (std::size_t j = 1; j < n; ++j) outer_den += gauge(j)(measure_tables[j][tuple[j]]);
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << b0); ++m) {
      const std::uint64_t low = m & (~m + 1);
      sums[m] = sums[m ^ low] + block_mass[static_cast<std::size_t>(std::countr_zero(low))];
      const double value = sums[m] / (gauge(0)(measure_tables[0][m]) + outer_den);
      tuple[0] = m;
      if (value > best || (value == best && tuple < best_tuple)) {
        best = value;
        best_tuple = tuple;
      }
    }
    std::size_t j = 1;
    for (; j < n; ++j) {
      if (++tuple[j] < (std::uint64_t{1} << partitions[j].block_count())) break;
      tuple[j] = 1;
    }
    if (j == n) break;
  }

  out.value = std::max(best, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.block_sets.push_back(SubsetMask::from_bits(best_tuple[j], partitions[j].block_count()));
    out.atom_sets.push_back(partitions[j].atoms_of(out.block_sets.back()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition

CondExpDecomposition condexp_decompose(const CondExpConfig& config, std::span<const double> x,
                                       std::span<const GaugeFunction> gauges, const CuttingPlaneOptions& options) {
  const auto& space = config.space();
  const auto& partitions = config.partitions();
  if (partitions.empty()) throw std::invalid_argument("need at least one partition");
  if (x.size() != space.size()) throw std::invalid_argument("function does not match space");
  if (!gauges.empty() && gauges.size() != partitions.size()) throw std::invalid_argument("one gauge per partition");

  SplitProblem problem;
  problem.cell_weight.assign(space.weights().begin(), space.weights().end());
  for (double v : x) problem.magnitude.push_back(std::abs(v));
  for (std::size_t j = 0; j < partitions.size(); ++j) {
    problem.axes.push_back({partitions[j].quotient(space), partitions[j].block_of(),
                            gauges.empty() ? GaugeFunction() : gauges[j], 1.0});
  }
  const SplitSolution split = solve_split(problem, options);

  CondExpDecomposition out;
  out.lp_objective = split.lp_objective;
  out.constraints = split.constraints;
  for (std::size_t j = 0; j < partitions.size(); ++j) {
    std::vector<double> summand(x.size());
    for (std::size_t atom = 0; atom < x.size(); ++atom) {
      summand[atom] = x[atom] < 0.0 ? -split.parts[j][atom] : split.parts[j][atom];
    }
    double norm = 0.0;
    if (gauges.empty()) {
      norm = c_norm(space, summand, partitions[j]);
    } else {
      const auto averaged = cond_expectation(space, std::vector<double>(split.parts[j]), partitions[j]);
      // Block-level density of E_j|x_j| on the quotient space.
      std::vector<double> density(partitions[j].block_count());
      for (std::size_t b = 0; b < density.size(); ++b) density[b] = averaged[partitions[j].blocks()[b].front()];
      norm = gauge_bracket_norm(problem.axes[j].space, density, gauges[j], options.limit);
    }
    out.norms.push_back(norm);
    out.value += norm;
    out.summands.push_back(std::move(summand));
  }
  return out;
}

}  // namespace interp_lab
