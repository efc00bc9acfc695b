#include "interp_lab_cli/generate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace interp_lab::cli {

double Rng::uniform() {
  // 53 random bits, shifted half a step off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index range is empty");
  return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
}

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform01") return Distribution::kUniform01;
  if (name == "exp-tail") return Distribution::kExpTail;
  if (name == "sparse") return Distribution::kSparse;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

WeightKind parse_weight_kind(const std::string& name) {
  if (name == "counting") return WeightKind::kCounting;
  if (name == "dirichlet") return WeightKind::kDirichlet;
  throw std::invalid_argument("unknown weight kind '" + name + "'");
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::kUniform01: return "uniform01";
    case Distribution::kExpTail: return "exp-tail";
    case Distribution::kSparse: return "sparse";
  }
  return "?";
}

std::string to_string(WeightKind w) { return w == WeightKind::kCounting ? "counting" : "dirichlet"; }

FiniteMeasureSpace random_space(Rng& rng, std::size_t atoms, WeightKind weights, double total_mass) {
  if (weights == WeightKind::kCounting) return FiniteMeasureSpace::counting(atoms);
  const double total = total_mass > 0.0 ? total_mass : static_cast<double>(atoms);
  std::vector<double> w(atoms);
  double sum = 0.0;
  for (auto& v : w) {
    v = -std::log(rng.uniform());
    sum += v;
  }
  for (auto& v : w) v = v / sum * total;
  return FiniteMeasureSpace(std::move(w));
}

KernelMatrix gen_random(Rng& rng, const GenSpec& spec) {
  if (spec.shape.empty() || spec.shape.size() > 8) throw std::invalid_argument("shape needs 1 to 8 axes");
  for (std::size_t n : spec.shape) {
    if (n == 0 || n > 62) throw std::invalid_argument("each axis needs 1 to 62 atoms");
  }
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  std::vector<FiniteMeasureSpace> factors;
  for (std::size_t n : spec.shape) factors.push_back(random_space(rng, n, spec.weights, spec.total_mass));
  KernelMatrix f{ProductSpace(std::move(factors))};
  for (double& v : f.entries()) {
    switch (spec.distribution) {
      case Distribution::kUniform01: v = rng.uniform(); break;
      // Pareto tail with index 1.5.
      case Distribution::kExpTail: v = std::pow(rng.uniform(), -1.0 / 1.5) - 1.0; break;
      case Distribution::kSparse: {
        const bool keep = rng.uniform() < spec.density;
        const double value = rng.uniform();
        v = keep ? value : 0.0;
        break;
      }
    }
    if (spec.signed_entries && rng.coin()) v = -v;
  }
  return f;
}

KernelMatrix gen_random(const GenSpec& spec) {
  Rng rng(spec.seed);
  return gen_random(rng, spec);
}

Partition random_partition(Rng& rng, std::size_t atoms, std::size_t max_blocks) {
  if (atoms == 0 || max_blocks == 0) throw std::invalid_argument("partition needs atoms and blocks");
  const std::size_t blocks = 1 + rng.index(std::min(atoms, max_blocks));
  std::vector<std::size_t> labels(atoms);
  // The first `blocks` atoms of a shuffled order seed distinct blocks.
  std::vector<std::size_t> order(atoms);
  for (std::size_t i = 0; i < atoms; ++i) order[i] = i;
  for (std::size_t i = atoms; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  for (std::size_t i = 0; i < atoms; ++i) labels[order[i]] = i < blocks ? i : rng.index(blocks);
  return Partition::from_labels(labels);
}

GaugeFunction random_concave_gauge(Rng& rng, std::size_t pieces, double scale) {
  if (pieces == 0) throw std::invalid_argument("gauge needs at least one piece");
  std::vector<double> slopes(pieces);
  for (auto& s : slopes) s = rng.uniform(0.05, 2.0);
  std::sort(slopes.begin(), slopes.end(), std::greater<>());
  std::vector<std::pair<double, double>> points{{0.0, 0.0}};
  double x = 0.0;
  double y = 0.0;
  for (double s : slopes) {
    const double dx = rng.uniform(0.1, 1.0) * scale;
    x += dx;
    y += s * dx;
    points.emplace_back(x, y);
  }
  const double tail = rng.coin() ? 0.0 : slopes.back() * rng.uniform();
  return GaugeFunction::piecewise_linear(std::move(points), tail);
}

}  // namespace interp_lab::cli
