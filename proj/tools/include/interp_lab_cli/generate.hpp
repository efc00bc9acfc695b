#pragma once

// Seeded random instances. Draws go through a fixed bit-to-double mapping so
// a seed reproduces the same instance on every platform.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "interp_lab/condexp.hpp"
#include "interp_lab/gauge.hpp"
#include "interp_lab/kernel_matrix.hpp"

namespace interp_lab::cli {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform on {0, ..., n-1}.
  std::size_t index(std::size_t n);
  bool coin(double p = 0.5) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

enum class Distribution { kUniform01, kExpTail, kSparse };
enum class WeightKind { kCounting, kDirichlet };

Distribution parse_distribution(const std::string& name);
WeightKind parse_weight_kind(const std::string& name);
std::string to_string(Distribution d);
std::string to_string(WeightKind w);

struct GenSpec {
  std::uint64_t seed = 0;
  std::vector<std::size_t> shape{3, 3};
  Distribution distribution = Distribution::kUniform01;
  double density = 0.5;  // sparse only
  WeightKind weights = WeightKind::kCounting;
  /// Dirichlet total mass per axis; a nonpositive value means the atom count.
  double total_mass = 0.0;
  bool signed_entries = false;
};

/// Shape limits: 1 to 8 axes, each with 1 to 62 atoms.
KernelMatrix gen_random(const GenSpec& spec);

/// Draws from an existing stream instead of a fresh seed.
KernelMatrix gen_random(Rng& rng, const GenSpec& spec);

FiniteMeasureSpace random_space(Rng& rng, std::size_t atoms, WeightKind weights, double total_mass = 0.0);

/// Random partition of `atoms` atoms into at most `max_blocks` nonempty blocks.
Partition random_partition(Rng& rng, std::size_t atoms, std::size_t max_blocks);

/// Random increasing concave piecewise-linear gauge with `pieces` segments.
GaugeFunction random_concave_gauge(Rng& rng, std::size_t pieces, double scale = 1.0);

}  // namespace interp_lab::cli
