#pragma once

// Conditional expectations on a finite probability space. A sub-sigma-algebra
// of a finite space is a partition; its measurable sets are unions of blocks.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "interp_lab/gauge.hpp"
#include "interp_lab/kfun.hpp"
#include "interp_lab/measure.hpp"

namespace interp_lab {

class Partition {
 public:
  /// Blocks must be nonempty, pairwise disjoint and cover {0, ..., atoms-1}.
  Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t atoms);

  static Partition singletons(std::size_t atoms);
  static Partition trivial(std::size_t atoms);
  /// Partition from a block label per atom; labels are renumbered by first
  /// appearance.
  static Partition from_labels(std::span<const std::size_t> labels);

  std::size_t atoms() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& block_of() const noexcept { return block_of_; }

  /// Blocks as atoms with weight mu(block).
  FiniteMeasureSpace quotient(const FiniteMeasureSpace& space) const;
  /// Atom mask of a union of blocks.
  SubsetMask atoms_of(const SubsetMask& block_set) const;

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
};

/// Probability space with a family of conditional expectations. Weights are
/// normalized to total mass 1 on construction.
class CondExpConfig {
 public:
  CondExpConfig(const FiniteMeasureSpace& space, std::vector<Partition> partitions);

  const FiniteMeasureSpace& space() const noexcept { return space_; }
  const std::vector<Partition>& partitions() const noexcept { return partitions_; }

 private:
  FiniteMeasureSpace space_;
  std::vector<Partition> partitions_;
};

/// Block averages: constant on each block A, equal to int_A x dmu / mu(A).
std::vector<double> cond_expectation(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p);

/// ||E_P |x| ||_inf: the largest block average of |x|.
double c_norm(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p);

/// Norm of multiplication by x from L_1(B_P) into L_1: max over blocks of
/// || x 1_A / mu(A) ||_1.
double multiplication_operator_norm(const FiniteMeasureSpace& space, std::span<const double> x, const Partition& p);

struct CondExpSup {
  double value = 0.0;
  std::vector<SubsetMask> block_sets;  // per partition, over block indices
  std::vector<SubsetMask> atom_sets;   // the same sets as atom masks
};

/// sup over tuples (E_1..E_n) of block unions, not all empty, of
///   int_{E_1 ∩ ... ∩ E_n} |x| dmu / sum_j Phi_j(mu(E_j)),
/// with Phi_j the identity unless `gauges` is given.
CondExpSup condexp_condition_sup(const CondExpConfig& config, std::span<const double> x,
                                 std::span<const GaugeFunction> gauges = {},
                                 std::size_t limit = default_enumeration_limit());

struct CondExpDecomposition {
  double value = 0.0;                       // sum_j ||x_j||
  std::vector<std::vector<double>> summands;  // signed, sum to x
  std::vector<double> norms;
  double lp_objective = 0.0;
  std::size_t constraints = 0;
};

/// Exact inf of sum_j ||x_j||_{C_j} over x = sum_j x_j. With identity
/// gauges the block constraints suffice; other gauges (the general-exponent
/// extension, sup over block unions of int_E E_j|x| / Phi_j(mu(E))) are
/// separated over block unions.
CondExpDecomposition condexp_decompose(const CondExpConfig& config, std::span<const double> x,
                                       std::span<const GaugeFunction> gauges = {},
                                       const CuttingPlaneOptions& options = {});

}  // namespace interp_lab
