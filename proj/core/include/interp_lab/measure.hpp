#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace interp_lab {

/// Largest atom count for which exhaustive subset sweeps are permitted.
/// Defaults to 20; the INTERP_LAB_ENUM_LIMIT environment variable overrides it
/// (read once, capped at 62).
std::size_t default_enumeration_limit();

/// Throws EnumerationLimitError when `atoms` exceeds `limit`.
void require_enumerable(std::size_t atoms, std::size_t limit);

/// A subset of the atoms {0, ..., size-1} of one finite space.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::size_t universe);

  static SubsetMask from_bits(std::uint64_t bits, std::size_t universe);
  static SubsetMask from_indices(std::span<const std::size_t> indices, std::size_t universe);
  static SubsetMask full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(std::size_t atom) const;
  void insert(std::size_t atom);
  void erase(std::size_t atom);
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }
  std::vector<std::size_t> indices() const;

  /// Low 64 bits; exact whenever universe() <= 64.
  std::uint64_t bits() const noexcept { return words_.empty() ? 0 : words_.front(); }

  /// Compares as the integer whose bit i is atom i; masks over different
  /// universes compare by universe first.
  std::strong_ordering operator<=>(const SubsetMask& other) const;
  bool operator==(const SubsetMask& other) const = default;

  /// "{0,2,5}"
  std::string to_string() const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Atoms with strictly positive finite weights.
class FiniteMeasureSpace {
 public:
  FiniteMeasureSpace() = default;
  explicit FiniteMeasureSpace(std::vector<double> weights);

  static FiniteMeasureSpace counting(std::size_t atoms);

  std::size_t size() const noexcept { return weights_.size(); }
  double weight(std::size_t atom) const { return weights_.at(atom); }
  std::span<const double> weights() const noexcept { return weights_; }
  double total_mass() const noexcept { return total_; }

  /// True when every atom carries the same weight (exact comparison).
  bool uniform() const noexcept { return uniform_; }

  /// mu(E); 0 for the empty mask.
  double measure(const SubsetMask& mask) const;
  /// mu(E) for a mask given as raw bits; requires size() <= 64.
  double measure_bits(std::uint64_t bits) const;

  /// Every weight multiplied by s > 0.
  FiniteMeasureSpace scaled(double s) const;

  bool operator==(const FiniteMeasureSpace& other) const { return weights_ == other.weights_; }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
  bool uniform_ = true;
};

double subset_measure(const FiniteMeasureSpace& space, const SubsetMask& mask);
FiniteMeasureSpace scale_space(const FiniteMeasureSpace& space, double s);

/// All 2^n subsets of an n-atom space in increasing integer order.
class SubsetEnumeration {
 public:
  class iterator {
   public:
    using value_type = SubsetMask;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(std::uint64_t bits, std::size_t universe) : bits_(bits), universe_(universe) {}

    SubsetMask operator*() const { return SubsetMask::from_bits(bits_, universe_); }
    iterator& operator++() {
      ++bits_;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++bits_;
      return copy;
    }
    bool operator==(const iterator& other) const { return bits_ == other.bits_; }

   private:
    std::uint64_t bits_ = 0;
    std::size_t universe_ = 0;
  };

  SubsetEnumeration(std::size_t universe, std::size_t limit);

  iterator begin() const { return {0, universe_}; }
  iterator end() const { return {std::uint64_t{1} << universe_, universe_}; }
  std::uint64_t count() const noexcept { return std::uint64_t{1} << universe_; }

 private:
  std::size_t universe_;
};

SubsetEnumeration enumerate_subsets(const FiniteMeasureSpace& space,
                                    std::size_t limit = default_enumeration_limit());

/// mu(E) for every mask E of an enumerable space, indexed by the mask bits.
std::vector<double> subset_measure_table(const FiniteMeasureSpace& space);

/// Ordered product of finite measure spaces.
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<FiniteMeasureSpace> factors);

  std::size_t rank() const noexcept { return factors_.size(); }
  const FiniteMeasureSpace& factor(std::size_t axis) const { return factors_.at(axis); }
  const std::vector<FiniteMeasureSpace>& factors() const noexcept { return factors_; }
  std::vector<std::size_t> shape() const;
  /// Number of cells of the product.
  std::size_t cells() const noexcept;

  /// Product space with axis `axis` rescaled by s.
  ProductSpace scaled(std::size_t axis, double s) const;

  bool operator==(const ProductSpace& other) const = default;

 private:
  std::vector<FiniteMeasureSpace> factors_;
};

}  // namespace interp_lab
