#include "interp_lab/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "interp_lab/error.hpp"

namespace interp_lab {

namespace {

constexpr std::size_t kWordBits = 64;
constexpr std::size_t kHardEnumerationCap = 62;

std::size_t read_limit_from_env() {
  const char* raw = std::getenv("INTERP_LAB_ENUM_LIMIT");
  if (raw == nullptr || *raw == '\0') return 20;
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0') return 20;
  return std::min<std::size_t>(value, kHardEnumerationCap);
}

}  // namespace

std::size_t default_enumeration_limit() {
  static const std::size_t limit = read_limit_from_env();
  return limit;
}

void require_enumerable(std::size_t atoms, std::size_t limit) {
  if (atoms > std::min(limit, kHardEnumerationCap)) throw EnumerationLimitError(atoms, limit);
}

// ---------------------------------------------------------------------------
// SubsetMask

SubsetMask::SubsetMask(std::size_t universe)
    : universe_(universe), words_((universe + kWordBits - 1) / kWordBits, 0) {}

SubsetMask SubsetMask::from_bits(std::uint64_t bits, std::size_t universe) {
  SubsetMask mask(universe);
  if (universe < kWordBits && (bits >> universe) != 0) {
    throw std::out_of_range("mask bits exceed universe of " + std::to_string(universe));
  }
  if (universe == 0) return mask;
  mask.words_.front() = bits;
  return mask;
}

SubsetMask SubsetMask::from_indices(std::span<const std::size_t> indices, std::size_t universe) {
  SubsetMask mask(universe);
  for (std::size_t index : indices) mask.insert(index);
  return mask;
}

SubsetMask SubsetMask::full(std::size_t universe) {
  SubsetMask mask(universe);
  for (std::size_t i = 0; i < universe; ++i) mask.insert(i);
  return mask;
}

bool SubsetMask::contains(std::size_t atom) const {
  if (atom >= universe_) throw std::out_of_range("atom index " + std::to_string(atom) + " out of range");
  return (words_[atom / kWordBits] >> (atom % kWordBits)) & 1U;
}

void SubsetMask::insert(std::size_t atom) {
  if (atom >= universe_) throw std::out_of_range("atom index " + std::to_string(atom) + " out of range");
  words_[atom / kWordBits] |= std::uint64_t{1} << (atom % kWordBits);
}

void SubsetMask::erase(std::size_t atom) {
  if (atom >= universe_) throw std::out_of_range("atom index " + std::to_string(atom) + " out of range");
  words_[atom / kWordBits] &= ~(std::uint64_t{1} << (atom % kWordBits));
}

std::size_t SubsetMask::count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::size_t> SubsetMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < universe_; ++i) {
    if ((words_[i / kWordBits] >> (i % kWordBits)) & 1U) out.push_back(i);
  }
  return out;
}

std::strong_ordering SubsetMask::operator<=>(const SubsetMask& other) const {
  if (auto c = universe_ <=> other.universe_; c != 0) return c;
  for (std::size_t w = words_.size(); w-- > 0;) {
    if (auto c = words_[w] <=> other.words_[w]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string SubsetMask::to_string() const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : indices()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// FiniteMeasureSpace

FiniteMeasureSpace::FiniteMeasureSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || !(w > 0.0)) {
      throw std::invalid_argument("atom " + std::to_string(i) + " has non-positive or non-finite weight");
    }
  }
  total_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  uniform_ = std::adjacent_find(weights_.begin(), weights_.end(), std::not_equal_to<>()) == weights_.end();
}

FiniteMeasureSpace FiniteMeasureSpace::counting(std::size_t atoms) {
  return FiniteMeasureSpace(std::vector<double>(atoms, 1.0));
}

double FiniteMeasureSpace::measure(const SubsetMask& mask) const {
  if (mask.universe() != size()) {
    throw std::out_of_range("mask universe " + std::to_string(mask.universe()) + " does not match space of " +
                            std::to_string(size()) + " atoms");
  }
  double total = 0.0;
  for (std::size_t i : mask.indices()) total += weights_[i];
  return total;
}

double FiniteMeasureSpace::measure_bits(std::uint64_t bits) const {
  double total = 0.0;
  while (bits != 0) {
    const int i = std::countr_zero(bits);
    total += weights_[static_cast<std::size_t>(i)];
    bits &= bits - 1;
  }
  return total;
}

FiniteMeasureSpace FiniteMeasureSpace::scaled(double s) const {
  if (!std::isfinite(s) || !(s > 0.0)) throw std::invalid_argument("scale factor must be positive and finite");
  std::vector<double> w(weights_);
  for (double& x : w) x *= s;
  return FiniteMeasureSpace(std::move(w));
}

double subset_measure(const FiniteMeasureSpace& space, const SubsetMask& mask) { return space.measure(mask); }

FiniteMeasureSpace scale_space(const FiniteMeasureSpace& space, double s) { return space.scaled(s); }

SubsetEnumeration::SubsetEnumeration(std::size_t universe, std::size_t limit) : universe_(universe) {
  require_enumerable(universe, limit);
}

SubsetEnumeration enumerate_subsets(const FiniteMeasureSpace& space, std::size_t limit) {
  return SubsetEnumeration(space.size(), limit);
}

std::vector<double> subset_measure_table(const FiniteMeasureSpace& space) {
  require_enumerable(space.size(), kHardEnumerationCap);
  const std::uint64_t count = std::uint64_t{1} << space.size();
  std::vector<double> table(count, 0.0);
  for (std::uint64_t m = 1; m < count; ++m) {
    const std::uint64_t low = m & (~m + 1);
    table[m] = table[m ^ low] + space.weights()[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return table;
}

// ---------------------------------------------------------------------------
// ProductSpace

ProductSpace::ProductSpace(std::vector<FiniteMeasureSpace> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("product space needs at least one factor");
}

std::vector<std::size_t> ProductSpace::shape() const {
  std::vector<std::size_t> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.size());
  return out;
}

std::size_t ProductSpace::cells() const noexcept {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.size();
  return n;
}

ProductSpace ProductSpace::scaled(std::size_t axis, double s) const {
  std::vector<FiniteMeasureSpace> factors(factors_);
  factors.at(axis) = factors.at(axis).scaled(s);
  return ProductSpace(std::move(factors));
}

}  // namespace interp_lab
