#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "interp_lab/measure.hpp"

namespace interp_lab {

/// Dense real tensor over a product of finite measure spaces, stored
/// row-major (last axis fastest).
class KernelMatrix {
 public:
  KernelMatrix() = default;
  /// Zero tensor.
  explicit KernelMatrix(ProductSpace product);
  KernelMatrix(ProductSpace product, std::vector<double> entries);

  /// Two-axis convenience constructor; `rows` is indexed [i][j].
  static KernelMatrix from_rows(FiniteMeasureSpace mu1, FiniteMeasureSpace mu2,
                                const std::vector<std::vector<double>>& rows);

  const ProductSpace& product() const noexcept { return product_; }
  std::size_t rank() const noexcept { return product_.rank(); }
  std::vector<std::size_t> shape() const { return product_.shape(); }
  std::size_t extent(std::size_t axis) const { return product_.factor(axis).size(); }
  std::size_t cells() const noexcept { return entries_.size(); }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * extent(1) + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * extent(1) + j]; }

  /// Multi-index of a flat cell index.
  std::vector<std::size_t> unflatten(std::size_t cell) const;
  std::size_t flatten(std::span<const std::size_t> index) const;
  /// Coordinate along `axis` of every cell, in flat order.
  std::vector<std::size_t> axis_coordinates(std::size_t axis) const;
  /// Product of factor weights of every cell, in flat order.
  std::vector<double> cell_weights() const;

  KernelMatrix abs() const;
  KernelMatrix scaled(double c) const;
  /// Swaps the two axes of a two-axis kernel (spaces swap too).
  KernelMatrix transposed() const;
  /// Same entries over a different (shape-compatible) product space.
  KernelMatrix with_product(ProductSpace product) const;

  bool is_zero() const noexcept;

 private:
  ProductSpace product_;
  std::vector<double> entries_;
};

}  // namespace interp_lab
