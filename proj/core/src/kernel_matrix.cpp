#include "interp_lab/kernel_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace interp_lab {

KernelMatrix::KernelMatrix(ProductSpace product) : product_(std::move(product)), entries_(product_.cells(), 0.0) {}

KernelMatrix::KernelMatrix(ProductSpace product, std::vector<double> entries)
    : product_(std::move(product)), entries_(std::move(entries)) {
  if (entries_.size() != product_.cells()) {
    throw std::invalid_argument("kernel has " + std::to_string(entries_.size()) + " entries, product space has " +
                                std::to_string(product_.cells()) + " cells");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw std::invalid_argument("kernel entries must be finite");
  }
}

KernelMatrix KernelMatrix::from_rows(FiniteMeasureSpace mu1, FiniteMeasureSpace mu2,
                                     const std::vector<std::vector<double>>& rows) {
  if (rows.size() != mu1.size()) throw std::invalid_argument("row count does not match first space");
  std::vector<double> flat;
  flat.reserve(mu1.size() * mu2.size());
  for (const auto& row : rows) {
    if (row.size() != mu2.size()) throw std::invalid_argument("row length does not match second space");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return KernelMatrix(ProductSpace({std::move(mu1), std::move(mu2)}), std::move(flat));
}

std::vector<std::size_t> KernelMatrix::unflatten(std::size_t cell) const {
  std::vector<std::size_t> index(rank());
  for (std::size_t axis = rank(); axis-- > 0;) {
    const std::size_t n = extent(axis);
    index[axis] = cell % n;
    cell /= n;
  }
  return index;
}

std::size_t KernelMatrix::flatten(std::span<const std::size_t> index) const {
  if (index.size() != rank()) throw std::invalid_argument("index rank mismatch");
  std::size_t cell = 0;
  for (std::size_t axis = 0; axis < rank(); ++axis) {
    if (index[axis] >= extent(axis)) throw std::out_of_range("kernel index out of range");
    cell = cell * extent(axis) + index[axis];
  }
  return cell;
}

std::vector<std::size_t> KernelMatrix::axis_coordinates(std::size_t axis) const {
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < rank(); ++a) stride *= extent(a);
  const std::size_t n = extent(axis);
  std::vector<std::size_t> coords(cells());
  for (std::size_t c = 0; c < coords.size(); ++c) coords[c] = (c / stride) % n;
  return coords;
}

std::vector<double> KernelMatrix::cell_weights() const {
  std::vector<double> w(cells(), 1.0);
  for (std::size_t axis = 0; axis < rank(); ++axis) {
    const auto coords = axis_coordinates(axis);
    const auto& weights = product_.factor(axis).weights();
    for (std::size_t c = 0; c < w.size(); ++c) w[c] *= weights[coords[c]];
  }
  return w;
}

KernelMatrix KernelMatrix::abs() const {
  KernelMatrix out(*this);
  for (double& v : out.entries_) v = std::abs(v);
  return out;
}

KernelMatrix KernelMatrix::scaled(double c) const {
  KernelMatrix out(*this);
  for (double& v : out.entries_) v *= c;
  return out;
}

KernelMatrix KernelMatrix::transposed() const {
  if (rank() != 2) throw std::invalid_argument("transpose requires a two-axis kernel");
  const std::size_t n1 = extent(0);
  const std::size_t n2 = extent(1);
  std::vector<double> flat(cells());
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) flat[j * n1 + i] = entries_[i * n2 + j];
  }
  return KernelMatrix(ProductSpace({product_.factor(1), product_.factor(0)}), std::move(flat));
}

KernelMatrix KernelMatrix::with_product(ProductSpace product) const {
  if (product.shape() != product_.shape()) throw std::invalid_argument("product shape mismatch");
  return KernelMatrix(std::move(product), entries_);
}

bool KernelMatrix::is_zero() const noexcept {
  for (double v : entries_) {
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace interp_lab
