#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interp_lab {

// Raised when an exhaustive subset sweep would exceed the configured atom limit.
class EnumerationLimitError : public std::runtime_error {
 public:
  EnumerationLimitError(std::size_t atoms, std::size_t limit)
      : std::runtime_error("subset enumeration over " + std::to_string(atoms) +
                           " atoms exceeds limit " + std::to_string(limit) +
                           " (raise INTERP_LAB_ENUM_LIMIT or use a fast path)"),
        atoms_(atoms),
        limit_(limit) {}

  std::size_t atoms() const noexcept { return atoms_; }
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t atoms_;
  std::size_t limit_;
};

}  // namespace interp_lab
