#pragma once

#include <cstddef>
#include <vector>

namespace lipfree {

/// Dense row-major square matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

}  // namespace lipfree
