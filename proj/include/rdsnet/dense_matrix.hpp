#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rdsnet {

/// Row-major dense matrix. Study-scale problems keep n in the low thousands,
/// so the O(n^2) footprint is acceptable.
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  T& at(std::size_t i, std::size_t j) {
    check(i, j);
    return data_[i * cols_ + j];
  }
  const T& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return data_[i * cols_ + j];
  }

  const T* row(std::size_t i) const { return data_.data() + i * cols_; }
  T* row(std::size_t i) { return data_.data() + i * cols_; }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("DenseMatrix index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace rdsnet
