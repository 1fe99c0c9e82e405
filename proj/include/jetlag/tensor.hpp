#pragma once

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

namespace jetlag {

// Small dense row-major N-d array. Desk-scale sizes only; bounds are
// asserted, not checked in release builds.
template <typename T>
class NdArray {
 public:
  NdArray() = default;

  explicit NdArray(std::vector<int> dims, T fill = T{}) : dims_(std::move(dims)) {
    std::size_t total = 1;
    for (int d : dims_) {
      assert(d >= 0);
      total *= static_cast<std::size_t>(d);
    }
    data_.assign(total, fill);
  }

  const std::vector<int>& dims() const { return dims_; }
  int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <typename... I>
  T& operator()(I... idx) {
    return data_[flat(idx...)];
  }
  template <typename... I>
  const T& operator()(I... idx) const {
    return data_[flat(idx...)];
  }

  T& at_flat(std::size_t i) { return data_[i]; }
  const T& at_flat(std::size_t i) const { return data_[i]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  template <typename... I>
  std::size_t flat(I... idx) const {
    assert(sizeof...(I) == dims_.size());
    std::size_t f = 0;
    std::size_t k = 0;
    ((f = f * static_cast<std::size_t>(dims_[k++]) + static_cast<std::size_t>(idx)), ...);
    assert(f < data_.size() || data_.empty());
    return f;
  }

  std::vector<int> dims_;
  std::vector<T> data_;
};

}  // namespace jetlag
