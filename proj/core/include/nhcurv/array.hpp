#pragma once

// Small dense row-major array with runtime shape. Used for jet- and
// real-valued component tables (Gamma^c_ab, K^d_abc, ...).

#include <array>
#include <cassert>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace nhcurv {

template <class T>
class Array {
 public:
  Array() = default;
  explicit Array(std::vector<std::size_t> shape, const T& fill = T())
      : shape_(std::move(shape)) {
    const std::size_t total = std::accumulate(
        shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
    data_.assign(total, fill);
  }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t extent(std::size_t k) const { return shape_.at(k); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[offset(std::array<std::size_t, sizeof...(I)>{static_cast<std::size_t>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[offset(std::array<std::size_t, sizeof...(I)>{static_cast<std::size_t>(idx)...})];
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  template <class F>
  auto map(F&& f) const -> Array<decltype(f(std::declval<const T&>()))> {
    Array<decltype(f(std::declval<const T&>()))> out(shape_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data()[k] = f(data_[k]);
    return out;
  }

 private:
  template <std::size_t N>
  std::size_t offset(const std::array<std::size_t, N>& idx) const {
    assert(N == shape_.size());
    std::size_t off = 0;
    for (std::size_t k = 0; k < N; ++k) {
      assert(idx[k] < shape_[k]);
      off = off * shape_[k] + idx[k];
    }
    return off;
  }

  std::vector<std::size_t> shape_;
  std::vector<T> data_;
};

}  // namespace nhcurv
