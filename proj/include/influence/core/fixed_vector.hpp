#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace influence {

// Inline-storage vector with a compile-time capacity. Keeps states and
// actions allocation-free inside tree search.
template <class T, std::size_t Capacity>
class FixedVector {
 public:
  FixedVector() = default;

  FixedVector(std::initializer_list<T> init) {
    if (init.size() > Capacity) throw std::length_error("FixedVector capacity exceeded");
    std::copy(init.begin(), init.end(), data_.begin());
    size_ = init.size();
  }

  explicit FixedVector(std::size_t n, T value = T{}) { resize(n, value); }

  static FixedVector from_span(std::span<const T> values) {
    FixedVector out;
    out.resize(values.size());
    std::copy(values.begin(), values.end(), out.begin());
    return out;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  static constexpr std::size_t capacity() { return Capacity; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(std::size_t i) {
    if (i >= size_) throw std::out_of_range("FixedVector index");
    return data_[i];
  }
  const T& at(std::size_t i) const {
    if (i >= size_) throw std::out_of_range("FixedVector index");
    return data_[i];
  }

  void push_back(T v) {
    if (size_ == Capacity) throw std::length_error("FixedVector capacity exceeded");
    data_[size_++] = v;
  }

  void resize(std::size_t n, T value = T{}) {
    if (n > Capacity) throw std::length_error("FixedVector capacity exceeded");
    for (std::size_t i = size_; i < n; ++i) data_[i] = value;
    size_ = n;
  }

  T* begin() { return data_.data(); }
  T* end() { return data_.data() + size_; }
  const T* begin() const { return data_.data(); }
  const T* end() const { return data_.data() + size_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::span<const T> span() const { return {data_.data(), size_}; }

  friend bool operator==(const FixedVector& a, const FixedVector& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<T, Capacity> data_{};
  std::size_t size_ = 0;
};

}  // namespace influence
