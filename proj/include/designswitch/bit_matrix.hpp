#ifndef DESIGNSWITCH_BIT_MATRIX_HPP
#define DESIGNSWITCH_BIT_MATRIX_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dsw {

using word_t = std::uint64_t;
inline constexpr std::size_t word_bits = 64;

constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + word_bits - 1) / word_bits; }

inline std::size_t popcount(std::span<const word_t> a) noexcept {
  std::size_t n = 0;
  for (word_t w : a) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

inline std::size_t and_count(std::span<const word_t> a, std::span<const word_t> b) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return n;
}

inline std::size_t and3_count(std::span<const word_t> a, std::span<const word_t> b,
                              std::span<const word_t> c) noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  return n;
}

/// Dense row-major 0/1 matrix, each row packed into 64-bit words.
/// Padding bits past `cols()` are always zero, so word-level comparisons
/// and popcounts are exact.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * stride_ + c / word_bits] >> (c % word_bits)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true) noexcept {
    word_t& w = data_[r * stride_ + c / word_bits];
    const word_t mask = word_t{1} << (c % word_bits);
    w = value ? (w | mask) : (w & ~mask);
  }
  void flip(std::size_t r, std::size_t c) noexcept {
    data_[r * stride_ + c / word_bits] ^= word_t{1} << (c % word_bits);
  }

  std::span<const word_t> row(std::size_t r) const noexcept { return {data_.data() + r * stride_, stride_}; }
  std::span<word_t> row(std::size_t r) noexcept { return {data_.data() + r * stride_, stride_}; }

  std::size_t row_count(std::size_t r) const noexcept { return popcount(row(r)); }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto src = row(r);
      for (std::size_t w = 0; w < stride_; ++w) {
        word_t bits = src[w];
        while (bits != 0) {
          const auto bit = static_cast<std::size_t>(std::countr_zero(bits));
          t.set(w * word_bits + bit, r);
          bits &= bits - 1;
        }
      }
    }
    return t;
  }

  std::span<const word_t> words() const noexcept { return data_; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<word_t> data_;
};

}  // namespace dsw

#endif
