#ifndef DESIGNSWITCH_SIGN_MATRIX_HPP
#define DESIGNSWITCH_SIGN_MATRIX_HPP

#include <bit>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <span>
#include <vector>

#include "bit_matrix.hpp"
#include "error.hpp"
#include "incidence.hpp"

namespace dsw {

/// Square matrix with entries +1/-1. Stored as bits, set bit = -1, which
/// makes the entry map to Menon incidence a plain copy.
class SignMatrix {
 public:
  SignMatrix() = default;
  explicit SignMatrix(std::size_t m) : bits_(m, m) {}
  explicit SignMatrix(BitMatrix negative_entries) : bits_(std::move(negative_entries)) {
    if (bits_.rows() != bits_.cols()) throw design_error(errc::invalid_argument, "sign matrix must be square");
  }

  SignMatrix(std::initializer_list<std::initializer_list<int>> rows) : bits_(rows.size(), rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw design_error(errc::invalid_argument, "sign matrix must be square");
      std::size_t j = 0;
      for (int x : row) set(i, j++, x);
      ++i;
    }
  }

  std::size_t order() const noexcept { return bits_.rows(); }

  int operator()(std::size_t i, std::size_t j) const noexcept { return bits_.get(i, j) ? -1 : 1; }
  void set(std::size_t i, std::size_t j, int value) {
    if (value != 1 && value != -1) throw design_error(errc::invalid_argument, "entries must be +1 or -1");
    bits_.set(i, j, value < 0);
  }
  void negate(std::size_t i, std::size_t j) noexcept { bits_.flip(i, j); }

  /// Integer inner product of rows i and j.
  long long row_dot(std::size_t i, std::size_t j) const noexcept {
    const std::size_t diff = popcount_xor(bits_.row(i), bits_.row(j));
    return static_cast<long long>(order()) - 2 * static_cast<long long>(diff);
  }

  long long row_sum(std::size_t i) const noexcept {
    return static_cast<long long>(order()) - 2 * static_cast<long long>(bits_.row_count(i));
  }

  long long col_sum(std::size_t j) const noexcept {
    long long s = 0;
    for (std::size_t i = 0; i < order(); ++i) s += (*this)(i, j);
    return s;
  }

  SignMatrix transposed() const { return SignMatrix(bits_.transposed()); }
  SignMatrix negated() const {
    SignMatrix out = *this;
    for (std::size_t i = 0; i < order(); ++i)
      for (std::size_t j = 0; j < order(); ++j) out.negate(i, j);
    return out;
  }

  const BitMatrix& negative_bits() const noexcept { return bits_; }

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

 private:
  static std::size_t popcount_xor(std::span<const word_t> a, std::span<const word_t> b) noexcept {
    std::size_t n = 0;
    for (std::size_t w = 0; w < a.size(); ++w) n += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
    return n;
  }

  BitMatrix bits_;
};

/// Reads "m" followed by m rows of m '+'/'-' characters. Returns false on
/// clean end of input.
inline bool read_sign_matrix(std::istream& in, SignMatrix& out, std::size_t& lineno) {
  std::string line;
  if (!detail::next_content_line(in, line, lineno)) return false;
  std::istringstream hs(line);
  long long m = -1;
  std::string extra;
  if (!(hs >> m) || (hs >> extra) || m < 1)
    throw detail::parse_failure(lineno, "expected order line \"m\", got \"" + line + "\"");
  BitMatrix bits(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!detail::next_content_line(in, line, lineno))
      throw detail::parse_failure(lineno, "expected " + std::to_string(m) + " rows, got " + std::to_string(i));
    if (line.size() != static_cast<std::size_t>(m))
      throw detail::parse_failure(lineno, "row has " + std::to_string(line.size()) + " characters, expected " +
                                              std::to_string(m));
    for (long long j = 0; j < m; ++j) {
      const char c = line[static_cast<std::size_t>(j)];
      if (c == '-')
        bits.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      else if (c != '+')
        throw detail::parse_failure(lineno, std::string("unexpected character '") + c + "'");
    }
  }
  out = SignMatrix(std::move(bits));
  return true;
}

inline SignMatrix parse_sign_matrix(std::istream& in) {
  std::size_t lineno = 0;
  SignMatrix h;
  if (!read_sign_matrix(in, h, lineno)) throw design_error(errc::parse_error, "empty Hadamard fixture");
  return h;
}

inline SignMatrix parse_sign_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_sign_matrix(in);
}

inline std::vector<SignMatrix> parse_sign_matrix_stream(std::istream& in) {
  std::vector<SignMatrix> out;
  std::size_t lineno = 0;
  SignMatrix h;
  while (read_sign_matrix(in, h, lineno)) out.push_back(std::move(h));
  return out;
}

inline void write_sign_matrix(std::ostream& out, const SignMatrix& h) {
  out << h.order() << '\n';
  std::string row(h.order(), '+');
  for (std::size_t i = 0; i < h.order(); ++i) {
    for (std::size_t j = 0; j < h.order(); ++j) row[j] = h(i, j) < 0 ? '-' : '+';
    out << row << '\n';
  }
}

}  // namespace dsw

#endif
