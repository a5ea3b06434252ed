#ifndef DESIGNSWITCH_GF_RANK_HPP
#define DESIGNSWITCH_GF_RANK_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bit_matrix.hpp"
#include "error.hpp"
#include "incidence.hpp"

namespace dsw {

inline bool is_prime(std::uint64_t p) noexcept {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Dense matrix of residues modulo a prime.
class MatrixModP {
 public:
  MatrixModP(std::size_t rows, std::size_t cols, std::uint32_t p) : rows_(rows), cols_(cols), p_(p), a_(rows * cols) {
    if (p > (std::uint64_t{1} << 31) || !is_prime(p))
      throw design_error(errc::not_prime, std::to_string(p) + " is not a prime <= 2^31");
  }

  static MatrixModP from_incidence(const IncidenceStructure& inc, std::uint32_t p) {
    MatrixModP m(inc.b(), inc.v(), p);
    for (std::size_t i = 0; i < inc.b(); ++i)
      for (std::size_t j = 0; j < inc.v(); ++j) m(i, j) = inc.incident(i, j) ? 1 : 0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t modulus() const noexcept { return p_; }
  std::uint32_t& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * cols_ + c]; }

  /// Row rank by Gaussian elimination with Fermat inverses.
  std::size_t rank() const {
    std::vector<std::uint32_t> a = a_;
    const std::uint64_t p = p_;
    auto at = [&](std::size_t r, std::size_t c) -> std::uint32_t& { return a[r * cols_ + c]; };
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
      std::size_t pivot = rank;
      while (pivot < rows_ && at(pivot, c) == 0) ++pivot;
      if (pivot == rows_) continue;
      if (pivot != rank)
        for (std::size_t j = c; j < cols_; ++j) std::swap(at(pivot, j), at(rank, j));
      const std::uint64_t inv = pow_mod(at(rank, c), p - 2);
      for (std::size_t j = c; j < cols_; ++j) at(rank, j) = static_cast<std::uint32_t>(at(rank, j) * inv % p);
      for (std::size_t r = rank + 1; r < rows_; ++r) {
        const std::uint64_t f = at(r, c);
        if (f == 0) continue;
        for (std::size_t j = c; j < cols_; ++j)
          at(r, j) = static_cast<std::uint32_t>((at(r, j) + (p - f) * at(rank, j)) % p);
      }
      ++rank;
    }
    return rank;
  }

 private:
  std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e) const noexcept {
    std::uint64_t result = 1;
    base %= p_;
    while (e != 0) {
      if (e & 1U) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return result;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::uint32_t p_;
  std::vector<std::uint32_t> a_;
};

/// Rank over GF(2) by XOR elimination on packed rows.
inline std::size_t rank_gf2(BitMatrix m) {
  std::size_t rank = 0;
  const std::size_t rows = m.rows();
  for (std::size_t c = 0; c < m.cols() && rank < rows; ++c) {
    const std::size_t w = c / word_bits;
    const word_t bit = word_t{1} << (c % word_bits);
    std::size_t pivot = rank;
    while (pivot < rows && (m.row(pivot)[w] & bit) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      auto a = m.row(pivot);
      auto b = m.row(rank);
      for (std::size_t i = 0; i < a.size(); ++i) std::swap(a[i], b[i]);
    }
    auto prow = m.row(rank);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      auto row = m.row(r);
      if ((row[w] & bit) == 0) continue;
      for (std::size_t i = w; i < row.size(); ++i) row[i] ^= prow[i];
    }
    ++rank;
  }
  return rank;
}

/// Rank of the block-by-point incidence matrix over GF(p).
inline std::size_t p_rank(const IncidenceStructure& inc, std::uint32_t p) {
  if (p > (std::uint64_t{1} << 31) || !is_prime(p))
    throw design_error(errc::not_prime, std::to_string(p) + " is not a prime <= 2^31");
  if (p == 2) return rank_gf2(inc.matrix());
  return MatrixModP::from_incidence(inc, p).rank();
}

/// Histogram rank -> number of designs.
inline std::map<std::size_t, std::size_t> rank_distribution(std::span<const IncidenceStructure> designs,
                                                            std::uint32_t p) {
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t i = 0; i < designs.size(); ++i) {
    if (designs[i].v() != designs.front().v() || designs[i].b() != designs.front().b())
      throw design_error(errc::invalid_argument, "design " + std::to_string(i) + " has different dimensions");
    ++hist[p_rank(designs[i], p)];
  }
  return hist;
}

}  // namespace dsw

#endif
