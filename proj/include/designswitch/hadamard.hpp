#ifndef DESIGNSWITCH_HADAMARD_HPP
#define DESIGNSWITCH_HADAMARD_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "design.hpp"
#include "error.hpp"
#include "incidence.hpp"
#include "sign_matrix.hpp"
#include "switching.hpp"

namespace dsw {

inline bool is_hadamard(const SignMatrix& h) {
  for (std::size_t i = 0; i < h.order(); ++i)
    for (std::size_t j = i + 1; j < h.order(); ++j)
      if (h.row_dot(i, j) != 0) return false;
  return true;
}

inline bool is_regular(const SignMatrix& h) {
  if (h.order() == 0) return true;
  const long long rs = h.row_sum(0);
  const long long cs = h.col_sum(0);
  for (std::size_t i = 1; i < h.order(); ++i)
    if (h.row_sum(i) != rs || h.col_sum(i) != cs) return false;
  return true;
}

namespace detail {

inline void check_bush_order(const SignMatrix& h, std::size_t n) {
  if (n == 0 || h.order() != 4 * n * n)
    throw design_error(errc::order_mismatch, "order " + std::to_string(h.order()) + " is not 4n^2 for n=" +
                                                 std::to_string(n));
}

// Sum of block (bi, bj) row `r` (local index) in a grid of 2n x 2n blocks.
inline long long block_row_sum(const SignMatrix& h, std::size_t size, std::size_t bi, std::size_t bj, std::size_t r) {
  long long s = 0;
  for (std::size_t c = 0; c < size; ++c) s += h(bi * size + r, bj * size + c);
  return s;
}

inline long long block_col_sum(const SignMatrix& h, std::size_t size, std::size_t bi, std::size_t bj, std::size_t c) {
  long long s = 0;
  for (std::size_t r = 0; r < size; ++r) s += h(bi * size + r, bj * size + c);
  return s;
}

}  // namespace detail

/// Diagonal 2n x 2n blocks all +1, every off-diagonal block with zero row
/// and column sums. Orthogonality is not part of this predicate.
inline bool is_bush_type(const SignMatrix& h, std::size_t n) {
  detail::check_bush_order(h, n);
  const std::size_t size = 2 * n;
  for (std::size_t bi = 0; bi < size; ++bi) {
    for (std::size_t bj = 0; bj < size; ++bj) {
      for (std::size_t t = 0; t < size; ++t) {
        const long long rs = detail::block_row_sum(h, size, bi, bj, t);
        const long long cs = detail::block_col_sum(h, size, bi, bj, t);
        const long long want = bi == bj ? static_cast<long long>(size) : 0;
        if (rs != want || cs != want) return false;
      }
    }
  }
  return true;
}

/// Each block row equals the previous one shifted right by one block, the
/// block wrapping around to the front being negated.
inline bool is_block_negacyclic(const SignMatrix& h, std::size_t n) {
  detail::check_bush_order(h, n);
  const std::size_t size = 2 * n;
  for (std::size_t bi = 0; bi + 1 < size; ++bi) {
    for (std::size_t bj = 0; bj < size; ++bj) {
      const std::size_t src = bj == 0 ? size - 1 : bj - 1;
      const int sign = bj == 0 ? -1 : 1;
      for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c)
          if (h((bi + 1) * size + r, bj * size + c) != sign * h(bi * size + r, src * size + c)) return false;
    }
  }
  return true;
}

/// Smallest u with 4u^2 == m, or 0.
inline std::size_t menon_parameter(std::size_t m) noexcept {
  for (std::size_t u = 1; 4 * u * u <= m; ++u)
    if (4 * u * u == m) return u;
  return 0;
}

/// Entry map +1 -> 0, -1 -> 1 on a regular Hadamard matrix with row sum
/// +2u, giving a symmetric (4u^2, 2u^2-u, u^2-u) design.
inline IncidenceStructure hadamard_to_menon(const SignMatrix& h) {
  if (!is_hadamard(h)) throw design_error(errc::not_hadamard, "rows are not pairwise orthogonal");
  const std::size_t u = menon_parameter(h.order());
  if (!is_regular(h) || u == 0) throw design_error(errc::not_regular, "row and column sums are not constant");
  const long long sum = h.row_sum(0);
  if (sum == -2 * static_cast<long long>(u))
    throw design_error(errc::wrong_row_sum, "row sum is -2u=" + std::to_string(sum) + "; negate the matrix first");
  if (sum != 2 * static_cast<long long>(u))
    throw design_error(errc::not_regular, "row sum " + std::to_string(sum) + " is not +-2u");
  return IncidenceStructure(h.negative_bits());
}

/// Inverse entry map for a (4n^2, 2n^2-n, n^2-n) design.
inline SignMatrix menon_to_hadamard(const IncidenceStructure& inc, std::size_t n) {
  const std::size_t m = 4 * n * n;
  if (n == 0 || inc.v() != m || inc.b() != m)
    throw design_error(errc::order_mismatch, "expected a " + std::to_string(m) + "x" + std::to_string(m) +
                                                 " incidence matrix, got " + std::to_string(inc.b()) + "x" +
                                                 std::to_string(inc.v()));
  const std::size_t k = 2 * n * n - n;
  for (std::size_t i = 0; i < inc.b(); ++i)
    if (inc.block_size(i) != k)
      throw design_error(errc::not_uniform, "block " + std::to_string(i) + " has size " +
                                                std::to_string(inc.block_size(i)) + ", expected " + std::to_string(k));
  SignMatrix h(inc.matrix());
  if (!is_hadamard(h)) throw design_error(errc::not_hadamard, "design is not a Menon design");
  return h;
}

/// Global negation when the row sums are negative.
inline SignMatrix with_positive_row_sum(const SignMatrix& h) {
  return h.order() > 0 && h.row_sum(0) < 0 ? h.negated() : h;
}

/// The 2n switching sets given by the diagonal block rows of the Menon design
/// of a Bush-type matrix: set i is blocks 2n*i .. 2n*i+2n-1, with P1 the
/// points of group i and P2 empty.
inline std::vector<SwitchingSet> diagonal_switching_sets(const IncidenceStructure& inc, std::size_t n) {
  const std::size_t size = 2 * n;
  if (n == 0 || inc.v() != size * size || inc.b() != size * size)
    throw design_error(errc::not_bush_structured, "incidence matrix is not " + std::to_string(size * size) +
                                                      " square");
  validate_2design(inc);
  for (std::size_t bi = 0; bi < size; ++bi) {
    for (std::size_t bj = 0; bj < size; ++bj) {
      const std::size_t want = bi == bj ? 0 : n;
      for (std::size_t t = 0; t < size; ++t) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t x = 0; x < size; ++x) {
          row += inc.incident(bi * size + t, bj * size + x) ? 1 : 0;
          col += inc.incident(bi * size + x, bj * size + t) ? 1 : 0;
        }
        if (row != want || col != want)
          throw design_error(errc::not_bush_structured,
                             "block (" + std::to_string(bi) + "," + std::to_string(bj) + ") is not " +
                                 (bi == bj ? "zero" : "balanced"));
      }
    }
  }
  std::vector<SwitchingSet> out;
  for (std::size_t bi = 0; bi < size; ++bi) {
    std::vector<std::size_t> blocks(size);
    for (std::size_t t = 0; t < size; ++t) blocks[t] = bi * size + t;
    out.push_back(analyze_block_set(inc, blocks));
  }
  return out;
}

/// Block groups (consecutive runs of 2n) for grouped enumeration.
inline std::vector<std::vector<std::size_t>> bush_block_groups(std::size_t n) {
  const std::size_t size = 2 * n;
  std::vector<std::vector<std::size_t>> groups(size);
  for (std::size_t bi = 0; bi < size; ++bi)
    for (std::size_t t = 0; t < size; ++t) groups[bi].push_back(bi * size + t);
  return groups;
}

enum class BushSymmetry { free, block_negacyclic };

struct BushSearchOptions {
  std::size_t n = 1;
  BushSymmetry symmetry = BushSymmetry::free;
  /// Maximum number of matrices emitted.
  std::size_t limit = 1;
  /// Search-node limit; 0 means unlimited.
  std::uint64_t node_budget = 200'000'000;
};

namespace detail {

// A row of the whole matrix as m bits, bit set = -1.
using RowBits = std::vector<word_t>;

inline bool get_bit(const RowBits& r, std::size_t i) noexcept { return (r[i / word_bits] >> (i % word_bits)) & 1U; }
inline void put_bit(RowBits& r, std::size_t i, bool value) noexcept {
  const word_t mask = word_t{1} << (i % word_bits);
  r[i / word_bits] = value ? (r[i / word_bits] | mask) : (r[i / word_bits] & ~mask);
}

inline long long dot(const RowBits& a, const RowBits& b, std::size_t m) noexcept {
  std::size_t diff = 0;
  for (std::size_t w = 0; w < a.size(); ++w) diff += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  return static_cast<long long>(m) - 2 * static_cast<long long>(diff);
}

class BushSearch {
 public:
  BushSearch(const BushSearchOptions& opt, const std::function<bool(const SignMatrix&)>& visit)
      : opt_(opt), visit_(visit), n_(opt.n), size_(2 * opt.n), m_(4 * opt.n * opt.n), words_(words_for(m_)) {
    // Balanced segments, ordered as '+'/'-' strings with '+' first.
    std::vector<std::string> keys;
    for (std::uint32_t mask = 0; mask < (1U << size_); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n_) continue;
      segs_.push_back(mask);
    }
    auto key = [&](std::uint32_t mask) {
      std::string s(size_, '+');
      for (std::size_t c = 0; c < size_; ++c)
        if (mask >> c & 1U) s[c] = '-';
      return s;
    };
    std::sort(segs_.begin(), segs_.end(), [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
  }

  void run() {
    if (opt_.limit == 0) return;
    if (opt_.symmetry == BushSymmetry::free)
      run_free();
    else
      run_negacyclic();
  }

 private:
  void tick() {
    if (opt_.node_budget != 0 && ++nodes_ > opt_.node_budget)
      throw design_error(errc::budget_exceeded,
                         "Bush-type search exceeded " + std::to_string(opt_.node_budget) + " nodes");
  }

  std::uint32_t segment(const RowBits& r, std::size_t block) const {
    std::uint32_t s = 0;
    for (std::size_t c = 0; c < size_; ++c)
      if (get_bit(r, block * size_ + c)) s |= 1U << c;
    return s;
  }
  void put_segment(RowBits& r, std::size_t block, std::uint32_t s) const {
    for (std::size_t c = 0; c < size_; ++c) put_bit(r, block * size_ + c, s >> c & 1U);
  }

  bool emit(const std::vector<RowBits>& rows) {
    BitMatrix bits(m_, m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (get_bit(rows[i], j)) bits.set(i, j);
    SignMatrix h(std::move(bits));
    if (!is_hadamard(h) || !is_bush_type(h, n_))
      throw std::logic_error("Bush-type search produced a matrix failing its own acceptance test");
    ++emitted_;
    const bool more = visit_(h);
    return more && emitted_ < opt_.limit;
  }

  // ---- free: fill rows top to bottom, off-diagonal blocks left to right.

  void run_free() {
    rows_.assign(m_, RowBits(words_, 0));
    minus_.assign(size_ * m_, 0);
    free_row(0);
  }

  // Returns false when the search should stop.
  bool free_row(std::size_t row) {
    if (row == m_) return emit(rows_);
    const std::size_t bi = row / size_;
    const std::size_t local = row % size_;
    std::fill(rows_[row].begin(), rows_[row].end(), 0);
    std::vector<long long> dots(row, 0);
    for (std::size_t prev = 0; prev < row; ++prev)
      dots[prev] = prev / size_ == bi ? static_cast<long long>(size_) : 0;
    return free_block(row, bi, local, bi == 0 ? 1 : 0, dots);
  }

  bool free_block(std::size_t row, std::size_t bi, std::size_t local, std::size_t bj, std::vector<long long>& dots) {
    if (bj == size_) {
      for (long long d : dots)
        if (d != 0) return true;
      return free_row(row + 1);
    }
    std::size_t next = bj + 1;
    if (next == bi) ++next;
    const std::size_t remaining = [&] {
      std::size_t r = 0;
      for (std::size_t x = next; x < size_; ++x) r += x != bi ? 1 : 0;
      return r;
    }();
    for (std::uint32_t seg : segs_) {
      tick();
      bool feasible = true;
      for (std::size_t c = 0; c < size_ && feasible; ++c) {
        const std::size_t col = bi * m_ + bj * size_ + c;
        const bool neg = seg >> c & 1U;
        const std::size_t minus = minus_[col] + (neg ? 1 : 0);
        const std::size_t plus = local + 1 - minus;
        feasible = minus <= n_ && plus <= n_;
      }
      if (!feasible) continue;
      bool ok = true;
      std::vector<long long> next_dots = dots;
      for (std::size_t prev = 0; prev < row && ok; ++prev) {
        const std::uint32_t other = segment(rows_[prev], bj);
        next_dots[prev] += static_cast<long long>(size_) - 2 * std::popcount(seg ^ other);
        ok = std::llabs(next_dots[prev]) <= static_cast<long long>(size_ * remaining);
      }
      if (!ok) continue;
      put_segment(rows_[row], bj, seg);
      std::size_t* minus = &minus_[bi * m_ + bj * size_];
      for (std::size_t c = 0; c < size_; ++c) minus[c] += seg >> c & 1U;
      const bool go_on = free_block(row, bi, local, next, next_dots);
      for (std::size_t c = 0; c < size_; ++c) minus[c] -= seg >> c & 1U;
      put_segment(rows_[row], bj, 0);
      if (!go_on) return false;
    }
    return true;
  }

  // ---- block negacyclic: the first block row determines the matrix.
  //
  // Row r of block row s is N^s applied to row r of block row 0, where N
  // shifts blocks right and negates the block wrapping to the front. The
  // matrix is Hadamard iff the 2n first-block-row vectors have vanishing
  // negacyclic correlations <X_a, N^s X_b> for every shift s (s = 0 only
  // for a != b). Candidate rows with vanishing autocorrelation are listed
  // first; block row 0 is then assembled as an increasing sequence of
  // candidates, so each solution is reported once per ordering of its rows.

  RowBits shift(const RowBits& x, std::size_t s) const {
    RowBits out(words_, 0);
    for (std::size_t j = 0; j < size_; ++j) {
      std::uint32_t seg;
      if (j >= s)
        seg = segment(x, j - s);
      else
        seg = ~segment(x, j + size_ - s) & ((1U << size_) - 1);
      put_segment(out, j, seg);
    }
    return out;
  }

  void run_negacyclic() {
    std::vector<std::uint32_t> choice(size_, 0);
    RowBits x(words_, 0);
    list_candidates(1, choice, x);

    std::vector<std::size_t> pool(candidates_.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    minus_.assign(m_, 0);
    chosen_.clear();
    assemble(pool);
  }

  void list_candidates(std::size_t block, std::vector<std::uint32_t>& choice, RowBits& x) {
    if (block == size_) {
      for (std::size_t s = 1; s < size_; ++s)
        if (dot(x, shift(x, s), m_) != 0) return;
      std::vector<RowBits> shifts(size_);
      for (std::size_t s = 0; s < size_; ++s) shifts[s] = shift(x, s);
      candidates_.push_back(std::move(shifts));
      return;
    }
    for (std::uint32_t seg : segs_) {
      tick();
      choice[block] = seg;
      put_segment(x, block, seg);
      if (autocorrelation_feasible(block, x)) list_candidates(block + 1, choice, x);
    }
    put_segment(x, block, 0);
  }

  // Terms <X_j, +-X_{j-s}> with both blocks already placed are exact; each
  // missing term is bounded by 2n in absolute value.
  bool autocorrelation_feasible(std::size_t placed, const RowBits& x) const {
    for (std::size_t s = 1; s < size_; ++s) {
      long long known = 0;
      long long missing = 0;
      for (std::size_t j = 0; j < size_; ++j) {
        const std::size_t other = (j + size_ - s) % size_;
        if (j > placed || other > placed) {
          ++missing;
          continue;
        }
        const std::uint32_t a = segment(x, j);
        std::uint32_t b = segment(x, other);
        if (j < s) b = ~b & ((1U << size_) - 1);
        known += static_cast<long long>(size_) - 2 * std::popcount(a ^ b);
      }
      if (std::llabs(known) > missing * static_cast<long long>(size_)) return false;
    }
    return true;
  }

  bool compatible(std::size_t a, std::size_t b) const {
    const RowBits& xa = candidates_[a][0];
    for (std::size_t s = 0; s < size_; ++s)
      if (dot(xa, candidates_[b][s], m_) != 0) return false;
    return true;
  }

  bool column_feasible(std::size_t c) const {
    const RowBits& x = candidates_[c][0];
    const std::size_t filled = chosen_.size() + 1;
    for (std::size_t col = size_; col < m_; ++col) {
      const std::size_t minus = minus_[col] + (get_bit(x, col) ? 1 : 0);
      if (minus > n_ || filled - minus > n_) return false;
    }
    return true;
  }

  bool assemble(const std::vector<std::size_t>& pool) {
    if (chosen_.size() == size_) {
      std::vector<RowBits> rows(m_);
      for (std::size_t s = 0; s < size_; ++s)
        for (std::size_t r = 0; r < size_; ++r) rows[s * size_ + r] = candidates_[chosen_[r]][s];
      return emit(rows);
    }
    const std::size_t need = size_ - chosen_.size();
    for (std::size_t idx = 0; idx < pool.size(); ++idx) {
      if (pool.size() - idx < need) break;
      tick();
      const std::size_t c = pool[idx];
      if (!column_feasible(c)) continue;
      std::vector<std::size_t> next;
      for (std::size_t j = idx + 1; j < pool.size(); ++j)
        if (compatible(c, pool[j])) next.push_back(pool[j]);
      if (next.size() + 1 < need) continue;
      chosen_.push_back(c);
      for (std::size_t col = 0; col < m_; ++col) minus_[col] += get_bit(candidates_[c][0], col) ? 1 : 0;
      const bool go_on = assemble(next);
      for (std::size_t col = 0; col < m_; ++col) minus_[col] -= get_bit(candidates_[c][0], col) ? 1 : 0;
      chosen_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  const BushSearchOptions& opt_;
  const std::function<bool(const SignMatrix&)>& visit_;
  std::size_t n_;
  std::size_t size_;
  std::size_t m_;
  std::size_t words_;
  std::vector<std::uint32_t> segs_;
  std::uint64_t nodes_ = 0;
  std::size_t emitted_ = 0;

  std::vector<RowBits> rows_;
  // Count of -1 entries per column; free mode keeps one copy per block row.
  std::vector<std::size_t> minus_;

  std::vector<std::vector<RowBits>> candidates_;
  std::vector<std::size_t> chosen_;
};

}  // namespace detail

/// Backtracking search for Bush-type Hadamard matrices of order 4n^2,
/// streaming each one to `visit` in a fixed order until `limit` matrices
/// were produced or `visit` returns false.
///
/// `free` fills rows top to bottom with zero-sum off-diagonal segments and
/// emits every Bush-type matrix; it is meant for n <= 3. `block_negacyclic`
/// searches the first block row only (n <= 5) and emits the solutions whose
/// first-block-row rows are in increasing candidate order; every block
/// negacyclic Bush-type matrix is a row permutation within block rows of an
/// emitted one.
inline void search_bush_type(const BushSearchOptions& opt, const std::function<bool(const SignMatrix&)>& visit) {
  if (opt.n == 0) throw design_error(errc::invalid_argument, "n must be positive");
  if (opt.symmetry == BushSymmetry::free && opt.n > 3)
    throw design_error(errc::invalid_argument, "free search supports n <= 3");
  if (opt.symmetry == BushSymmetry::block_negacyclic && opt.n > 5)
    throw design_error(errc::invalid_argument, "block negacyclic search supports n <= 5");
  detail::BushSearch(opt, visit).run();
}

inline std::vector<SignMatrix> search_bush_type(const BushSearchOptions& opt) {
  std::vector<SignMatrix> out;
  search_bush_type(opt, [&](const SignMatrix& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

}  // namespace dsw

#endif
