#ifndef DESIGNSWITCH_DESIGN_HPP
#define DESIGNSWITCH_DESIGN_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "error.hpp"
#include "incidence.hpp"

namespace dsw {

struct DesignParams {
  std::size_t v = 0;
  std::size_t b = 0;
  std::size_t r = 0;
  std::size_t k = 0;
  std::size_t lambda = 0;

  bool symmetric() const noexcept { return v == b; }
  /// Order of a symmetric design.
  std::size_t order() const noexcept { return k - lambda; }

  friend bool operator==(const DesignParams&, const DesignParams&) = default;
};

inline std::string to_string(const DesignParams& p) {
  return "2-(" + std::to_string(p.v) + "," + std::to_string(p.k) + "," + std::to_string(p.lambda) +
         "), r=" + std::to_string(p.r) + ", b=" + std::to_string(p.b);
}

/// Checks the 2-design axioms and returns (v, b, r, k, lambda).
///
/// Checks run in a fixed order: uniform block size, the bound 1 < k < v-1,
/// constant pair coverage, then constant replication. The first failure
/// throws with the offending block, pair or point in the message.
inline DesignParams validate_2design(const IncidenceStructure& inc) {
  const std::size_t v = inc.v();
  const std::size_t b = inc.b();
  if (v < 3 || b < 1)
    throw design_error(errc::invalid_argument,
                       "need v >= 3 and b >= 1, got v=" + std::to_string(v) + " b=" + std::to_string(b));

  const std::size_t k = inc.block_size(0);
  for (std::size_t i = 1; i < b; ++i) {
    const std::size_t s = inc.block_size(i);
    if (s != k)
      throw design_error(errc::not_uniform, "block 0 has size " + std::to_string(k) + " but block " +
                                                std::to_string(i) + " has size " + std::to_string(s));
  }
  if (k <= 1 || k + 1 >= v)
    throw design_error(errc::degenerate_k,
                       "k=" + std::to_string(k) + " violates 1 < k < v-1 for v=" + std::to_string(v));

  const BitMatrix cols = inc.matrix().transposed();
  const std::size_t lambda = and_count(cols.row(0), cols.row(1));
  for (std::size_t p = 0; p < v; ++p) {
    for (std::size_t q = p + 1; q < v; ++q) {
      const std::size_t c = and_count(cols.row(p), cols.row(q));
      if (c != lambda)
        throw design_error(errc::not_balanced, "points {" + std::to_string(p) + "," + std::to_string(q) +
                                                   "} lie on " + std::to_string(c) + " common blocks, expected " +
                                                   std::to_string(lambda));
    }
  }

  const std::size_t r = cols.row_count(0);
  for (std::size_t p = 1; p < v; ++p) {
    if (cols.row_count(p) != r)
      throw design_error(errc::not_balanced, "point " + std::to_string(p) + " lies on " +
                                                 std::to_string(cols.row_count(p)) + " blocks, point 0 on " +
                                                 std::to_string(r));
  }
  if (r * (k - 1) != lambda * (v - 1) || b * k != v * r)
    throw design_error(errc::not_balanced, "counting identities fail");
  return {v, b, r, k, lambda};
}

/// Derived design at a block of a symmetric design: the block's points,
/// with every other block cut down to its intersection with it.
inline IncidenceStructure derived_design(const IncidenceStructure& inc, std::size_t block_index) {
  if (block_index >= inc.b())
    throw design_error(errc::index_out_of_range,
                       "block " + std::to_string(block_index) + " of " + std::to_string(inc.b()));
  const DesignParams params = validate_2design(inc);
  if (!params.symmetric()) throw design_error(errc::not_symmetric, "derived designs need v = b");

  const PointSet base = inc.block(block_index);
  BitMatrix m(inc.b() - 1, base.size());
  std::size_t out_row = 0;
  for (std::size_t i = 0; i < inc.b(); ++i) {
    if (i == block_index) continue;
    for (std::size_t j = 0; j < base.size(); ++j)
      if (inc.incident(i, base[j])) m.set(out_row, j);
    ++out_row;
  }
  IncidenceStructure out(std::move(m));
  // Small lambda leaves a degenerate structure; report it rather than return it.
  validate_2design(out);
  return out;
}

/// Block-intersection sizes over all unordered block pairs, with
/// multiplicities.
struct IntersectionProfile {
  std::map<std::size_t, std::size_t> counts;

  std::size_t pairs() const noexcept {
    std::size_t n = 0;
    for (const auto& [size, mult] : counts) n += mult;
    return n;
  }
  bool is_quasi_symmetric() const noexcept { return counts.size() == 2; }
};

inline IntersectionProfile intersection_profile(const IncidenceStructure& inc) {
  IntersectionProfile out;
  for (std::size_t i = 0; i < inc.b(); ++i)
    for (std::size_t j = i + 1; j < inc.b(); ++j) ++out.counts[and_count(inc.block_bits(i), inc.block_bits(j))];
  return out;
}

}  // namespace dsw

#endif
