#ifndef DESIGNSWITCH_SWITCHING_HPP
#define DESIGNSWITCH_SWITCHING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "design.hpp"
#include "error.hpp"
#include "incidence.hpp"

namespace dsw {

/// A block set B1 with its point partition: P1 misses every block of B1,
/// P2 lies on every block of B1, and each remaining (balanced) point lies on
/// exactly half of them.
struct SwitchingSet {
  std::vector<std::size_t> blocks;
  PointSet p1;
  PointSet p2;
  PointSet balanced;
  // Fingerprint of the B1 rows the partition was computed from.
  std::uint64_t rows_hash = 0;

  std::size_t size() const noexcept { return blocks.size(); }
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t hash_rows(const IncidenceStructure& inc, const std::vector<std::size_t>& blocks) {
  std::uint64_t h = mix64(inc.v() + 0x9e3779b97f4a7c15ULL);
  for (std::size_t i : blocks) {
    h = mix64(h ^ i);
    for (word_t w : inc.block_bits(i)) h = mix64(h ^ w);
  }
  return h;
}

inline std::string join(const std::vector<std::size_t>& xs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
  return out.str();
}

}  // namespace detail

/// Classifies every point by its degree within `blocks` and returns the
/// switching partition. The input is assumed to be a 2-design; only the
/// switching conditions are checked here.
inline SwitchingSet analyze_block_set(const IncidenceStructure& inc, std::vector<std::size_t> blocks) {
  if (blocks.empty()) throw design_error(errc::invalid_argument, "empty block set");
  std::sort(blocks.begin(), blocks.end());
  if (std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end())
    throw design_error(errc::invalid_argument, "block set repeats an index");
  if (blocks.back() >= inc.b())
    throw design_error(errc::index_out_of_range,
                       "block " + std::to_string(blocks.back()) + " of " + std::to_string(inc.b()));
  if (blocks.size() % 2 != 0)
    throw design_error(errc::odd_size, "switching sets have even size, got " + std::to_string(blocks.size()));

  const std::size_t half = blocks.size() / 2;
  SwitchingSet sw;
  for (std::size_t p = 0; p < inc.v(); ++p) {
    std::size_t deg = 0;
    for (std::size_t i : blocks) deg += inc.incident(i, p) ? 1 : 0;
    if (deg == 0)
      sw.p1.push_back(p);
    else if (deg == blocks.size())
      sw.p2.push_back(p);
    else if (deg == half)
      sw.balanced.push_back(p);
    else
      throw design_error(errc::not_switching_set, "point " + std::to_string(p) + " has degree " +
                                                      std::to_string(deg) + " in a set of " +
                                                      std::to_string(blocks.size()) + " blocks");
  }
  sw.rows_hash = detail::hash_rows(inc, blocks);
  sw.blocks = std::move(blocks);
  return sw;
}

namespace detail {

inline void check_fresh(const IncidenceStructure& inc, const SwitchingSet& sw) {
  if (sw.blocks.empty() || sw.blocks.back() >= inc.b() ||
      sw.p1.size() + sw.p2.size() + sw.balanced.size() != inc.v() || hash_rows(inc, sw.blocks) != sw.rows_hash)
    throw design_error(errc::stale_switching_set,
                       "partition for blocks {" + join(sw.blocks) + "} does not match this design");
}

inline std::vector<word_t> point_mask(std::size_t v, const PointSet& points) {
  std::vector<word_t> mask(words_for(v), 0);
  for (std::size_t p : points) mask[p / word_bits] |= word_t{1} << (p % word_bits);
  return mask;
}

inline void complement_on(IncidenceStructure& inc, const SwitchingSet& sw, const std::vector<word_t>& mask) {
  for (std::size_t i : sw.blocks) {
    auto row = inc.matrix().row(i);
    for (std::size_t w = 0; w < row.size(); ++w) row[w] ^= mask[w];
  }
}

}  // namespace detail

/// Complements incidence between the blocks of `sw` and its balanced
/// points. Applying the same set twice restores the input.
inline IncidenceStructure apply_switching(const IncidenceStructure& inc, const SwitchingSet& sw) {
  detail::check_fresh(inc, sw);
  IncidenceStructure out = inc;
  detail::complement_on(out, sw, detail::point_mask(inc.v(), sw.balanced));
  return out;
}

struct EnumerationOptions {
  enum class Strategy { exhaustive, grouped };

  std::size_t max_size = 2;
  Strategy strategy = Strategy::exhaustive;
  /// Block groups for `grouped`; candidates are unions of whole groups.
  std::vector<std::vector<std::size_t>> groups;
  /// Search-node limit; 0 means unlimited.
  std::uint64_t node_budget = 50'000'000;
};

/// Streams switching sets to `visit` in lexicographic order of their sorted
/// block (or group) indices. `visit` returns false to stop early.
///
/// The exhaustive walk extends a prefix of j blocks only while some even
/// target size s <= max_size can still balance every point: a point seen on
/// d of the j blocks with 0 < d < j forces s >= 2*max(d, j-d).
inline void for_each_switching_set(const IncidenceStructure& inc, const EnumerationOptions& opt,
                                   const std::function<bool(const SwitchingSet&)>& visit) {
  if (opt.max_size < 2) return;
  std::uint64_t nodes = 0;
  auto tick = [&] {
    if (opt.node_budget != 0 && ++nodes > opt.node_budget)
      throw design_error(errc::budget_exceeded, "switching-set search exceeded " + std::to_string(opt.node_budget) +
                                                    " nodes");
  };

  if (opt.strategy == EnumerationOptions::Strategy::grouped) {
    const std::size_t g = opt.groups.size();
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> blocks;
    bool stop = false;
    std::function<void(std::size_t)> walk = [&](std::size_t next) {
      for (std::size_t gi = next; gi < g && !stop; ++gi) {
        tick();
        const std::size_t before = blocks.size();
        blocks.insert(blocks.end(), opt.groups[gi].begin(), opt.groups[gi].end());
        if (blocks.size() <= opt.max_size) {
          chosen.push_back(gi);
          if (blocks.size() % 2 == 0) {
            try {
              if (!visit(analyze_block_set(inc, blocks))) stop = true;
            } catch (const design_error& e) {
              if (e.code() != errc::not_switching_set) throw;
            }
          }
          if (!stop) walk(gi + 1);
          chosen.pop_back();
        }
        blocks.resize(before);
      }
    };
    walk(0);
    return;
  }

  const std::size_t v = inc.v();
  const std::size_t b = inc.b();
  const std::size_t max_size = std::min(opt.max_size, b);
  std::vector<std::size_t> deg(v, 0);
  std::vector<std::size_t> chosen;
  bool stop = false;

  auto is_switching = [&](std::size_t j) {
    for (std::size_t p = 0; p < v; ++p)
      if (deg[p] != 0 && deg[p] != j && 2 * deg[p] != j) return false;
    return true;
  };
  // Smallest even size >= j+1 still reachable from the current prefix.
  auto min_target = [&](std::size_t j) {
    std::size_t s = j + 1;
    for (std::size_t p = 0; p < v; ++p)
      if (deg[p] != 0 && deg[p] != j) s = std::max(s, 2 * std::max(deg[p], j - deg[p]));
    return s + (s % 2);
  };

  std::function<void(std::size_t)> walk = [&](std::size_t next) {
    const std::size_t j = chosen.size();
    const std::size_t s = min_target(j);
    if (s > max_size || s - j > b - next) return;
    for (std::size_t i = next; i < b && !stop; ++i) {
      if (s - j > b - i) break;
      tick();
      for (std::size_t p = 0; p < v; ++p) deg[p] += inc.incident(i, p) ? 1 : 0;
      chosen.push_back(i);
      if (chosen.size() % 2 == 0 && is_switching(chosen.size())) {
        if (!visit(analyze_block_set(inc, chosen))) stop = true;
      }
      if (!stop && chosen.size() < max_size) walk(i + 1);
      chosen.pop_back();
      for (std::size_t p = 0; p < v; ++p) deg[p] -= inc.incident(i, p) ? 1 : 0;
    }
  };
  walk(0);
}

inline std::vector<SwitchingSet> enumerate_switching_sets(const IncidenceStructure& inc,
                                                          const EnumerationOptions& opt) {
  std::vector<SwitchingSet> out;
  for_each_switching_set(inc, opt, [&](const SwitchingSet& sw) {
    out.push_back(sw);
    return true;
  });
  return out;
}

/// Every design reachable by switching on a subset of pairwise block-disjoint
/// switching sets. Entry `mask` has set i applied iff bit i of `mask` is
/// set; entry 0 is the input. Duplicates are kept.
inline std::vector<IncidenceStructure> switching_closure(const IncidenceStructure& inc,
                                                         const std::vector<SwitchingSet>& sets) {
  if (sets.size() > 24) throw design_error(errc::invalid_argument, "closure over more than 24 sets");
  std::vector<char> used(inc.b(), 0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    detail::check_fresh(inc, sets[s]);
    for (std::size_t i : sets[s].blocks) {
      if (used[i])
        throw design_error(errc::overlapping_sets,
                           "block " + std::to_string(i) + " appears in more than one switching set");
      used[i] = 1;
    }
  }
  std::vector<std::vector<word_t>> masks;
  for (const auto& sw : sets) masks.push_back(detail::point_mask(inc.v(), sw.balanced));

  const std::size_t total = std::size_t{1} << sets.size();
  std::vector<IncidenceStructure> out;
  out.reserve(total);
  for (std::size_t mask = 0; mask < total; ++mask) {
    IncidenceStructure d = inc;
    for (std::size_t s = 0; s < sets.size(); ++s)
      if (mask >> s & 1U) detail::complement_on(d, sets[s], masks[s]);
    out.push_back(std::move(d));
  }
  return out;
}

/// Incidence structure with the blocks of `sw` as points (in `sw.blocks`
/// order) and one block per balanced point Q, made of the B1 blocks through
/// Q. For a symmetric design this is a subdesign of the dual. The result is
/// not validated here: small switching sets give degenerate structures.
inline IncidenceStructure trade_subdesign(const IncidenceStructure& inc, const SwitchingSet& sw) {
  if (inc.v() != inc.b())
    throw design_error(errc::not_symmetric,
                       "v=" + std::to_string(inc.v()) + " differs from b=" + std::to_string(inc.b()));
  detail::check_fresh(inc, sw);
  BitMatrix m(sw.balanced.size(), sw.blocks.size());
  for (std::size_t q = 0; q < sw.balanced.size(); ++q)
    for (std::size_t j = 0; j < sw.blocks.size(); ++j)
      if (inc.incident(sw.blocks[j], sw.balanced[q])) m.set(q, j);
  return IncidenceStructure(std::move(m));
}

/// Parses every "S: i1 i2 ..." line of a fixture into a block-index list.
inline std::vector<std::vector<std::size_t>> parse_switching_lines(std::istream& in) {
  std::vector<std::vector<std::size_t>> out;
  std::string line;
  std::size_t lineno = 0;
  while (detail::next_content_line(in, line, lineno)) {
    if (!detail::is_switching_line(line)) continue;
    std::istringstream ls(line.substr(2));
    std::vector<std::size_t> blocks;
    long long x = 0;
    while (ls >> x) {
      if (x < 0) throw detail::parse_failure(lineno, "negative block index");
      blocks.push_back(static_cast<std::size_t>(x));
    }
    if (!ls.eof()) throw detail::parse_failure(lineno, "malformed switching-set line");
    out.push_back(std::move(blocks));
  }
  return out;
}

inline std::string format_switching_line(const SwitchingSet& sw) { return "S: " + detail::join(sw.blocks); }

}  // namespace dsw

#endif
