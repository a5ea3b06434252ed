#ifndef DESIGNSWITCH_ISOMORPHISM_HPP
#define DESIGNSWITCH_ISOMORPHISM_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "canon.hpp"
#include "error.hpp"
#include "hadamard.hpp"
#include "incidence.hpp"
#include "sign_matrix.hpp"

namespace dsw {

/// Canonical byte string of an isomorphism (or equivalence) class together
/// with the order of the automorphism group found while canonizing.
struct Certificate {
  std::vector<std::uint8_t> bytes;
  BigInt group_order = 1;

  /// Lowercase hex SHA-256 of `bytes`.
  std::string digest() const {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += hex[md[i] >> 4];
      out += hex[md[i] & 0xF];
    }
    return out;
  }

  friend bool operator==(const Certificate& a, const Certificate& b) { return a.bytes == b.bytes; }
};

namespace detail {

// Replaces 64-bit invariant values by their rank among the distinct values,
// offset so that class `cls` sorts before class `cls + 1`.
inline void assign_ranked_colors(ColoredGraph& g, std::size_t first, const std::vector<std::uint64_t>& inv,
                                 std::uint64_t cls) {
  std::vector<std::uint64_t> sorted = inv;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const auto rank = static_cast<std::uint64_t>(std::lower_bound(sorted.begin(), sorted.end(), inv[i]) - sorted.begin());
    g.set_color(static_cast<Vertex>(first + i), (cls << 32) | rank);
  }
}

// For each row x of `rows`: histogram over pairs {y, z} of the other rows of
// |x & y & z|. For a 2-design's point columns this is the distribution of
// triple coverage numbers through each point.
inline std::vector<std::uint64_t> triple_invariant(const BitMatrix& rows) {
  const std::size_t n = rows.rows();
  const std::size_t width = rows.cols() + 1;
  std::vector<std::uint32_t> hist(n * width, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        const std::size_t c = and3_count(rows.row(x), rows.row(y), rows.row(z));
        ++hist[x * width + c];
        ++hist[y * width + c];
        ++hist[z * width + c];
      }
  std::vector<std::uint64_t> inv(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::uint64_t h = hmix(0, rows.row_count(x));
    for (std::size_t c = 0; c < width; ++c)
      if (hist[x * width + c] != 0) h = hmix(h, hmix(c, hist[x * width + c]));
    inv[x] = h;
  }
  return inv;
}

// Structures beyond this size skip the cubic triple invariant.
inline constexpr std::size_t triple_invariant_limit = 400;

inline std::vector<std::uint8_t> pack_bits(const std::vector<word_t>& adj, std::size_t stride, std::size_t row_begin,
                                           std::size_t row_end, std::size_t col_begin, std::size_t col_end,
                                           std::vector<std::uint8_t> header) {
  std::vector<std::uint8_t> out = std::move(header);
  std::uint8_t acc = 0;
  int nbits = 0;
  for (std::size_t i = row_begin; i < row_end; ++i) {
    for (std::size_t j = col_begin; j < col_end; ++j) {
      acc = static_cast<std::uint8_t>(acc << 1 | ((adj[i * stride + j / word_bits] >> (j % word_bits)) & 1U));
      if (++nbits == 8) {
        out.push_back(acc);
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits != 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - nbits)));
  return out;
}

inline std::vector<std::uint8_t> size_header(char tag, std::size_t a, std::size_t b) {
  std::vector<std::uint8_t> h{static_cast<std::uint8_t>(tag)};
  for (std::size_t x : {a, b})
    for (int s = 24; s >= 0; s -= 8) h.push_back(static_cast<std::uint8_t>(x >> s));
  return h;
}

}  // namespace detail

/// Bipartite point/block incidence graph: points are vertices 0..v-1, blocks
/// v..v+b-1. Points always sort before blocks, so no isomorphism of the
/// graph exchanges the two sides.
inline ColoredGraph design_graph(const IncidenceStructure& inc) {
  const std::size_t v = inc.v();
  ColoredGraph g(v + inc.b());
  for (std::size_t i = 0; i < inc.b(); ++i)
    for (std::size_t p = 0; p < v; ++p)
      if (inc.incident(i, p)) g.add_edge(static_cast<Vertex>(p), static_cast<Vertex>(v + i));

  const bool small = std::max(v, inc.b()) <= detail::triple_invariant_limit;
  std::vector<std::uint64_t> point_inv(v, 0);
  std::vector<std::uint64_t> block_inv(inc.b(), 0);
  if (small) {
    point_inv = detail::triple_invariant(inc.matrix().transposed());
    block_inv = detail::triple_invariant(inc.matrix());
  }
  detail::assign_ranked_colors(g, 0, point_inv, 0);
  detail::assign_ranked_colors(g, v, block_inv, 1);
  return g;
}

inline Certificate design_certificate(const IncidenceStructure& inc) {
  const ColoredGraph g = design_graph(inc);
  const CanonicalLabeling cl = canonical_labeling(g);
  const std::size_t v = inc.v();
  Certificate cert;
  cert.bytes = detail::pack_bits(cl.canonical_adjacency, words_for(g.size()), 0, v, v, g.size(),
                                 detail::size_header('D', v, inc.b()));
  cert.group_order = cl.group_order;
  return cert;
}

inline bool are_isomorphic(const IncidenceStructure& a, const IncidenceStructure& b) {
  if (a.v() != b.v() || a.b() != b.b()) return false;
  return design_certificate(a) == design_certificate(b);
}

inline BigInt aut_group_order(const IncidenceStructure& inc) { return design_certificate(inc).group_order; }

inline bool is_self_dual(const IncidenceStructure& inc) {
  if (inc.v() != inc.b())
    throw design_error(errc::not_symmetric,
                       "v=" + std::to_string(inc.v()) + " differs from b=" + std::to_string(inc.b()));
  return design_certificate(inc) == design_certificate(dual(inc));
}

namespace detail {

// Per row: histogram over triples of other rows of |sum_c h_xc h_yc h_zc h_wc|.
// Invariant under row and column permutations and negations.
inline std::vector<std::uint64_t> four_profile(const SignMatrix& h) {
  const std::size_t m = h.order();
  const BitMatrix& bits = h.negative_bits();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> hist(m * width, 0);
  std::vector<word_t> xy(bits.stride());
  std::vector<word_t> xyz(bits.stride());
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x + 1; y < m; ++y) {
      for (std::size_t w = 0; w < xy.size(); ++w) xy[w] = bits.row(x)[w] ^ bits.row(y)[w];
      for (std::size_t z = y + 1; z < m; ++z) {
        for (std::size_t w = 0; w < xy.size(); ++w) xyz[w] = xy[w] ^ bits.row(z)[w];
        for (std::size_t t = z + 1; t < m; ++t) {
          std::size_t diff = 0;
          for (std::size_t w = 0; w < xy.size(); ++w)
            diff += static_cast<std::size_t>(std::popcount(xyz[w] ^ bits.row(t)[w]));
          const long long s = static_cast<long long>(m) - 2 * static_cast<long long>(diff);
          const auto a = static_cast<std::size_t>(s < 0 ? -s : s);
          ++hist[x * width + a];
          ++hist[y * width + a];
          ++hist[z * width + a];
          ++hist[t * width + a];
        }
      }
    }
  std::vector<std::uint64_t> inv(m);
  for (std::size_t x = 0; x < m; ++x) {
    std::uint64_t hv = 0;
    for (std::size_t a = 0; a < width; ++a)
      if (hist[x * width + a] != 0) hv = hmix(hv, hmix(a, hist[x * width + a]));
    inv[x] = hv;
  }
  return inv;
}

inline constexpr std::size_t four_profile_limit = 128;

}  // namespace detail

/// Graph whose isomorphism classes are the Hadamard equivalence classes:
/// vertices r_i^+, r_i^- (0..2m-1) and c_j^+, c_j^- (2m..4m-1), with r_i^s
/// joined to c_j^t iff s*t == h_ij. Row vertices sort before column vertices.
inline ColoredGraph hadamard_graph(const SignMatrix& h) {
  const std::size_t m = h.order();
  ColoredGraph g(4 * m);
  auto row = [m](std::size_t i, bool neg) { return static_cast<Vertex>(neg ? m + i : i); };
  auto col = [m](std::size_t j, bool neg) { return static_cast<Vertex>(2 * m + (neg ? m + j : j)); };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const bool same = h(i, j) > 0;
      g.add_edge(row(i, false), col(j, !same));
      g.add_edge(row(i, true), col(j, same));
    }
  std::vector<std::uint64_t> row_inv(m, 0);
  std::vector<std::uint64_t> col_inv(m, 0);
  if (m <= detail::four_profile_limit) {
    row_inv = detail::four_profile(h);
    col_inv = detail::four_profile(h.transposed());
  }
  std::vector<std::uint64_t> rows(2 * m), cols(2 * m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = rows[m + i] = row_inv[i];
  for (std::size_t j = 0; j < m; ++j) cols[j] = cols[m + j] = col_inv[j];
  detail::assign_ranked_colors(g, 0, rows, 0);
  detail::assign_ranked_colors(g, 2 * m, cols, 1);
  return g;
}

/// Certificate of the Hadamard equivalence class (row/column permutations
/// and negations).
inline Certificate hadamard_certificate(const SignMatrix& h) {
  if (!is_hadamard(h)) throw design_error(errc::not_hadamard, "rows are not pairwise orthogonal");
  const ColoredGraph g = hadamard_graph(h);
  const CanonicalLabeling cl = canonical_labeling(g);
  const std::size_t m = h.order();
  Certificate cert;
  cert.bytes = detail::pack_bits(cl.canonical_adjacency, words_for(g.size()), 0, 2 * m, 2 * m, 4 * m,
                                 detail::size_header('H', m, m));
  cert.group_order = cl.group_order;
  return cert;
}

}  // namespace dsw

#endif
