#ifndef DESIGNSWITCH_ORBIT_MATRIX_HPP
#define DESIGNSWITCH_ORBIT_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"
#include "error.hpp"
#include "incidence.hpp"

namespace dsw {

/// Block-by-point orbit matrix: entry (i, j) counts the points of point
/// orbit j on one block of block orbit i.
struct OrbitMatrix {
  std::vector<std::size_t> block_orbits;  // beta_i
  std::vector<std::size_t> point_orbits;  // omega_j
  std::vector<std::vector<std::size_t>> entries;
  DesignParams params;

  std::size_t rows() const noexcept { return block_orbits.size(); }
  std::size_t cols() const noexcept { return point_orbits.size(); }
  std::size_t operator()(std::size_t i, std::size_t j) const { return entries[i][j]; }

  friend bool operator==(const OrbitMatrix& a, const OrbitMatrix& b) {
    return a.block_orbits == b.block_orbits && a.point_orbits == b.point_orbits && a.entries == b.entries;
  }
};

/// Parameters implied by the orbit lengths and the first row sum.
inline DesignParams derive_params(const OrbitMatrix& om) {
  DesignParams p;
  p.v = std::accumulate(om.point_orbits.begin(), om.point_orbits.end(), std::size_t{0});
  p.b = std::accumulate(om.block_orbits.begin(), om.block_orbits.end(), std::size_t{0});
  if (om.rows() == 0 || p.v < 2) return p;
  p.k = std::accumulate(om.entries[0].begin(), om.entries[0].end(), std::size_t{0});
  p.r = p.b * p.k / p.v;
  if (p.k > 1) p.lambda = p.r * (p.k - 1) / (p.v - 1);
  return p;
}

struct OrbitCheckFailure {
  enum class Kind { entry_range, orbit_total, row_sum, column_sum, orthogonality };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;  // column for range/column checks, second row for orthogonality
  long long expected = 0;
  long long actual = 0;

  std::string describe() const {
    std::ostringstream out;
    switch (kind) {
      case Kind::entry_range: out << "entry (" << i << "," << j << ") = " << actual << " exceeds orbit length " << expected; break;
      case Kind::orbit_total: out << (i == 0 ? "block" : "point") << " orbit lengths sum to " << actual << ", expected " << expected; break;
      case Kind::row_sum: out << "row " << i << " sums to " << actual << ", expected k=" << expected; break;
      case Kind::column_sum: out << "column " << j << ": sum beta_i*c_ij = " << actual << ", expected omega_j*r = " << expected; break;
      case Kind::orthogonality: out << "rows " << i << "," << j << ": scaled inner product " << actual << ", expected " << expected; break;
    }
    return out.str();
  }
};

struct OrbitCheckReport {
  std::vector<OrbitCheckFailure> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Checks entry bounds, orbit totals, row sums (= k), column sums
/// (sum_i beta_i c_ij = omega_j r) and, for symmetric parameters, the
/// inner products sum_j (beta_i / omega_j) c_ij c_i'j = lambda beta_i
/// + [i = i'] (k - lambda). Fractions are cleared by lcm(omega).
inline OrbitCheckReport validate_orbit_matrix(const OrbitMatrix& om) {
  using Kind = OrbitCheckFailure::Kind;
  OrbitCheckReport rep;
  const DesignParams& p = om.params;
  const auto sbeta = std::accumulate(om.block_orbits.begin(), om.block_orbits.end(), std::size_t{0});
  const auto somega = std::accumulate(om.point_orbits.begin(), om.point_orbits.end(), std::size_t{0});
  if (sbeta != p.b) rep.failures.push_back({Kind::orbit_total, 0, 0, static_cast<long long>(p.b), static_cast<long long>(sbeta)});
  if (somega != p.v) rep.failures.push_back({Kind::orbit_total, 1, 0, static_cast<long long>(p.v), static_cast<long long>(somega)});

  for (std::size_t i = 0; i < om.rows(); ++i)
    for (std::size_t j = 0; j < om.cols(); ++j)
      if (om(i, j) > om.point_orbits[j])
        rep.failures.push_back({Kind::entry_range, i, j, static_cast<long long>(om.point_orbits[j]), static_cast<long long>(om(i, j))});

  for (std::size_t i = 0; i < om.rows(); ++i) {
    const auto s = std::accumulate(om.entries[i].begin(), om.entries[i].end(), std::size_t{0});
    if (s != p.k) rep.failures.push_back({Kind::row_sum, i, 0, static_cast<long long>(p.k), static_cast<long long>(s)});
  }
  for (std::size_t j = 0; j < om.cols(); ++j) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < om.rows(); ++i) s += om.block_orbits[i] * om(i, j);
    if (s != om.point_orbits[j] * p.r)
      rep.failures.push_back({Kind::column_sum, 0, j, static_cast<long long>(om.point_orbits[j] * p.r), static_cast<long long>(s)});
  }

  if (p.symmetric()) {
    std::size_t l = 1;
    for (std::size_t w : om.point_orbits) l = std::lcm(l, w);
    for (std::size_t i = 0; i < om.rows(); ++i) {
      for (std::size_t i2 = 0; i2 < om.rows(); ++i2) {
        long long s = 0;
        for (std::size_t j = 0; j < om.cols(); ++j)
          s += static_cast<long long>(om.block_orbits[i] * om(i, j) * om(i2, j) * (l / om.point_orbits[j]));
        const long long want = static_cast<long long>(
            l * (p.lambda * om.block_orbits[i] + (i == i2 ? p.k - p.lambda : 0)));
        if (s != want) rep.failures.push_back({Kind::orthogonality, i, i2, want, s});
      }
    }
  }
  return rep;
}

enum class OrbitClass { p1, p2, balanced };

/// Class of every point orbit with respect to the block-orbit rows `rows`,
/// or nullopt when some point orbit falls in no class.
inline std::optional<std::vector<OrbitClass>> classify_point_orbits(const OrbitMatrix& om,
                                                                    const std::vector<std::size_t>& rows) {
  std::size_t total = 0;
  for (std::size_t i : rows) total += om.block_orbits[i];
  std::vector<OrbitClass> out(om.cols());
  for (std::size_t j = 0; j < om.cols(); ++j) {
    bool none = true;
    bool all = true;
    std::size_t weighted = 0;
    for (std::size_t i : rows) {
      none = none && om(i, j) == 0;
      all = all && om(i, j) == om.point_orbits[j];
      weighted += om.block_orbits[i] * om(i, j);
    }
    if (none)
      out[j] = OrbitClass::p1;
    else if (all)
      out[j] = OrbitClass::p2;
    else if (2 * weighted == om.point_orbits[j] * total)
      out[j] = OrbitClass::balanced;
    else
      return std::nullopt;
  }
  return out;
}

/// Switching on the block orbits `rows`: entries in those rows and balanced
/// point-orbit columns become omega_j - c_ij.
inline OrbitMatrix orbit_switching(const OrbitMatrix& om, std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (std::size_t i : rows)
    if (i >= om.rows())
      throw design_error(errc::index_out_of_range, "row " + std::to_string(i) + " of " + std::to_string(om.rows()));
  const auto classes = classify_point_orbits(om, rows);
  if (!classes)
    throw design_error(errc::orbit_splits_classes,
                       "some point orbit is neither missed, covered nor balanced by the chosen block orbits");
  OrbitMatrix out = om;
  for (std::size_t i : rows)
    for (std::size_t j = 0; j < om.cols(); ++j)
      if ((*classes)[j] == OrbitClass::balanced) out.entries[i][j] = om.point_orbits[j] - om(i, j);
  return out;
}

/// Row subsets (lexicographic order) with even total block count <= max_rows
/// on which orbit-level switching is defined.
inline std::vector<std::vector<std::size_t>> orbit_switching_candidates(const OrbitMatrix& om, std::size_t max_rows) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t next, std::size_t total) {
    for (std::size_t i = next; i < om.rows(); ++i) {
      const std::size_t t = total + om.block_orbits[i];
      if (t > max_rows) continue;
      chosen.push_back(i);
      if (t % 2 == 0 && classify_point_orbits(om, chosen)) out.push_back(chosen);
      walk(i + 1, t);
      chosen.pop_back();
    }
  };
  walk(0, 0);
  return out;
}

/// Witness that `b` is `a` with rows and columns permuted inside equal orbit
/// lengths: b(i, j) == a(row_perm[i], col_perm[j]).
struct OrbitEquivalence {
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;
};

/// Searches column permutations in lexicographic order, pruning when the
/// multisets of (beta, row prefix) disagree, and returns the first witness.
inline std::optional<OrbitEquivalence> orbit_matrices_equivalent(const OrbitMatrix& a, const OrbitMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::nullopt;
  auto sorted = [](std::vector<std::size_t> x) {
    std::sort(x.begin(), x.end());
    return x;
  };
  if (sorted(a.block_orbits) != sorted(b.block_orbits) || sorted(a.point_orbits) != sorted(b.point_orbits))
    return std::nullopt;

  const std::size_t t = a.cols();
  std::vector<std::size_t> col_perm;
  std::vector<char> used(t, 0);

  auto prefix_multiset = [&](const OrbitMatrix& m, bool permuted) {
    std::vector<std::vector<std::size_t>> keys(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      keys[i].push_back(m.block_orbits[i]);
      for (std::size_t j = 0; j < col_perm.size(); ++j) keys[i].push_back(m(i, permuted ? col_perm[j] : j));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };

  std::optional<OrbitEquivalence> found;
  std::function<void()> walk = [&] {
    if (found) return;
    if (prefix_multiset(a, true) != prefix_multiset(b, false)) return;
    if (col_perm.size() == t) {
      OrbitEquivalence w;
      w.col_perm = col_perm;
      std::vector<char> row_used(a.rows(), 0);
      for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t r = 0; r < a.rows(); ++r) {
          if (row_used[r] || a.block_orbits[r] != b.block_orbits[i]) continue;
          bool same = true;
          for (std::size_t j = 0; j < t && same; ++j) same = a(r, col_perm[j]) == b(i, j);
          if (same) {
            row_used[r] = 1;
            w.row_perm.push_back(r);
            break;
          }
        }
      }
      found = std::move(w);
      return;
    }
    const std::size_t j = col_perm.size();
    for (std::size_t src = 0; src < t && !found; ++src) {
      if (used[src] || a.point_orbits[src] != b.point_orbits[j]) continue;
      used[src] = 1;
      col_perm.push_back(src);
      walk();
      col_perm.pop_back();
      used[src] = 0;
    }
  };
  walk();
  return found;
}

/// Reads "t", the t point-orbit lengths, then t lines "beta : c_1 ... c_t".
/// Parameters are derived from the orbit lengths and the first row.
inline OrbitMatrix parse_orbit_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto need = [&](const char* what) {
    if (!detail::next_content_line(in, line, lineno)) throw detail::parse_failure(lineno, std::string("missing ") + what);
  };
  auto numbers = [&](const std::string& text) {
    std::istringstream s(text);
    std::vector<std::size_t> out;
    long long x = 0;
    while (s >> x) {
      if (x < 0) throw detail::parse_failure(lineno, "negative value");
      out.push_back(static_cast<std::size_t>(x));
    }
    if (!s.eof()) throw detail::parse_failure(lineno, "expected integers in \"" + text + "\"");
    return out;
  };

  need("orbit count");
  const auto count = numbers(line);
  if (count.size() != 1 || count[0] == 0) throw detail::parse_failure(lineno, "expected orbit count \"t\"");
  const std::size_t t = count[0];

  OrbitMatrix om;
  need("point-orbit lengths");
  om.point_orbits = numbers(line);
  if (om.point_orbits.size() != t)
    throw detail::parse_failure(lineno, "expected " + std::to_string(t) + " point-orbit lengths");
  for (std::size_t i = 0; i < t; ++i) {
    need("orbit matrix row");
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw detail::parse_failure(lineno, "expected \"beta : entries\"");
    const auto beta = numbers(line.substr(0, colon));
    const auto row = numbers(line.substr(colon + 1));
    if (beta.size() != 1 || row.size() != t)
      throw detail::parse_failure(lineno, "expected one orbit length and " + std::to_string(t) + " entries");
    om.block_orbits.push_back(beta[0]);
    om.entries.push_back(row);
  }
  om.params = derive_params(om);
  return om;
}

inline OrbitMatrix parse_orbit_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_orbit_matrix(in);
}

inline void write_orbit_matrix(std::ostream& out, const OrbitMatrix& om) {
  out << om.rows() << '\n';
  for (std::size_t j = 0; j < om.cols(); ++j) out << (j ? " " : "") << om.point_orbits[j];
  out << '\n';
  for (std::size_t i = 0; i < om.rows(); ++i) {
    out << om.block_orbits[i] << " :";
    for (std::size_t x : om.entries[i]) out << ' ' << x;
    out << '\n';
  }
}

}  // namespace dsw

#endif
