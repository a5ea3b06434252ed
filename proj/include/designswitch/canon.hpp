#ifndef DESIGNSWITCH_CANON_HPP
#define DESIGNSWITCH_CANON_HPP

// Canonical labeling of vertex-colored graphs by individualization and
// refinement. The search keeps two leaves: the first one reached, which is
// used to detect automorphisms, and the best one under the key
// (refinement trace per level, relabeled adjacency), which defines the
// canonical form. Automorphisms found at leaves prune the first path by
// orbits, and their orbit sizes along the first path give the exact group
// order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bit_matrix.hpp"
#include "error.hpp"

namespace dsw {

using Vertex = std::uint32_t;
using Permutation = std::vector<Vertex>;
using BigInt = boost::multiprecision::cpp_int;

/// Simple undirected graph with an ordered vertex coloring. Cells of the
/// initial partition are the color classes in increasing color order.
class ColoredGraph {
 public:
  explicit ColoredGraph(std::size_t n) : adj_(n), colors_(n, 0) {}

  std::size_t size() const noexcept { return adj_.size(); }

  void add_edge(Vertex a, Vertex b) {
    if (a == b || a >= size() || b >= size())
      throw design_error(errc::invalid_argument, "bad edge " + std::to_string(a) + "-" + std::to_string(b));
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }

  void set_color(Vertex v, std::uint64_t color) { colors_.at(v) = color; }
  std::uint64_t color(Vertex v) const { return colors_[v]; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }

  bool adjacent(Vertex a, Vertex b) const {
    return std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
  }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::uint64_t> colors_;
};

struct CanonicalLabeling {
  /// lab[i] is the vertex placed at canonical position i.
  Permutation lab;
  /// Adjacency of the relabeled graph, row-major bit rows of words_for(n).
  std::vector<word_t> canonical_adjacency;
  /// Automorphisms found during the search (vertex -> image).
  std::vector<Permutation> generators;
  BigInt group_order = 1;
};

namespace detail {

inline std::uint64_t hmix(std::uint64_t h, std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x ^= x >> 31;
  x *= 0x7fb5d329728ea185ULL;
  x ^= x >> 27;
  x *= 0x81dadef4bc2dd44dULL;
  x ^= x >> 33;
  return h ^ x;
}

// Ordered partition: lab lists vertices by position, cells are contiguous
// ranges. cell_of[v] is the start of v's cell; cell_end[start] is one past
// its end.
struct Partition {
  std::vector<Vertex> lab;
  std::vector<Vertex> pos;
  std::vector<Vertex> cell_of;
  std::vector<Vertex> cell_end;
  std::size_t cells = 0;

  bool discrete() const noexcept { return cells == lab.size(); }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Vertex{0}); }
  Vertex find(Vertex x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<Vertex> parent_;
};

class Canonizer {
 public:
  explicit Canonizer(const ColoredGraph& g) : g_(g), n_(g.size()), stride_(words_for(g.size())) {
    counts_.assign(n_, 0);
  }

  CanonicalLabeling run() {
    Partition root = initial_partition();
    std::vector<Vertex> queue;
    for (std::size_t s = 0; s < n_; s = root.cell_end[s]) queue.push_back(static_cast<Vertex>(s));
    std::vector<std::uint64_t> trace{refine(root, queue)};
    std::vector<Vertex> path;
    search(root, trace, path);

    CanonicalLabeling out;
    out.lab = best_lab_;
    out.canonical_adjacency = best_graph_;
    out.generators = generators_;
    out.group_order = group_order();
    return out;
  }

 private:
  static constexpr int no_jump = -1;

  Partition initial_partition() const {
    Partition p;
    p.lab.resize(n_);
    std::iota(p.lab.begin(), p.lab.end(), Vertex{0});
    std::stable_sort(p.lab.begin(), p.lab.end(), [&](Vertex a, Vertex b) { return g_.color(a) < g_.color(b); });
    p.pos.resize(n_);
    p.cell_of.resize(n_);
    p.cell_end.assign(n_, 0);
    std::size_t start = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      p.pos[p.lab[i]] = static_cast<Vertex>(i);
      if (i > 0 && g_.color(p.lab[i]) != g_.color(p.lab[i - 1])) {
        p.cell_end[start] = static_cast<Vertex>(i);
        start = i;
        ++p.cells;
      }
      p.cell_of[p.lab[i]] = static_cast<Vertex>(start);
    }
    if (n_ > 0) {
      p.cell_end[start] = static_cast<Vertex>(n_);
      ++p.cells;
    }
    return p;
  }

  // Refines to the coarsest equitable partition finer than `p`, splitting
  // cells by neighbor counts into each splitter cell. Returns a hash of the
  // split sequence; it depends only on isomorphism-invariant data.
  std::uint64_t refine(Partition& p, std::vector<Vertex> queue) {
    std::vector<char> queued(n_, 0);
    for (Vertex s : queue) queued[s] = 1;
    std::uint64_t trace = hmix(0, p.cells);
    std::vector<Vertex> touched;
    std::vector<Vertex> touched_cells;
    std::size_t head = 0;
    while (head < queue.size() && !p.discrete()) {
      const Vertex ws = queue[head++];
      queued[ws] = 0;
      const Vertex we = p.cell_end[ws];
      touched.clear();
      for (Vertex i = ws; i < we; ++i) {
        for (Vertex x : g_.neighbors(p.lab[i])) {
          if (counts_[x]++ == 0) touched.push_back(x);
        }
      }
      touched_cells.clear();
      for (Vertex x : touched) touched_cells.push_back(p.cell_of[x]);
      std::sort(touched_cells.begin(), touched_cells.end());
      touched_cells.erase(std::unique(touched_cells.begin(), touched_cells.end()), touched_cells.end());

      trace = hmix(trace, ws);
      for (Vertex cs : touched_cells) {
        const Vertex ce = p.cell_end[cs];
        if (ce - cs == 1) {
          trace = hmix(trace, hmix(cs, counts_[p.lab[cs]]));
          continue;
        }
        auto first = p.lab.begin() + cs;
        auto last = p.lab.begin() + ce;
        std::sort(first, last, [&](Vertex a, Vertex b) {
          return counts_[a] != counts_[b] ? counts_[a] < counts_[b] : a < b;
        });
        // Split into runs of equal count.
        std::vector<std::pair<Vertex, Vertex>> runs;
        Vertex run_start = cs;
        for (Vertex i = cs; i < ce; ++i) {
          p.pos[p.lab[i]] = i;
          if (i + 1 == ce || counts_[p.lab[i + 1]] != counts_[p.lab[i]]) {
            runs.emplace_back(run_start, i + 1);
            trace = hmix(trace, hmix(hmix(run_start, i + 1 - run_start), counts_[p.lab[i]]));
            run_start = i + 1;
          }
        }
        if (runs.size() == 1) continue;
        p.cells += runs.size() - 1;
        for (auto [rs, re] : runs) {
          p.cell_end[rs] = re;
          for (Vertex i = rs; i < re; ++i) p.cell_of[p.lab[i]] = rs;
        }
        // A cell already waiting as a splitter keeps its start; all other
        // fragments join the queue. Otherwise one largest fragment may be
        // left out.
        std::size_t skip = runs.size();
        if (!queued[cs]) {
          skip = 0;
          for (std::size_t r = 1; r < runs.size(); ++r)
            if (runs[r].second - runs[r].first > runs[skip].second - runs[skip].first) skip = r;
        }
        for (std::size_t r = 0; r < runs.size(); ++r) {
          if (r == skip || queued[runs[r].first]) continue;
          queued[runs[r].first] = 1;
          queue.push_back(runs[r].first);
        }
      }
      for (Vertex x : touched) counts_[x] = 0;
    }
    for (Vertex x = 0; x < n_; ++x) counts_[x] = 0;
    return hmix(trace, p.cells);
  }

  // Splits `v` off the front of its cell and refines with it as splitter.
  std::uint64_t individualize(Partition& p, Vertex v) {
    const Vertex cs = p.cell_of[v];
    const Vertex ce = p.cell_end[cs];
    const Vertex at = p.pos[v];
    std::swap(p.lab[cs], p.lab[at]);
    p.pos[p.lab[at]] = at;
    p.pos[v] = cs;
    p.cell_end[cs] = cs + 1;
    p.cell_end[cs + 1] = ce;
    for (Vertex i = cs + 1; i < ce; ++i) p.cell_of[p.lab[i]] = cs + 1;
    ++p.cells;
    return refine(p, {cs});
  }

  Vertex target_cell(const Partition& p) const {
    Vertex best = 0;
    Vertex best_size = 0;
    for (Vertex s = 0; s < n_; s = p.cell_end[s]) {
      const Vertex size = p.cell_end[s] - s;
      if (size > 1 && size > best_size) {
        best = s;
        best_size = size;
      }
    }
    return best;
  }

  std::vector<word_t> relabeled(const Partition& p) const {
    std::vector<word_t> m(n_ * stride_, 0);
    for (Vertex i = 0; i < n_; ++i) {
      for (Vertex x : g_.neighbors(p.lab[i])) {
        const Vertex j = p.pos[x];
        m[i * stride_ + j / word_bits] |= word_t{1} << (j % word_bits);
      }
    }
    return m;
  }

  static int compare_traces(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                            std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      if (i >= a.size() || i >= b.size()) return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
  }

  static std::size_t common_prefix(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    std::size_t i = 0;
    while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
    return i;
  }

  void add_generator(const Permutation& from_lab, const Permutation& to_lab) {
    Permutation gamma(n_);
    bool identity = true;
    for (std::size_t i = 0; i < n_; ++i) {
      gamma[from_lab[i]] = to_lab[i];
      identity = identity && from_lab[i] == to_lab[i];
    }
    if (!identity) generators_.push_back(std::move(gamma));
  }

  // Orbits of the generators that fix first_path_[0..level) pointwise.
  UnionFind stabilizer_orbits(std::size_t level) const {
    UnionFind uf(n_);
    for (const auto& gen : generators_) {
      bool fixes = true;
      for (std::size_t l = 0; l < level && fixes; ++l) fixes = gen[first_path_[l]] == first_path_[l];
      if (!fixes) continue;
      for (Vertex x = 0; x < n_; ++x) uf.unite(x, gen[x]);
    }
    return uf;
  }

  int leaf(const Partition& p, const std::vector<std::uint64_t>& trace, const std::vector<Vertex>& path) {
    std::vector<word_t> graph = relabeled(p);
    if (!have_leaf_) {
      have_leaf_ = true;
      first_path_ = path;
      first_trace_ = best_trace_ = trace;
      first_lab_ = best_lab_ = p.lab;
      first_graph_ = best_graph_ = std::move(graph);
      return no_jump;
    }
    if (trace == first_trace_ && graph == first_graph_) {
      add_generator(first_lab_, p.lab);
      return static_cast<int>(common_prefix(path, first_path_));
    }
    int c = compare_traces(trace, best_trace_, std::max(trace.size(), best_trace_.size()));
    if (c == 0) c = graph < best_graph_ ? -1 : (graph == best_graph_ ? 0 : 1);
    if (c > 0) {
      best_trace_ = trace;
      best_lab_ = p.lab;
      best_path_ = path;
      best_graph_ = std::move(graph);
      return no_jump;
    }
    if (c == 0) {
      add_generator(best_lab_, p.lab);
      return static_cast<int>(common_prefix(path, best_path_.empty() ? first_path_ : best_path_));
    }
    return no_jump;
  }

  int search(const Partition& p, std::vector<std::uint64_t>& trace, std::vector<Vertex>& path) {
    if (p.discrete()) return leaf(p, trace, path);
    const std::size_t level = path.size();
    const bool on_first_path = !have_leaf_ || (level <= first_path_.size() && common_prefix(path, first_path_) == level);

    const Vertex cs = target_cell(p);
    std::vector<Vertex> cell(p.lab.begin() + cs, p.lab.begin() + p.cell_end[cs]);
    std::sort(cell.begin(), cell.end());
    if (on_first_path && !have_leaf_) first_cells_.push_back(cell);

    std::vector<Vertex> explored;
    for (Vertex v : cell) {
      if (on_first_path && have_leaf_ && !explored.empty()) {
        UnionFind uf = stabilizer_orbits(level);
        const Vertex rv = uf.find(v);
        bool seen = false;
        for (Vertex u : explored) seen = seen || uf.find(u) == rv;
        if (seen) continue;
      }
      explored.push_back(v);

      Partition child = p;
      trace.push_back(individualize(child, v));
      path.push_back(v);
      const std::size_t len = trace.size();
      const bool eq_first = have_leaf_ && compare_traces(trace, first_trace_, len) == 0;
      const bool worse = have_leaf_ && compare_traces(trace, best_trace_, len) < 0;
      int jump = no_jump;
      if (!worse || eq_first) jump = search(child, trace, path);
      path.pop_back();
      trace.pop_back();
      if (jump != no_jump && static_cast<std::size_t>(jump) < level) return jump;
    }
    return no_jump;
  }

  BigInt group_order() const {
    BigInt order = 1;
    for (std::size_t l = 0; l < first_path_.size(); ++l) {
      UnionFind uf = stabilizer_orbits(l);
      const Vertex root = uf.find(first_path_[l]);
      std::size_t orbit = 0;
      for (Vertex x : first_cells_[l]) orbit += uf.find(x) == root ? 1 : 0;
      order *= orbit;
    }
    return order;
  }

  const ColoredGraph& g_;
  std::size_t n_;
  std::size_t stride_;
  std::vector<std::uint32_t> counts_;

  bool have_leaf_ = false;
  std::vector<Vertex> first_path_;
  std::vector<std::vector<Vertex>> first_cells_;
  std::vector<std::uint64_t> first_trace_;
  Permutation first_lab_;
  std::vector<word_t> first_graph_;

  std::vector<Vertex> best_path_;
  std::vector<std::uint64_t> best_trace_;
  Permutation best_lab_;
  std::vector<word_t> best_graph_;

  std::vector<Permutation> generators_;
};

}  // namespace detail

/// Canonical labeling and automorphism group of a colored graph. The
/// relabeled adjacency is identical for isomorphic inputs (color-preserving
/// isomorphisms only).
inline CanonicalLabeling canonical_labeling(const ColoredGraph& g) { return detail::Canonizer(g).run(); }

}  // namespace dsw

#endif
