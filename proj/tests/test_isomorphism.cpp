#include <catch_amalgamated.hpp>

#include <set>

#include "test_support.hpp"

using namespace dsw;
using namespace dsw::testing;

namespace {

struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::uint64_t> colors;

  ColoredGraph build() const {
    ColoredGraph g(n);
    for (auto [a, b] : edges) g.add_edge(a, b);
    for (std::size_t v = 0; v < n; ++v) g.set_color(static_cast<Vertex>(v), colors[v]);
    return g;
  }

  SmallGraph relabeled(const std::vector<std::size_t>& p) const {
    SmallGraph out{n, {}, std::vector<std::uint64_t>(n)};
    for (auto [a, b] : edges) out.edges.emplace_back(static_cast<Vertex>(p[a]), static_cast<Vertex>(p[b]));
    for (std::size_t v = 0; v < n; ++v) out.colors[p[v]] = colors[v];
    return out;
  }

  std::vector<std::vector<char>> matrix() const {
    std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
    for (auto [a, b] : edges) m[a][b] = m[b][a] = 1;
    return m;
  }
};

// Color-preserving permutations p with g(p) == h, counted by brute force.
std::size_t count_isomorphisms(const SmallGraph& g, const SmallGraph& h) {
  const auto a = g.matrix();
  const auto b = h.matrix();
  std::vector<std::size_t> p(g.n);
  std::iota(p.begin(), p.end(), 0);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t v = 0; v < g.n && ok; ++v) ok = g.colors[v] == h.colors[p[v]];
    for (std::size_t x = 0; x < g.n && ok; ++x)
      for (std::size_t y = x + 1; y < g.n && ok; ++y) ok = a[x][y] == b[p[x]][p[y]];
    count += ok ? 1 : 0;
  } while (std::next_permutation(p.begin(), p.end()));
  return count;
}

SmallGraph random_graph(std::size_t n, double density, std::size_t ncolors, std::mt19937_64& rng) {
  SmallGraph g{n, {}, std::vector<std::uint64_t>(n)};
  std::bernoulli_distribution edge(density);
  for (std::size_t a = 0; a < n; ++a) {
    g.colors[a] = rng() % ncolors;
    for (std::size_t b = a + 1; b < n; ++b)
      if (edge(rng)) g.edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  return g;
}

SmallGraph petersen() {
  SmallGraph g{10, {}, std::vector<std::uint64_t>(10, 0)};
  for (Vertex i = 0; i < 5; ++i) {
    g.edges.emplace_back(i, (i + 1) % 5);
    g.edges.emplace_back(i, i + 5);
    g.edges.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return g;
}

}  // namespace

TEST_CASE("canonical labeling agrees with brute force on small graphs") {
  std::mt19937_64 rng(Catch::getSeed());
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const SmallGraph g = random_graph(n, trial % 3 == 0 ? 0.5 : 0.3, 1 + rng() % 2, rng);
    const auto cl = canonical_labeling(g.build());
    CHECK(cl.group_order == count_isomorphisms(g, g));
    const SmallGraph h = g.relabeled(random_permutation(n, rng));
    CHECK(canonical_labeling(h.build()).canonical_adjacency == cl.canonical_adjacency);

    const SmallGraph other = random_graph(n, 0.4, 1, rng);
    SmallGraph same_colors = other;
    same_colors.colors = g.colors;
    const bool iso = count_isomorphisms(g, same_colors) > 0;
    CHECK((canonical_labeling(same_colors.build()).canonical_adjacency == cl.canonical_adjacency) == iso);
  }
}

TEST_CASE("automorphism group orders of symmetric graphs") {
  const SmallGraph p = petersen();
  CHECK(canonical_labeling(p.build()).group_order == 120);
  CHECK(count_isomorphisms(p, p) == 120);

  SmallGraph cube{8, {}, std::vector<std::uint64_t>(8, 0)};
  for (Vertex a = 0; a < 8; ++a)
    for (Vertex bit : {1U, 2U, 4U})
      if ((a & bit) == 0) cube.edges.emplace_back(a, a | bit);
  CHECK(canonical_labeling(cube.build()).group_order == count_isomorphisms(cube, cube));

  SmallGraph empty{7, {}, std::vector<std::uint64_t>(7, 0)};
  CHECK(canonical_labeling(empty.build()).group_order == 5040);

  const auto gens = canonical_labeling(p.build()).generators;
  const auto m = p.matrix();
  for (const auto& g : gens)
    for (std::size_t x = 0; x < 10; ++x)
      for (std::size_t y = 0; y < 10; ++y) CHECK(m[x][y] == m[g[x]][g[y]]);
}

TEST_CASE("Fano plane automorphisms and self-duality") {
  const IncidenceStructure f = fano();
  CHECK(brute_force_aut_order(f) == 168);
  CHECK(aut_group_order(f) == 168);
  CHECK(is_self_dual(f));
  CHECK(brute_force_isomorphic(f, dual(f)));
  CHECK(error_of([] { is_self_dual(design_6_3_2()); }) == errc::not_symmetric);
}

TEST_CASE("automorphism orders on small structures match brute force") {
  CHECK(aut_group_order(design_6_3_2()) == brute_force_aut_order(design_6_3_2()));
  std::mt19937_64 rng(Catch::getSeed());
  for (int t = 0; t < 30; ++t) {
    const IncidenceStructure s = random_structure(3 + rng() % 8, rng);
    CHECK(aut_group_order(s) == brute_force_aut_order(s));
  }
}

TEST_CASE("design certificates are relabeling invariant") {
  std::mt19937_64 rng(Catch::getSeed());
  const IncidenceStructure f = fano();
  const Certificate c = design_certificate(f);
  CHECK(c.digest().size() == 64);
  CHECK(c.digest().find_first_not_of("0123456789abcdef") == std::string::npos);
  for (int t = 0; t < 1000; ++t) CHECK(design_certificate(random_relabel(f, rng)) == c);

  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  const Certificate c36 = design_certificate(d36);
  for (int t = 0; t < 100; ++t) {
    const Certificate r = design_certificate(random_relabel(d36, rng));
    CHECK(r == c36);
    CHECK(r.group_order == c36.group_order);
  }

  IncidenceStructure flipped = f;
  flipped.matrix().flip(3, 0);
  CHECK(!(design_certificate(flipped) == c));
  CHECK(!are_isomorphic(flipped, f));
  CHECK(!are_isomorphic(f, design_6_3_2()));
}

TEST_CASE("are_isomorphic agrees with brute force on 8-point structures") {
  std::mt19937_64 rng(Catch::getSeed());
  for (int t = 0; t < 50; ++t) {
    const std::size_t blocks = 3 + rng() % 6;
    const IncidenceStructure a = random_structure(blocks, rng);
    const IncidenceStructure b = t % 2 == 0 ? random_relabel(a, rng) : random_structure(blocks, rng);
    CHECK(are_isomorphic(a, b) == brute_force_isomorphic(a, b));
  }
}

TEST_CASE("self-duality is shared by a design and its dual") {
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  for (const auto& x : switching_closure(d36, diagonal_switching_sets(d36, 3))) {
    const bool sd = is_self_dual(x);
    CHECK(is_self_dual(dual(x)) == sd);
    CHECK(are_isomorphic(x, dual(x)) == sd);
  }
}

TEST_CASE("Hadamard equivalence") {
  const auto all4 = all_hadamard_order4();
  CHECK(all4.size() == 768);
  const Certificate c4 = hadamard_certificate(all4.front());
  for (const auto& h : all4) CHECK(hadamard_certificate(h) == c4);

  std::mt19937_64 rng(Catch::getSeed());
  for (const SignMatrix& h : {sylvester(2), searched_bush36(), sylvester(4)}) {
    const Certificate c = hadamard_certificate(h);
    for (int t = 0; t < 100; ++t) CHECK(hadamard_certificate(random_monomial(h, rng)) == c);
  }

  // Isomorphic Menon designs have equivalent matrices.
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  std::map<std::string, std::string> seen;
  for (const auto& x : switching_closure(d36, diagonal_switching_sets(d36, 3))) {
    const std::string hd = hadamard_certificate(menon_to_hadamard(x, 3)).digest();
    auto [it, fresh] = seen.emplace(design_certificate(x).digest(), hd);
    if (!fresh) CHECK(it->second == hd);
  }

  SignMatrix bad = sylvester(2);
  bad.negate(0, 0);
  CHECK(error_of([&] { hadamard_certificate(bad); }) == errc::not_hadamard);
}
