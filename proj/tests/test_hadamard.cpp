#include <catch_amalgamated.hpp>

#include <set>

#include "test_support.hpp"

using namespace dsw;
using namespace dsw::testing;

namespace {

const SignMatrix K2{{1, -1}, {-1, 1}};

SignMatrix bush4() { return SignMatrix{{1, 1, 1, -1}, {1, 1, -1, 1}, {1, -1, 1, 1}, {-1, 1, 1, 1}}; }

std::string row_string(const SignMatrix& h, std::size_t i) {
  std::string s;
  for (std::size_t j = 0; j < h.order(); ++j) s += h(i, j) < 0 ? '-' : '+';
  return s;
}

// Rows of the first block row, as a set.
std::set<std::string> first_block_rows(const SignMatrix& h, std::size_t n) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < 2 * n; ++i) out.insert(row_string(h, i));
  return out;
}

// All 2n x 2n sign blocks with zero row and column sums, as row-major masks.
std::vector<std::uint32_t> zero_sum_blocks(std::size_t size) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1U << (size * size)); ++mask) {
    bool ok = true;
    for (std::size_t r = 0; r < size && ok; ++r) {
      int row = 0, col = 0;
      for (std::size_t c = 0; c < size; ++c) {
        row += (mask >> (r * size + c) & 1U) ? -1 : 1;
        col += (mask >> (c * size + r) & 1U) ? -1 : 1;
      }
      ok = row == 0 && col == 0;
    }
    if (ok) out.push_back(mask);
  }
  return out;
}

// Block negacyclic matrix whose first block row is (J, blocks...).
SignMatrix negacyclic_from_first_row(std::size_t n, const std::vector<std::uint32_t>& blocks) {
  const std::size_t size = 2 * n;
  auto entry = [&](std::size_t b, std::size_t r, std::size_t c) {
    if (b == 0) return 1;
    return (blocks[b - 1] >> (r * size + c) & 1U) ? -1 : 1;
  };
  SignMatrix h(size * size);
  for (std::size_t s = 0; s < size; ++s)
    for (std::size_t j = 0; j < size; ++j) {
      // Block (s, j) is block (0, j - s), negated when it wrapped.
      const std::size_t src = (j + size - s) % size;
      const int sign = j < s ? -1 : 1;
      for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) h.set(s * size + r, j * size + c, sign * entry(src, r, c));
    }
  return h;
}

}  // namespace

TEST_CASE("Hadamard and regularity predicates") {
  CHECK(is_hadamard(SignMatrix{{1, 1}, {1, -1}}));
  CHECK(!is_hadamard(SignMatrix{{1, 1}, {1, 1}}));
  CHECK(is_regular(bush4()));
  SignMatrix s = sylvester(2);
  CHECK(!is_regular(s));
  for (std::size_t j = 0; j < 4; ++j) s.negate(1, j);
  CHECK(!is_regular(s));
  CHECK(is_hadamard(sylvester(5)));
  CHECK(orthogonal_rows(sylvester(5)));
  CHECK(is_regular(regular_hadamard_64()));
  CHECK(is_hadamard(regular_hadamard_64()));
}

TEST_CASE("Bush-type predicate") {
  const SignMatrix h = bush4();
  CHECK(is_bush_type(h, 1));
  CHECK(!is_bush_type(sylvester(2), 1));
  CHECK(error_of([&] { is_bush_type(h, 2); }) == errc::order_mismatch);
  for (std::size_t k : {2, 3}) {
    const SignMatrix b = bush_from_hadamard(sylvester(k));
    CHECK(is_bush_type(b, std::size_t{1} << (k - 1)));
    CHECK(orthogonal_rows(b));
    CHECK(is_regular(b));
  }
  CHECK(!is_bush_type(regular_hadamard_64(), 4));
}

TEST_CASE("block negacyclic predicate") {
  // Block rows (J, K) and (-K, J).
  SignMatrix toy(4);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      toy.set(r, 2 + c, K2(r, c));
      toy.set(2 + r, c, -K2(r, c));
    }
  CHECK(is_block_negacyclic(toy, 1));
  CHECK(!is_block_negacyclic(bush4(), 1));
  CHECK(error_of([&] { is_block_negacyclic(toy, 2); }) == errc::order_mismatch);

  const SignMatrix& h = searched_bush36();
  CHECK(is_block_negacyclic(h, 3));
  SignMatrix swapped(36);
  for (std::size_t i = 0; i < 36; ++i)
    for (std::size_t j = 0; j < 36; ++j) {
      std::size_t src = j;
      if (j < 6) src = j + 6;
      else if (j < 12) src = j - 6;
      swapped.set(i, j, h(i, src));
    }
  CHECK(!is_block_negacyclic(swapped, 3));
  CHECK(!is_bush_type(swapped, 3));
}

TEST_CASE("Menon conversion") {
  const SignMatrix& h = searched_bush36();
  const IncidenceStructure d = hadamard_to_menon(h);
  CHECK(validate_2design(d) == DesignParams{36, 36, 15, 15, 6});
  CHECK(menon_to_hadamard(d, 3) == h);

  const IncidenceStructure d4 = hadamard_to_menon(bush4());
  CHECK(error_of([&] { validate_2design(d4); }) == errc::degenerate_k);
  CHECK(menon_to_hadamard(d4, 1) == bush4());

  const SignMatrix b64 = bush_from_hadamard(sylvester(3));
  CHECK(menon_to_hadamard(hadamard_to_menon(b64), 4) == b64);
  CHECK(validate_2design(hadamard_to_menon(regular_hadamard_64())) == DesignParams{64, 64, 28, 28, 12});

  CHECK(error_of([&] { hadamard_to_menon(h.negated()); }) == errc::wrong_row_sum);
  CHECK(with_positive_row_sum(h.negated()) == h);
  CHECK(error_of([] { hadamard_to_menon(sylvester(2)); }) == errc::not_regular);
  SignMatrix broken = h;
  broken.negate(0, 0);
  CHECK(error_of([&] { hadamard_to_menon(broken); }) == errc::not_hadamard);
  CHECK(error_of([&] { menon_to_hadamard(d, 2); }) == errc::order_mismatch);
  CHECK(error_of([] { menon_to_hadamard(fano(), 1); }) == errc::order_mismatch);
}

TEST_CASE("diagonal switching sets") {
  const IncidenceStructure d = hadamard_to_menon(searched_bush36());
  const auto sets = diagonal_switching_sets(d, 3);
  REQUIRE(sets.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(sets[i].size() == 6);
    CHECK(sets[i].p2.empty());
    PointSet group;
    for (std::size_t t = 0; t < 6; ++t) group.push_back(6 * i + t);
    CHECK(sets[i].p1 == group);
    CHECK(sets[i].blocks == std::vector<std::size_t>(group.begin(), group.end()));
  }
  CHECK(diagonal_switching_sets(hadamard_to_menon(bush_from_hadamard(sylvester(3))), 4).size() == 8);
  CHECK(error_of([] { diagonal_switching_sets(hadamard_to_menon(regular_hadamard_64()), 4); }) ==
        errc::not_bush_structured);
  CHECK(error_of([&] { diagonal_switching_sets(d, 2); }) == errc::not_bush_structured);
  CHECK(error_of([] { diagonal_switching_sets(hadamard_to_menon(bush4()), 1); }) == errc::degenerate_k);
}

TEST_CASE("switching closure stays Bush-type") {
  const SignMatrix& h = searched_bush36();
  const IncidenceStructure d = hadamard_to_menon(h);
  const auto closure = switching_closure(d, diagonal_switching_sets(d, 3));
  for (std::size_t mask = 0; mask < closure.size(); ++mask) {
    const SignMatrix hm = menon_to_hadamard(closure[mask], 3);
    CHECK(is_bush_type(hm, 3));
    CHECK(is_regular(hm));
    CHECK(orthogonal_rows(hm));
    // Switching block row s negates its off-diagonal blocks.
    SignMatrix expected = h;
    for (std::size_t s = 0; s < 6; ++s) {
      if (!(mask >> s & 1U)) continue;
      for (std::size_t r = 6 * s; r < 6 * s + 6; ++r)
        for (std::size_t c = 0; c < 36; ++c)
          if (c / 6 != s) expected.negate(r, c);
    }
    CHECK(hm == expected);
  }
  CHECK(is_block_negacyclic(menon_to_hadamard(closure[63], 3), 3));
}

TEST_CASE("search at n = 1 matches brute force") {
  const auto oracle = all_bush_order4();
  REQUIRE(oracle.size() == 4);
  BushSearchOptions opt;
  opt.n = 1;
  opt.limit = 100;
  const auto found = search_bush_type(opt);
  CHECK(found.size() == oracle.size());
  for (const auto& h : oracle) CHECK(std::find(found.begin(), found.end(), h) != found.end());

  opt.symmetry = BushSymmetry::block_negacyclic;
  const auto nega = search_bush_type(opt);
  std::set<std::set<std::string>> want;
  for (const auto& h : oracle)
    if (is_block_negacyclic(h, 1)) want.insert(first_block_rows(h, 1));
  std::set<std::set<std::string>> got;
  for (const auto& h : nega) got.insert(first_block_rows(h, 1));
  CHECK(got == want);
  CHECK(nega.size() == want.size());
}

TEST_CASE("block negacyclic search at n = 2 matches brute force") {
  const auto blocks = zero_sum_blocks(4);
  REQUIRE(blocks.size() == 90);
  std::set<std::set<std::string>> want;
  for (std::uint32_t a : blocks)
    for (std::uint32_t b : blocks)
      for (std::uint32_t c : blocks) {
        const SignMatrix h = negacyclic_from_first_row(2, {a, b, c});
        if (is_hadamard(h)) want.insert(first_block_rows(h, 2));
      }
  REQUIRE(!want.empty());

  BushSearchOptions opt;
  opt.n = 2;
  opt.symmetry = BushSymmetry::block_negacyclic;
  opt.limit = 1'000'000;
  opt.node_budget = 0;
  const auto found = search_bush_type(opt);
  std::set<std::set<std::string>> got;
  for (const auto& h : found) {
    CHECK(orthogonal_rows(h));
    CHECK(is_block_negacyclic(h, 2));
    got.insert(first_block_rows(h, 2));
  }
  CHECK(found.size() == got.size());
  CHECK(got == want);
}

TEST_CASE("free search outputs") {
  BushSearchOptions opt;
  opt.n = 2;
  opt.limit = 25;
  const auto a = search_bush_type(opt);
  REQUIRE(a.size() == 25);
  CHECK(search_bush_type(opt) == a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(orthogonal_rows(a[i]));
    CHECK(is_bush_type(a[i], 2));
    for (std::size_t j = 0; j < i; ++j) CHECK(!(a[i] == a[j]));
  }

  // Free search at n = 3 is accepted but rarely finishes; a budget must stop
  // it cleanly, and anything it emits before that must be valid.
  opt.n = 3;
  opt.limit = 1;
  opt.node_budget = 2'000'000;
  std::vector<SignMatrix> big;
  const auto err = error_of([&] {
    search_bush_type(opt, [&](const SignMatrix& h) {
      big.push_back(h);
      return true;
    });
  });
  CHECK((err == errc::budget_exceeded || (!err && big.size() == 1)));
  for (const auto& h : big) CHECK((orthogonal_rows(h) && is_bush_type(h, 3)));
}

TEST_CASE("search limits and bounds") {
  BushSearchOptions opt;
  opt.n = 3;
  opt.symmetry = BushSymmetry::block_negacyclic;
  opt.limit = 0;
  CHECK(search_bush_type(opt).empty());
  opt.limit = 1;
  opt.node_budget = 10;
  CHECK(error_of([&] { search_bush_type(opt); }) == errc::budget_exceeded);
  opt.n = 6;
  CHECK(error_of([&] { search_bush_type(opt); }) == errc::invalid_argument);
  opt.n = 4;
  opt.symmetry = BushSymmetry::free;
  CHECK(error_of([&] { search_bush_type(opt); }) == errc::invalid_argument);

  const SignMatrix& h = searched_bush36();
  CHECK(orthogonal_rows(h));
  CHECK(is_regular(h));
  CHECK(h.row_sum(0) == 6);
}

TEST_CASE("sign matrix fixture round trip") {
  const SignMatrix& h = searched_bush36();
  std::ostringstream out;
  write_sign_matrix(out, h);
  CHECK(parse_sign_matrix(out.str()) == h);
  CHECK(error_of([] { parse_sign_matrix(std::string("2\n+-\n+x\n")); }) == errc::parse_error);
  CHECK(error_of([] { parse_sign_matrix(std::string("2\n+-\n")); }) == errc::parse_error);
  CHECK(error_of([] { parse_sign_matrix(std::string("")); }) == errc::parse_error);
}
