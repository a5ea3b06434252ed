#include <catch_amalgamated.hpp>

#include <functional>
#include <sstream>

#include "test_support.hpp"

using namespace dsw;
using namespace dsw::testing;

namespace {

void check_switching_identities(const IncidenceStructure& inc, const SwitchingSet& sw) {
  const DesignParams p = validate_2design(inc);
  CHECK(sw.size() % 2 == 0);
  CHECK(sw.p1.size() + sw.p2.size() + sw.balanced.size() == inc.v());
  CHECK(2 * (p.k - sw.p2.size()) == sw.balanced.size());
  const IncidenceStructure out = apply_switching(inc, sw);
  CHECK(validate_2design(out) == p);
  CHECK(apply_switching(out, analyze_block_set(out, sw.blocks)) == inc);
}

}  // namespace

TEST_CASE("block pairs of the Fano plane") {
  const IncidenceStructure f = fano();
  const SwitchingSet sw = analyze_block_set(f, {3, 0});
  CHECK(sw.blocks == std::vector<std::size_t>{0, 3});
  CHECK(sw.p2 == PointSet{1});
  CHECK(sw.p1 == PointSet{4, 6});
  CHECK(sw.balanced == PointSet{0, 2, 3, 5});
  CHECK(error_of([&] { analyze_block_set(f, {2}); }) == errc::odd_size);
  CHECK(error_of([&] { analyze_block_set(f, {}); }) == errc::invalid_argument);
  CHECK(error_of([&] { analyze_block_set(f, {0, 9}); }) == errc::index_out_of_range);
  CHECK(error_of([&] { analyze_block_set(f, {0, 1, 2, 3}); }) == errc::not_switching_set);
}

TEST_CASE("switching preserves parameters on every small switching set") {
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  for (const auto& inc : {fano(), design_6_3_2(), d36}) {
    EnumerationOptions opt;
    opt.max_size = 6;
    opt.node_budget = 0;
    const auto sets = enumerate_switching_sets(inc, opt);
    CHECK(!sets.empty());
    for (const auto& sw : sets) check_switching_identities(inc, sw);
  }
}

TEST_CASE("pair switching keeps the isomorphism class") {
  const IncidenceStructure f = fano();
  const Certificate c = design_certificate(f);
  EnumerationOptions opt;
  opt.max_size = 2;
  const auto pairs = enumerate_switching_sets(f, opt);
  REQUIRE(pairs.size() == 21);
  for (const auto& sw : pairs) CHECK(design_certificate(apply_switching(f, sw)) == c);

  const IncidenceStructure d = design_6_3_2();
  const Certificate cd = design_certificate(d);
  for (const auto& sw : enumerate_switching_sets(d, opt)) CHECK(design_certificate(apply_switching(d, sw)) == cd);
}

TEST_CASE("exhaustive enumeration matches unpruned subset scan") {
  for (const auto& inc : {fano(), design_6_3_2()}) {
    EnumerationOptions opt;
    opt.max_size = 6;
    std::vector<std::vector<std::size_t>> got;
    for (const auto& sw : enumerate_switching_sets(inc, opt)) got.push_back(sw.blocks);

    std::vector<std::vector<std::size_t>> want;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> walk = [&](std::size_t next) {
      for (std::size_t i = next; i < inc.b(); ++i) {
        cur.push_back(i);
        if (cur.size() % 2 == 0) {
          bool ok = true;
          for (std::size_t x = 0; x < inc.v() && ok; ++x) {
            std::size_t deg = 0;
            for (std::size_t blk : cur) deg += inc.incident(blk, x) ? 1 : 0;
            ok = deg == 0 || deg == cur.size() || 2 * deg == cur.size();
          }
          if (ok) want.push_back(cur);
        }
        if (cur.size() < 6) walk(i + 1);
        cur.pop_back();
      }
    };
    walk(0);
    CHECK(got == want);
  }
}

TEST_CASE("enumeration edge cases") {
  EnumerationOptions opt;
  opt.max_size = 0;
  CHECK(enumerate_switching_sets(fano(), opt).empty());

  opt.max_size = 6;
  opt.node_budget = 5;
  CHECK(error_of([&] { enumerate_switching_sets(design_6_3_2(), opt); }) == errc::budget_exceeded);

  opt.node_budget = 0;
  std::size_t seen = 0;
  for_each_switching_set(fano(), opt, [&](const SwitchingSet&) { return ++seen < 3; });
  CHECK(seen == 3);
}

TEST_CASE("grouped enumeration on diagonal block rows") {
  const IncidenceStructure d = hadamard_to_menon(searched_bush36());
  EnumerationOptions opt;
  opt.strategy = EnumerationOptions::Strategy::grouped;
  opt.groups = bush_block_groups(3);
  opt.max_size = 6;
  const auto sets = enumerate_switching_sets(d, opt);
  REQUIRE(sets.size() == 6);
  for (std::size_t g = 0; g < 6; ++g) {
    CHECK(sets[g].blocks == opt.groups[g]);
    CHECK(sets[g].p1 == PointSet(opt.groups[g].begin(), opt.groups[g].end()));
    CHECK(sets[g].p2.empty());
  }
}

TEST_CASE("switching closure") {
  const IncidenceStructure d = hadamard_to_menon(searched_bush36());
  const auto sets = diagonal_switching_sets(d, 3);
  const auto closure = switching_closure(d, sets);
  REQUIRE(closure.size() == 64);
  CHECK(closure[0] == d);
  for (const auto& x : closure) CHECK(validate_2design(x) == DesignParams{36, 36, 15, 15, 6});

  // Applying one more set to the member for S gives the member for S + {x}.
  for (std::size_t mask = 0; mask < 64; ++mask)
    for (std::size_t s = 0; s < 6; ++s) {
      if (mask >> s & 1U) continue;
      const SwitchingSet again = analyze_block_set(closure[mask], sets[s].blocks);
      CHECK(apply_switching(closure[mask], again) == closure[mask | (std::size_t{1} << s)]);
    }

  const auto single = switching_closure(d, {});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == d);

  const SwitchingSet overlap = analyze_block_set(d, {0, 1, 2, 3, 4, 5});
  const SwitchingSet pair = analyze_block_set(d, {0, 6});
  CHECK(error_of([&] { switching_closure(d, {overlap, pair}); }) == errc::overlapping_sets);
}

TEST_CASE("stale switching sets are rejected") {
  const IncidenceStructure f = fano();
  const SwitchingSet sw = analyze_block_set(f, {0, 1});
  IncidenceStructure other = f;
  other.matrix().flip(1, 6);
  CHECK(error_of([&] { apply_switching(other, sw); }) == errc::stale_switching_set);
  CHECK(error_of([&] { trade_subdesign(other, sw); }) == errc::stale_switching_set);
}

TEST_CASE("trade subdesigns") {
  const IncidenceStructure d = hadamard_to_menon(bush_from_hadamard(sylvester(3)));
  const auto sets = diagonal_switching_sets(d, 4);
  REQUIRE(sets.size() == 8);
  for (const auto& sw : sets) {
    REQUIRE(sw.size() == 8);
    const IncidenceStructure t = trade_subdesign(d, sw);
    const DesignParams p = validate_2design(t);
    CHECK(p.v == 8);
    CHECK(p.k == 4);
    // Block q of the trade is the dual's block for point balanced[q], restricted to B1.
    const IncidenceStructure dd = dual(d);
    for (std::size_t q = 0; q < t.b(); ++q)
      for (std::size_t j = 0; j < sw.size(); ++j) CHECK(t.incident(q, j) == dd.incident(sw.balanced[q], sw.blocks[j]));
  }

  const IncidenceStructure f = fano();
  const IncidenceStructure t = trade_subdesign(f, analyze_block_set(f, {0, 1}));
  CHECK(t.v() == 2);
  CHECK(t.b() == 4);
  CHECK(error_of([&] { validate_2design(t); }).has_value());
  CHECK(error_of([] { trade_subdesign(design_6_3_2(), analyze_block_set(design_6_3_2(), {0, 1})); }) ==
        errc::not_symmetric);
}

TEST_CASE("switching-set fixture lines") {
  std::istringstream in("7 7\n1110000\nS: 0 3\n# note\nS: 1 2 4 5\n");
  const auto lines = parse_switching_lines(in);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == std::vector<std::size_t>{0, 3});
  CHECK(lines[1] == std::vector<std::size_t>{1, 2, 4, 5});
  CHECK(format_switching_line(analyze_block_set(fano(), {0, 3})) == "S: 0 3");
}
