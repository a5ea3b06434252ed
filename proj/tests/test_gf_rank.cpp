#include <catch_amalgamated.hpp>

#include <random>

#include "test_support.hpp"

using namespace dsw;
using namespace dsw::testing;

TEST_CASE("prime check") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(2147483647));
  CHECK(!is_prime(0));
  CHECK(!is_prime(1));
  CHECK(!is_prime(9));
  CHECK(!is_prime(2147483649ULL));
  CHECK(error_of([] { p_rank(fano(), 4); }) == errc::not_prime);
  CHECK(error_of([] { p_rank(fano(), 1); }) == errc::not_prime);
}

TEST_CASE("small closed-form ranks") {
  for (std::size_t v : {1, 5, 70}) {
    std::vector<PointSet> singletons;
    for (std::size_t i = 0; i < v; ++i) singletons.push_back({i});
    const IncidenceStructure id(v, singletons);
    for (std::uint32_t p : {2U, 3U, 5U, 65537U}) CHECK(p_rank(id, p) == v);
  }
  std::vector<PointSet> full(5, PointSet{0, 1, 2, 3, 4});
  const IncidenceStructure ones(5, full);
  for (std::uint32_t p : {2U, 3U, 7U}) CHECK(p_rank(ones, p) == 1);
}

TEST_CASE("ranks agree with textbook elimination") {
  CHECK(p_rank(fano(), 2) == 4);
  CHECK(naive_rank(dense(fano()), 2) == 4);

  std::mt19937_64 rng(Catch::getSeed());
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = 1 + rng() % 20;
    const std::size_t cols = 1 + rng() % 90;
    BitMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (coin(rng)) m.set(i, j);
    const IncidenceStructure inc(m);
    for (int p : {2, 3, 5, 7, 10007}) CHECK(p_rank(inc, static_cast<std::uint32_t>(p)) == naive_rank(dense(inc), p));
  }

  for (const auto& inc : {fano(), design_6_3_2(), hadamard_to_menon(bush_from_hadamard(sylvester(2)))})
    for (int p : {2, 3, 5}) CHECK(p_rank(inc, static_cast<std::uint32_t>(p)) == naive_rank(dense(inc), p));
}

TEST_CASE("rank is invariant under relabeling and duality") {
  std::mt19937_64 rng(Catch::getSeed());
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  for (const auto& inc : {fano(), design_6_3_2(), d36}) {
    for (std::uint32_t p : {2U, 3U, 5U}) {
      const std::size_t r = p_rank(inc, p);
      CHECK(p_rank(dual(inc), p) == r);
      for (int t = 0; t < 100; ++t) CHECK(p_rank(random_relabel(inc, rng), p) == r);
    }
  }
}

TEST_CASE("rank deficiency needs p to divide the order") {
  std::vector<IncidenceStructure> designs{fano(), hadamard_to_menon(bush_from_hadamard(sylvester(2))),
                                          hadamard_to_menon(bush_from_hadamard(sylvester(3)))};
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  for (const auto& x : switching_closure(d36, diagonal_switching_sets(d36, 3))) designs.push_back(x);
  for (const auto& inc : designs) {
    const DesignParams params = validate_2design(inc);
    for (std::uint32_t p : {2U, 3U, 5U, 7U}) {
      const std::size_t r = p_rank(inc, p);
      // det^2 = k^2 (k - lambda)^(v-1), and rank < v - 1 forces p | k - lambda.
      if (r + 1 < params.v) CHECK(params.order() % p == 0);
      if (r < params.v) CHECK((params.k * params.order()) % p == 0);
    }
  }
}

TEST_CASE("rank distribution") {
  const IncidenceStructure d36 = hadamard_to_menon(searched_bush36());
  const std::vector<IncidenceStructure> copies(64, d36);
  const auto hist = rank_distribution(copies, 3);
  REQUIRE(hist.size() == 1);
  CHECK(hist.begin()->second == 64);
  CHECK(hist.begin()->first == p_rank(d36, 3));

  const auto closure = switching_closure(d36, diagonal_switching_sets(d36, 3));
  std::size_t total = 0;
  for (auto [rank, n] : rank_distribution(closure, 3)) {
    CHECK(rank <= 36);
    total += n;
  }
  CHECK(total == 64);

  const std::vector<IncidenceStructure> mixed{fano(), design_6_3_2()};
  CHECK(error_of([&] { rank_distribution(mixed, 2); }) == errc::invalid_argument);
}
