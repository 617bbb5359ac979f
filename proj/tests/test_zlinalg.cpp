#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace nilgenus;

TEST_CASE("Smith normal form of small matrices") {
  SnfResult s = smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  CHECK(s.diagonal == std::vector<Integer>{2, 6, 12});
  CHECK(s.rank_free == 0);

  SnfResult z = smith_normal_form(IntMatrix(2, 3));
  CHECK(z.rank() == 0);
  CHECK(z.rank_free == 3);

  CHECK(cokernel(IntMatrix{{2, 0}, {0, 3}}) == AbelianInvariants{0, {6}});
  CHECK(cokernel(IntMatrix{{1, -1}}) == AbelianInvariants{1, {}});
  CHECK(cokernel(IntMatrix(0, 2)) == AbelianInvariants{2, {}});
}

TEST_CASE("column transform exposes the free part") {
  IntMatrix m{{2, 4, 6}, {1, 1, 1}};
  auto [s, q] = smith_normal_form_with_transform(m);
  REQUIRE(s.rank() == 2);
  IntMatrix mq = m * q;
  for (std::size_t r = 0; r < 2; ++r) CHECK(mq(r, 2) == 0);
  CHECK(s.rank_free == 1);
}

TEST_CASE("SNF agrees with determinantal divisors") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> entry(-12, 12);
  for (int i = 0; i < 300; ++i) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m(r, c);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < c; ++b) m(a, b) = entry(rng);
    std::vector<Integer> nonzero;
    for (const auto& d : smith_normal_form(m).diagonal)
      if (sgn(d) != 0) nonzero.push_back(d);
    REQUIRE(nonzero == oracle::invariant_factors(m));
  }
}

TEST_CASE("SNF unimodular invariance property suite") {
  auto o = props::snf_unimodular(2000);
  INFO(o.first_failure);
  CHECK(o.failures == 0);
}

TEST_CASE("large entries stay exact") {
  IntMatrix m{{1, 0}, {0, 1}};
  m(0, 0) = Integer("123456789012345678901234567890");
  m(1, 1) = Integer("987654321098765432109876543210");
  SnfResult s = smith_normal_form(m);
  Integer g, l;
  mpz_gcd(g.get_mpz_t(), m(0, 0).get_mpz_t(), m(1, 1).get_mpz_t());
  mpz_lcm(l.get_mpz_t(), m(0, 0).get_mpz_t(), m(1, 1).get_mpz_t());
  CHECK(s.diagonal == std::vector<Integer>{g, l});
}

TEST_CASE("rank modulo p") {
  IntMatrix m{{1, 1}, {1, -1}};
  CHECK(rank_mod_p(m, 2) == 1);
  CHECK(rank_mod_p(m, 3) == 2);
  CHECK(rank_mod_p(IntMatrix{{6, 0}, {0, 10}}, 5) == 1);
  CHECK_THROWS_AS(rank_mod_p(m, 4), InvalidArgument);
  CHECK(is_prime(2));
  CHECK(is_prime(65537));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));

  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> entry(-20, 20);
  for (int i = 0; i < 300; ++i) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntMatrix a(r, c);
    for (std::size_t x = 0; x < r; ++x)
      for (std::size_t y = 0; y < c; ++y) a(x, y) = entry(rng);
    for (std::uint64_t p : {2u, 3u, 7u}) {
      // rank over F_p counts the invariant factors prime to p.
      std::size_t expect = 0;
      for (const auto& d : smith_normal_form(a).diagonal)
        if (sgn(d) != 0 && !mpz_divisible_ui_p(d.get_mpz_t(), p)) ++expect;
      REQUIRE(rank_mod_p(a, p) == expect);
    }
  }
}

TEST_CASE("lattice basis reaches Hermite normal form") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> entry(-15, 15);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng() % 5, k = 1 + rng() % 7;
    IntMatrix m(k, n);
    LatticeBasis basis(n);
    std::vector<SparseRow> rows;
    for (std::size_t r = 0; r < k; ++r) {
      SparseRow v;
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) = entry(rng) * (rng() % 2);
        if (sgn(m(r, c)) != 0) v.emplace_back(c, m(r, c));
      }
      rows.push_back(v);
      basis.add(v);
    }
    SnfResult s = smith_normal_form(m);
    REQUIRE(basis.rank() == s.rank());
    auto hnf = basis.reduced();
    Integer index = 1;
    for (const auto& [col, row] : hnf) {
      REQUIRE(row.front().first == col);
      REQUIRE(row.front().second > 0);
      index *= row.front().second;
      for (const auto& [other, orow] : hnf) {
        if (other <= col) continue;
        Integer e = LatticeBasis::entry(row, other);
        REQUIRE(e >= 0);
        REQUIRE(e < orow.front().second);
      }
    }
    if (s.rank() == n) {
      Integer prod = 1;
      for (const auto& d : s.diagonal) prod *= d;
      REQUIRE(index == abs(prod));
    }
    // Re-adding a generator leaves the lattice unchanged.
    LatticeBasis again = basis;
    again.add(rows[rng() % k]);
    REQUIRE(again.reduced() == hnf);
  }
}
