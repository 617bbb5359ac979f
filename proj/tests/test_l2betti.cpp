#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace nilgenus;

namespace {

std::vector<std::string> ratio_strings(const L2Estimate& e) {
  std::vector<std::string> out;
  for (const auto& r : e.ratios) out.push_back(r.get_str());
  return out;
}

}  // namespace

TEST_CASE("congruence towers of free groups") {
  Presentation f2 = free_group(2);
  Tower t = congruence_tower(f2, 2, 3);
  L2Estimate e = luck_estimate(f2, t);
  CHECK(e.indices == std::vector<std::size_t>{4, 16, 64});
  CHECK(e.betti == std::vector<std::size_t>{5, 17, 65});
  CHECK(ratio_strings(e) == std::vector<std::string>{"5/4", "17/16", "65/64"});
  CHECK(e.indices_increasing);
  CHECK(e.ratios_nonincreasing);

  Presentation f3 = free_group(3);
  L2Estimate e3 = luck_estimate(f3, congruence_tower(f3, 3, 1, {27, 1}));
  CHECK(ratio_strings(e3) == std::vector<std::string>{"55/27"});

  CHECK_THROWS_AS(congruence_tower(f2, 2, 5), CapExceeded);
  CHECK_THROWS_AS(congruence_tower(f2, 2, 3, {16, 1}), CapExceeded);
  CHECK_THROWS_AS(congruence_tower(f2, 4, 1), InvalidArgument);
}

TEST_CASE("Nielsen-Schreier ratios along any tower of F_r") {
  // b_1(N) = d(r - 1) + 1, so the ratio is r - 1 + 1/d.
  for (std::size_t r = 2; r <= 3; ++r) {
    Presentation f = free_group(r);
    for (const auto& s : low_index(f, 4, true)) {
      Tower t = explicit_tower(f, {s.table});
      L2Estimate e = luck_estimate(f, t);
      Rational expect(static_cast<long>(s.index * (r - 1) + 1), static_cast<long>(s.index));
      expect.canonicalize();
      CHECK(e.ratios[0] == expect);
    }
  }
}

TEST_CASE("surface group tower steps") {
  Presentation s = surface_group(2);
  // a1 -> 1 in Z/2 and then in Z/4.
  auto n2 = abelian_kernel_table(s, {2}, {{1}, {0}, {0}, {0}});
  auto n4 = abelian_kernel_table(s, {4}, {{1}, {0}, {0}, {0}});
  L2Estimate e = luck_estimate(s, explicit_tower(s, {n2, n4}));
  CHECK(e.indices == std::vector<std::size_t>{2, 4});
  CHECK(ratio_strings(e) == std::vector<std::string>{"3", "5/2"});
  Rational ten_quarters(10, 4);
  ten_quarters.canonicalize();
  CHECK(e.ratios[1] == ten_quarters);
  CHECK(e.ratios_nonincreasing);

  // Index-d covers of the genus-g surface have b_1 = 2(d(g - 1) + 1).
  L2Estimate c = luck_estimate(s, congruence_tower(s, 2, 1, {16, 1}));
  CHECK(c.betti == std::vector<std::size_t>{34});
}

TEST_CASE("m-of-d towers") {
  Presentation f2 = free_group(2);
  Tower t = m_of_d_tower(f2, 2, {64, 1});
  REQUIRE(t.steps.size() == 2);
  CHECK(t.steps[0].index() == 4);
  CHECK(t.steps[1].index() == 36);
  L2Estimate e = luck_estimate(f2, t);
  CHECK(ratio_strings(e) == std::vector<std::string>{"5/4", "37/36"});
  CHECK(m_of_d_tower(f2, 2, {64, 2}).steps[1] == t.steps[1]);

  // Higman's group has no finite quotients, so there is nothing to find.
  CHECK_THROWS_AS(m_of_d_tower(higman_group(), 1, {4, 1}), CapExceeded);
}

TEST_CASE("explicit towers are validated") {
  Presentation f2 = free_group(2);
  auto a = abelian_kernel_table(f2, {2}, {{1}, {0}});
  auto b = abelian_kernel_table(f2, {2}, {{0}, {1}});
  CHECK_THROWS_AS(explicit_tower(f2, {a, b}), InvalidArgument);
  auto non_normal = todd_coxeter(parse_presentation("gens: x1 x2\nrel: x1^3\nrel: x2^2\nrel: x1 x2 x1 x2\n"), {f2.gen(1)});
  CHECK_THROWS_AS(explicit_tower(f2, {non_normal}), InvalidArgument);
  CHECK_NOTHROW(explicit_tower(f2, {}));
}
