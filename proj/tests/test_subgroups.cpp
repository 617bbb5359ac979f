#include <catch2/catch_amalgamated.hpp>

#include "property_suites.hpp"

using namespace nilgenus;

namespace {

/// Number of subgroups represented by a conjugacy class representative:
/// [G : N(H)] = index / #{c : standardise(t, c) == t}.
std::size_t class_size(const CosetTable& t) {
  std::size_t stab = 0;
  for (std::size_t c = 0; c < t.degree(); ++c) stab += standardise(t, c) == t;
  return t.degree() / stab;
}

std::vector<std::size_t> total_subgroups(const Presentation& p, std::size_t max) {
  std::vector<std::size_t> out(max + 1, 0);
  for (const auto& r : low_index(p, max)) out[r.index] += class_size(r.table);
  return out;
}

}  // namespace

TEST_CASE("coset enumeration of small groups") {
  Presentation s3 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n");
  CHECK(todd_coxeter(s3, {}).index() == 6);
  CHECK(todd_coxeter(s3, {s3.gen(0)}).index() == 3);
  CHECK(todd_coxeter(s3, {s3.gen(1)}).index() == 2);

  Presentation a5 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b a b a b\n");
  CHECK(todd_coxeter(a5, {}).index() == 60);
  CHECK(todd_coxeter(a5, {a5.gen(1)}).index() == 20);

  Presentation trivial = higman_group();
  CHECK_THROWS_AS(todd_coxeter(trivial, {}, 2000), CapExceeded);
  CHECK_THROWS_AS(todd_coxeter(Presentation({"a"}, {}), {}, 50), CapExceeded);
}

TEST_CASE("coset table closure property suite") {
  auto o = props::coset_table_closure(1200);
  INFO(o.first_failure);
  CHECK(o.failures == 0);
}

TEST_CASE("low-index subgroup counts agree with permutation counting") {
  struct Case {
    Presentation p;
    std::size_t max;
  };
  std::vector<Case> cases{{Presentation({"a", "b"}, {}), 4},
                          {surface_group(2), 4},
                          {parse_presentation("gens: a b\nrel: a^2\nrel: b^3\n"), 5},
                          {parse_presentation("gens: a b\nrel: a b a^-1 b^-1\n"), 5},
                          {parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b a b a b\n"), 5},
                          {link_group_a2().source, 3}};
  for (const auto& c : cases) {
    INFO(serialize(c.p));
    auto mine = total_subgroups(c.p, c.max);
    auto ref = oracle::subgroup_counts(c.p, c.max);
    for (std::size_t n = 1; n <= c.max; ++n) CHECK(Integer(static_cast<unsigned long>(mine[n])) == ref[n]);
  }
}

TEST_CASE("low-index conjugacy class counts for F_2") {
  std::map<std::size_t, std::size_t> by_index;
  for (const auto& r : low_index(Presentation({"a", "b"}, {}), 4)) ++by_index[r.index];
  CHECK(by_index == std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}, {3, 7}, {4, 26}});

  std::map<std::size_t, std::size_t> normal;
  for (const auto& r : low_index(Presentation({"a", "b"}, {}), 4, true)) {
    CHECK(r.normal);
    CHECK(is_normal(r.table));
    ++normal[r.index];
  }
  // Normal subgroups of index n in F_2 are kernels onto groups of order n
  // generated by two elements: 3 onto Z/2, 4 onto Z/3, 6 onto Z/4 and 1 onto
  // the Klein group.
  CHECK(normal == std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}, {3, 4}, {4, 7}});
}

TEST_CASE("low-index results are canonical and verified") {
  Presentation s = surface_group(2);
  auto subs = low_index(s, 3);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto& t = subs[i].table;
    CHECK_FALSE(table_defect(s, t));
    CHECK(standardise(t) == t);
    for (std::size_t c = 0; c < t.degree(); ++c) CHECK_FALSE(standardise(t, c) < t);
    if (i > 0) CHECK(subs[i - 1].table < t);
  }
}

TEST_CASE("worker count does not change results") {
  auto o = props::jobs_determinism(1000);
  INFO(o.first_failure);
  CHECK(o.failures == 0);
}

TEST_CASE("search cap") {
  LowIndexOptions opt;
  opt.max_index = 6;
  opt.max_nodes = 100;
  CHECK_THROWS_AS(low_index(Presentation({"a", "b"}, {}), opt), CapExceeded);
}

TEST_CASE("Higman group has no proper subgroup of index at most 5") {
  auto subs = low_index(higman_group(), 5);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0].index == 1);
}

TEST_CASE("Reidemeister-Schreier on free groups is Nielsen-Schreier") {
  for (std::size_t r = 1; r <= 3; ++r) {
    Presentation f = free_group(r);
    for (const auto& s : low_index(f, r == 3 ? 3 : 4)) {
      Presentation sub = reidemeister_schreier(f, s.table);
      CHECK(sub.relator_count() == 0);
      CHECK(sub.generator_count() == s.index * (r - 1) + 1);
    }
  }
}

TEST_CASE("Reidemeister-Schreier presentations") {
  Presentation s3 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n");
  CosetTable t = todd_coxeter(s3, {s3.gen(1)});
  Presentation sub = reidemeister_schreier(s3, t);
  // <b> is cyclic of order 3.
  CHECK(abelianization(sub) == AbelianInvariants{0, {3}});
  CHECK(todd_coxeter(sub, {}).index() == 3);

  // Index-2 subgroup of the genus-2 surface group is the genus-3 surface group.
  Presentation s = surface_group(2);
  for (const auto& r : low_index(s, 2)) {
    if (r.index != 2) continue;
    Presentation q = reidemeister_schreier(s, r.table);
    CHECK(abelianization(q) == AbelianInvariants{6, {}});
    CHECK(q.generator_count() == 7);
    CHECK(q.relator_count() == 2);
  }

  // One Schreier generator per non-tree edge: 2 * 2 - (2 - 1).
  SchreierData data = schreier_generators(t);
  CHECK(data.generator_count == 3);
  CHECK(schreier_rewrite(t, data, parse_word("b a b a", s3), 0).second == *t.trace(0, parse_word("b a b a", s3)));
}

TEST_CASE("normal subgroup intersections") {
  Presentation f2({"a", "b"}, {});
  auto mod2 = abelian_kernel_table(f2, {2, 2}, {{1, 0}, {0, 1}});
  auto mod3 = abelian_kernel_table(f2, {3}, {{1}, {0}});
  CHECK(mod2.index() == 4);
  CHECK(mod3.index() == 3);
  auto both = intersect_normals(f2, {mod2, mod3});
  CHECK(both.index() == 12);
  CHECK(is_normal(both));
  CHECK(refines(both, mod2));
  CHECK(refines(both, mod3));
  CHECK_FALSE(refines(mod2, mod3));
  CHECK_THROWS_AS(intersect_normals(f2, {mod2, mod3}, 5), CapExceeded);

  Presentation z2 = parse_presentation("gens: a b\nrel: a b a^-1 b^-1\n");
  CHECK_THROWS_AS(abelian_kernel_table(parse_presentation("gens: a\nrel: a^3\n"), {2}, {{1}}), NotAHomomorphism);
  CHECK(abelian_kernel_table(z2, {4}, {{1}, {2}}).index() == 4);
}

TEST_CASE("nilpotency of finite quotients") {
  Presentation f2({"a", "b"}, {});
  // Groups of order at most 4 are abelian.
  for (const auto& r : low_index(f2, 4, true)) CHECK(finite_quotient_is_nilpotent(r.table));
  Presentation s3 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n");
  CHECK_FALSE(finite_quotient_is_nilpotent(todd_coxeter(s3, {})));
  Presentation q8 = parse_presentation("gens: i j\nrel: i^4\nrel: i^2 j^-2\nrel: j^-1 i j i\n");
  CHECK(finite_quotient_is_nilpotent(todd_coxeter(q8, {})));
  Presentation z6 = parse_presentation("gens: a\nrel: a^6\n");
  CHECK(finite_quotient_is_nilpotent(todd_coxeter(z6, {})));
  Presentation a4 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b\n");
  CHECK_FALSE(finite_quotient_is_nilpotent(todd_coxeter(a4, {})));

  // M(3) of F_2: intersection of the index-2 and index-3 normal subgroups
  // with abelian quotient; index 4 * 9.
  CHECK(nilpotent_normal_intersection(f2, 3).index() == 36);
}
