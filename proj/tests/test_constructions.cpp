#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "property_suites.hpp"

using namespace nilgenus;

namespace {

Presentation data_file(const std::string& name) {
  std::ifstream in(std::string(NILGENUS_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return parse_presentation(s.str());
}

}  // namespace

TEST_CASE("builders round-trip through the file format") {
  for (const char* name : {"higman", "acyclic:3", "acyclic:7", "linkA2", "surface:1", "surface:3", "free:2"}) {
    Presentation p = build_named(name);
    std::string text = serialize(p);
    CHECK(serialize(parse_presentation(text)) == text);
    CHECK(parse_presentation(text) == p);
  }
  CHECK(build_named("higman") == data_file("higman.grp"));
  CHECK(build_named("linkA2") == data_file("linkA2.grp"));
  CHECK(build_named("surface:2") == data_file("surface2.grp"));
  CHECK(build_named("acyclic:3") == data_file("acyclic3.grp"));
  CHECK_THROWS_AS(build_named("acyclic:2"), InvalidArgument);
  CHECK_THROWS_AS(build_named("surface:0"), InvalidArgument);
  CHECK_THROWS_AS(build_named("surface"), InvalidArgument);
  CHECK_THROWS_AS(build_named("higman:2"), InvalidArgument);
  CHECK_THROWS_AS(build_named("surface:x"), InvalidArgument);
  CHECK_THROWS_AS(build_named("klein"), InvalidArgument);
}

TEST_CASE("Higman group") {
  Presentation h = higman_group();
  CHECK(h.generator_count() == 4);
  CHECK(h.relator_count() == 4);
  CHECK(abelianization(h).trivial());
  PcQuotient q = nilpotent_quotient(h, 5);
  CHECK(q.size() == 0);
  CHECK(q.stable_from() == 1);
}

TEST_CASE("acyclic groups") {
  for (int p : {3, 4, 5}) {
    Presentation g = acyclic_group(p);
    CHECK(abelianization(g).trivial());
    CHECK(complex_homology_mod_p(g, 2) == HomologyDims{1, 0, 0});
    CHECK(nilpotent_quotient(g, 3).size() == 0);
  }
}

TEST_CASE("direct products") {
  Presentation z = parse_presentation("gens: t\n");
  Presentation z3 = parse_presentation("gens: s\nrel: s^3\n");
  Presentation d = direct_product(z, z3);
  CHECK(d.generator_names() == std::vector<std::string>{"t", "s'"});
  CHECK(abelianization(d) == AbelianInvariants{1, {3}});
  Presentation f = free_group(2);
  auto q = nilpotent_quotient(direct_product(f, f), 3);
  auto fs = lcs_invariants(q);
  CHECK(fs[0] == AbelianInvariants{4, {}});
  CHECK(fs[1] == AbelianInvariants{2, {}});
  CHECK(fs[2] == AbelianInvariants{4, {}});
}

TEST_CASE("fibre product generators") {
  Presentation h = higman_group();
  auto fp = fibre_product_gens(4, h);
  CHECK(fp.ambient.generator_count() == 8);
  CHECK(fp.ambient.relator_count() == 16);
  REQUIRE(fp.generators.size() == 8);
  const auto& names = fp.ambient.generator_names();
  CHECK(format_word(fp.generators[0], names) == "a a'");
  CHECK(format_word(fp.generators[4], names) == "b a b^-1 a^-2");
  CHECK_THROWS_AS(fibre_product_gens(3, h), InvalidArgument);

  // Both coordinates of each generator agree in Q.
  Presentation f(h.generator_names(), {});
  GroupHom first = parse_hom_spec("a'=1,b'=1,c'=1,d'=1", fp.ambient, f);
  GroupHom second = parse_hom_spec("a=1,b=1,c=1,d=1,a'=a,b'=b,c'=c,d'=d", fp.ambient, f);
  for (std::size_t i = 0; i < 4; ++i) CHECK(first.apply(fp.generators[i]) == second.apply(fp.generators[i]));
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(first.apply(fp.generators[4 + j]) == Word::reduce(h.relators()[j].letters(), 4));
    CHECK(second.apply(fp.generators[4 + j]).empty());
  }
}

TEST_CASE("fibre product cover maps onto P and has the same quotients") {
  GroupHom cover = fibre_product_cover(higman_group());
  CHECK(cover.source.generator_count() == 8);
  CHECK(cover.source.relator_count() == 16);
  CHECK(check_hom(cover, 3).certified_class == 3);
  GenusReport g = genus_check(cover, 3);
  REQUIRE(g.per_class.size() == 3);
  for (const auto& r : g.per_class) CHECK(r.verdict == Verdict::Iso);
  CHECK(g.iso_through == 3);
  CHECK_FALSE(g.cap_error);
  auto q = nilpotent_quotient(cover.source, 3);
  CHECK(q.hirsch_length() == 60);

  // A presentation of Q with nontrivial abelianization yields a mismatch at class 1.
  GroupHom z = fibre_product_cover(parse_presentation("gens: a b\nrel: a b a^-1 b^-1\n"));
  CHECK(genus_check(z, 2).iso_through == 0);
}

TEST_CASE("link group") {
  GroupHom h = link_group_a2();
  CHECK(h.certified_exactly);
  CHECK(abelianization(h.source) == AbelianInvariants{2, {}});
  GenusReport g = genus_check(h, 4);
  CHECK(g.iso_through == 4);
  GenusReport g2 = genus_check(h, 4, {}, 2);
  REQUIRE(g2.per_class.size() == g.per_class.size());
  for (std::size_t i = 0; i < g.per_class.size(); ++i) CHECK(g2.per_class[i].source_factors == g.per_class[i].source_factors);

  WitnessReport w = non_residual_nilpotence_witness(h, parse_word("l", h.source), 4, 4);
  CHECK(w.retraction_certified);
  CHECK(w.epimorphism);
  CHECK(w.h1_isomorphism);
  CHECK(w.trivial_in_quotient == std::vector<bool>(4, true));
  CHECK(w.confirmed);
  CHECK(w.nontrivial_in_finite_quotient);

  CHECK(non_residual_nilpotence_witness(h, parse_word("z", h.source), 3).confirmed);
  CHECK_THROWS_AS(non_residual_nilpotence_witness(h, parse_word("u", h.source), 3), InvalidArgument);
}

TEST_CASE("witness hypotheses are checked") {
  // Z^2 -> Z killing b is onto but not an H_1 isomorphism, and b survives.
  Presentation z2 = parse_presentation("gens: a b\nrel: a b a^-1 b^-1\n");
  GroupHom r = parse_hom_spec("b=1", z2, Presentation({"a"}, {}));
  WitnessReport w = non_residual_nilpotence_witness(r, z2.gen(1), 2);
  CHECK(w.epimorphism);
  CHECK_FALSE(w.h1_isomorphism);
  CHECK_FALSE(w.trivial_in_quotient[0]);
  CHECK_FALSE(w.confirmed);

  // Not an epimorphism: F_2 -> F_2, x -> x^2.
  Presentation f2({"x", "y"}, {});
  WitnessReport n = non_residual_nilpotence_witness(parse_hom_spec("x=x^2", f2, f2), Word(2), 2);
  CHECK_FALSE(n.epimorphism);
  CHECK_FALSE(n.confirmed);

  CHECK_THROWS_AS(non_residual_nilpotence_witness(parse_hom_spec("", z2, z2), z2.gen(0), 2), InvalidArgument);
}

TEST_CASE("parafree certificates") {
  GroupHom h = link_group_a2();
  ParafreeCertificate c = parafree_certificate(h, 3);
  CHECK(c.rank == 2);
  CHECK(c.h1_check);
  CHECK(c.same_quotients_as_free());
  CHECK(std::string(ParafreeCertificate::residual_nilpotence) == "unknown");

  // A free group is its own certificate.
  Presentation f3 = free_group(3);
  CHECK(parafree_certificate(check_hom(identity_hom(f3), 1), 3).same_quotients_as_free());

  // The genus-2 surface group retracts onto F_2 but fails at H_1.
  Presentation s = surface_group(2);
  ParafreeCertificate sc = parafree_certificate(parse_hom_spec("b1=1,b2=1", s, Presentation({"a1", "a2"}, {})), 2);
  CHECK_FALSE(sc.h1_check);
  CHECK_FALSE(sc.same_quotients_as_free());
}
