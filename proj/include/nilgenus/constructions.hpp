#pragma once

// Named groups and end-to-end certificates: Higman's group, the acyclic
// family, surface groups, the A2 link group with its map onto F_2, direct
// and fibre products, genus checks along a homomorphism, and witnesses of
// non-residual nilpotence.

#include <future>

#include "nilgenus/free_group.hpp"
#include "nilgenus/hom_check.hpp"
#include "nilgenus/homcalc.hpp"
#include "nilgenus/low_index.hpp"

namespace nilgenus {

namespace detail {

inline Word word_of(const Presentation& p, std::string_view text) { return parse_word(text, p); }

inline Presentation with_relators(std::vector<std::string> names, const std::vector<std::string>& rels) {
  Presentation bare(names, {});
  std::vector<Word> words;
  for (const auto& r : rels) words.push_back(parse_word(r, bare));
  return Presentation(std::move(names), std::move(words));
}

}  // namespace detail

/// Free group on x1..xr, or on the given names.
inline Presentation free_group(std::size_t rank) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= rank; ++i) names.push_back("x" + std::to_string(i));
  return Presentation(names, {});
}

/// Four generators, bab^-1 = a^2 and its cyclic shifts; no nontrivial finite quotients.
inline Presentation higman_group() {
  return detail::with_relators({"a", "b", "c", "d"},
                               {"b a b^-1 a^-2", "c b c^-1 b^-2", "d c d^-1 c^-2", "a d a^-1 d^-2"});
}

inline Presentation acyclic_group(int p) {
  if (p < 3) throw InvalidArgument("acyclic_group needs p >= 3, got " + std::to_string(p));
  std::string e = std::to_string(p), f = std::to_string(-p - 1);
  return detail::with_relators({"a1", "a2", "b1", "b2"},
                               {"a1^-1 a2^" + e + " a1 a2^" + f, "b1^-1 b2^" + e + " b1 b2^" + f,
                                "a1^-1 b2^-1 b1^-1 b2^-1 b1 b2 b1^-1 b2 b1",
                                "b1^-1 a2^-1 a1^-1 a2^-1 a1 a2 a1^-1 a2 a1"});
}

/// Closed orientable surface: a1 b1 ... ag bg with relator [a1,b1]...[ag,bg].
inline Presentation surface_group(int g) {
  if (g < 1) throw InvalidArgument("surface_group needs genus >= 1, got " + std::to_string(g));
  std::vector<std::string> names;
  std::string rel;
  for (int i = 1; i <= g; ++i) {
    std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
    names.push_back(a);
    names.push_back(b);
    rel += a + "^-1 " + b + "^-1 " + a + " " + b + " ";
  }
  return detail::with_relators(names, {rel});
}

/// The two-component link group with [u,l] = 1, uzu^-1 = v^-1zvz,
/// l = v^-1uzu^-1vz, and the map onto the free group <u, v> killing z and l.
inline GroupHom link_group_a2() {
  Presentation g = detail::with_relators({"u", "v", "z", "l"},
                                         {"u^-1 l^-1 u l", "u z u^-1 z^-1 v^-1 z^-1 v", "l^-1 v^-1 u z u^-1 v z"});
  Presentation f2({"u", "v"}, {});
  return check_hom(parse_hom_spec("z=1,l=1", g, f2), 1);
}

/// A x B with the generators of B primed and every pair commuting.
inline Presentation direct_product(const Presentation& a, const Presentation& b) {
  const std::size_t na = a.generator_count(), nb = b.generator_count(), n = na + nb;
  std::vector<std::string> names = a.generator_names();
  for (const auto& s : b.generator_names()) names.push_back(s + "'");
  std::vector<Word> rels;
  auto shift = [n](const Word& w, std::size_t offset) {
    std::vector<Letter> l;
    for (Letter x : w.letters()) l.push_back(make_letter(generator_of(x) + offset, sign_of(x)));
    return Word::reduce(l, n);
  };
  for (const auto& r : a.relators()) rels.push_back(shift(r, 0));
  for (const auto& r : b.relators()) rels.push_back(shift(r, na));
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      rels.push_back(commutator(Word::generator(i, n), Word::generator(na + j, n)));
  return Presentation(names, rels);
}

struct FibreProductGenerators {
  /// F x F on the generators of Q and their primed copies.
  Presentation ambient;
  /// (x_i, x_i) for each generator, then (r_j, 1) for each relator of Q.
  std::vector<Word> generators;
};

/// Generators of P = {(x, y) : x = y in Q} inside F_r x F_r, where Q is
/// presented on r generators.
inline FibreProductGenerators fibre_product_gens(std::size_t rank, const Presentation& q) {
  if (q.generator_count() != rank)
    throw InvalidArgument("fibre product: Q has " + std::to_string(q.generator_count()) + " generators, expected " +
                          std::to_string(rank));
  Presentation f(q.generator_names(), {});
  FibreProductGenerators out{direct_product(f, f), {}};
  const std::size_t n = 2 * rank;
  for (std::size_t i = 0; i < rank; ++i)
    out.generators.push_back(multiply(Word::generator(i, n), Word::generator(rank + i, n)));
  for (const auto& r : q.relators()) out.generators.push_back(Word::reduce(r.letters(), n));
  return out;
}

/// A finitely presented group P' mapping onto P: generators d_i -> (x_i, x_i)
/// and t_j -> (r_j, 1), relators [t_j, r_k(d) t_k^-1]. The relators hold in P
/// since r_k(d) t_k^-1 = (1, r_k). The returned map goes to F x F.
inline GroupHom fibre_product_cover(const Presentation& q) {
  const std::size_t r = q.generator_count(), m = q.relator_count();
  FibreProductGenerators fp = fibre_product_gens(r, q);
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= r; ++i) names.push_back("d" + std::to_string(i));
  for (std::size_t j = 1; j <= m; ++j) names.push_back("t" + std::to_string(j));
  const std::size_t n = r + m;
  auto rel_in_d = [&](std::size_t k) { return Word::reduce(q.relators()[k].letters(), n); };
  std::vector<Word> rels;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k) {
      Word y = multiply(rel_in_d(k), Word::generator(r + k, n, -1));
      rels.push_back(commutator(Word::generator(r + j, n), y));
    }
  std::erase_if(rels, [](const Word& w) { return w.empty(); });
  return GroupHom(Presentation(names, rels), fp.ambient, fp.generators);
}

struct GenusReport {
  GroupHom hom;
  int c_max = 0;
  std::vector<InducedMapReport> per_class;
  /// Largest c such that every class <= c is an isomorphism.
  int iso_through = 0;
  /// Set when a resource cap stopped the run before c_max.
  std::optional<std::string> cap_error;
};

/// Compares source and target quotients along h for c = 1..c_max, building
/// both quotients one class at a time. With jobs > 1 the two quotients grow
/// concurrently.
inline GenusReport genus_check(const GroupHom& h, int c_max, const NqLimits& limits = {}, unsigned jobs = 1) {
  if (c_max < 1) throw InvalidArgument("genus_check needs c_max >= 1");
  GenusReport rep;
  rep.hom = h;
  rep.c_max = c_max;
  PcQuotient qs(h.source), qt(h.target);
  NqBuilder bs(qs, limits), bt(qt, limits);
  for (int c = 1; c <= c_max; ++c) {
    try {
      if (jobs > 1) {
        auto f = std::async(std::launch::async, [&] { bs.extend(); });
        bt.extend();
        f.get();
      } else {
        bs.extend();
        bt.extend();
      }
    } catch (const CapExceeded& e) {
      rep.cap_error = e.what();
      break;
    }
    GroupHom cert = h.target.relator_count() == 0 ? check_hom(h, c, limits) : check_hom(h, qt);
    rep.hom = cert;
    rep.per_class.push_back(induced_map_report(cert, qs, qt, c));
  }
  for (const auto& r : rep.per_class) {
    if (r.verdict != Verdict::Iso) break;
    rep.iso_through = r.nilpotency_class;
  }
  return rep;
}

struct WitnessReport {
  bool retraction_certified = false;
  bool epimorphism = false;
  AbelianInvariants source_h1;
  bool h1_isomorphism = false;
  /// Entry c-1: the candidate is trivial in G/G_{c+1}.
  std::vector<bool> trivial_in_quotient;
  /// Index of a finite quotient in which the candidate is nontrivial, if
  /// the search found one.
  std::optional<std::size_t> nontrivial_in_finite_quotient;
  bool confirmed = false;
};

/// Checks that the retraction is an epimorphism onto a free group inducing an
/// isomorphism on H_1, and that the candidate lies in its kernel and dies in
/// every G/G_{c+1}, c <= c_max. A finite quotient where the candidate survives
/// is searched up to index `search_index` (0 to skip); finding one proves the
/// candidate nontrivial, hence G not residually nilpotent.
inline WitnessReport non_residual_nilpotence_witness(const GroupHom& retraction, const Word& candidate, int c_max,
                                                     std::size_t search_index = 0, const NqLimits& limits = {}) {
  if (c_max < 1) throw InvalidArgument("witness needs c_max >= 1");
  const Presentation& p = retraction.source;
  if (retraction.target.relator_count() != 0) throw InvalidArgument("witness: retraction target must be a free group");
  WitnessReport w;
  check_hom(retraction, c_max, limits);
  w.retraction_certified = true;
  if (!retraction.apply(candidate).empty())
    throw InvalidArgument("witness: candidate " + format_word(candidate, p.generator_names()) +
                          " is not in the kernel of the retraction");
  const std::size_t rank = retraction.target.generator_count();
  w.epimorphism = StallingsGraph(rank, retraction.images).is_whole_group();
  w.source_h1 = abelianization(p);
  w.h1_isomorphism = w.epimorphism && w.source_h1 == AbelianInvariants{rank, {}};
  PcQuotient q = nilpotent_quotient(p, c_max, limits);
  for (int c = 1; c <= c_max; ++c) {
    ExpVec v = truncate(q, c).collect(candidate);
    w.trivial_in_quotient.push_back(std::all_of(v.begin(), v.end(), [](Exponent e) { return e == 0; }));
  }
  if (search_index > 0) {
    for (const auto& r : low_index(p, search_index)) {
      for (std::size_t c = 0; c < r.index; ++c)
        if (r.table.trace(c, candidate) != c) {
          w.nontrivial_in_finite_quotient = r.index;
          break;
        }
      if (w.nontrivial_in_finite_quotient) break;
    }
  }
  w.confirmed = w.epimorphism && w.h1_isomorphism &&
                std::all_of(w.trivial_in_quotient.begin(), w.trivial_in_quotient.end(), [](bool b) { return b; });
  return w;
}

struct ParafreeCertificate {
  Presentation group;
  std::size_t rank = 0;
  bool h1_check = false;
  GenusReport class_checks;
  /// Never certified by any computation here.
  static constexpr const char* residual_nilpotence = "unknown";
  /// Same lower central quotients as F_rank through class_checks.c_max.
  bool same_quotients_as_free() const { return h1_check && class_checks.iso_through == class_checks.c_max; }
};

inline ParafreeCertificate parafree_certificate(const GroupHom& to_free, int c_max, const NqLimits& limits = {}) {
  if (to_free.target.relator_count() != 0) throw InvalidArgument("parafree certificate: target must be free");
  ParafreeCertificate cert;
  cert.group = to_free.source;
  cert.rank = to_free.target.generator_count();
  cert.h1_check = abelianization(to_free.source) == AbelianInvariants{cert.rank, {}};
  cert.class_checks = genus_check(to_free, c_max, limits);
  return cert;
}

/// Builds a named group: higman, acyclic:p, linkA2, surface:g, free:r.
inline Presentation build_named(std::string_view spec) {
  auto colon = spec.find(':');
  std::string name(spec.substr(0, colon));
  std::optional<int> arg;
  if (colon != std::string_view::npos) {
    std::string a(spec.substr(colon + 1));
    try {
      std::size_t used = 0;
      arg = std::stoi(a, &used);
      if (used != a.size()) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("bad parameter in '" + std::string(spec) + "'");
    }
  }
  auto need = [&](bool want) {
    if (want != arg.has_value())
      throw InvalidArgument("'" + name + "' " + (want ? "needs a parameter" : "takes no parameter"));
  };
  if (name == "higman") return need(false), higman_group();
  if (name == "linkA2") return need(false), link_group_a2().source;
  if (name == "acyclic") return need(true), acyclic_group(*arg);
  if (name == "surface") return need(true), surface_group(*arg);
  if (name == "free") {
    need(true);
    if (*arg < 0) throw InvalidArgument("free group rank must be nonnegative");
    return free_group(static_cast<std::size_t>(*arg));
  }
  throw InvalidArgument("unknown group '" + name + "' (expected higman, acyclic:p, linkA2, surface:g or free:r)");
}

}  // namespace nilgenus
