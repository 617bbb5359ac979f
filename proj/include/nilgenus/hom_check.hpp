#pragma once

// Certifying that generator images define a homomorphism.

#include "nilgenus/nilquot.hpp"

namespace nilgenus {

namespace detail {

[[noreturn]] inline void not_a_hom(const GroupHom& h, std::size_t r, const std::string& where) {
  throw NotAHomomorphism(r, "relator " + std::to_string(r + 1) + " (" +
                                format_word(h.source.relators()[r], h.source.generator_names()) +
                                ") does not map to the identity " + where);
}

}  // namespace detail

/// Checks relator images against a precomputed quotient of the target.
inline GroupHom check_hom(const GroupHom& h, const PcQuotient& target_quotient) {
  if (!(target_quotient.source() == h.target)) throw InvalidArgument("check_hom: quotient is not of the hom target");
  const int c = target_quotient.class_bound();
  for (std::size_t r = 0; r < h.source.relator_count(); ++r) {
    ExpVec v = target_quotient.collect(h.apply(h.source.relators()[r]));
    for (Exponent e : v)
      if (e != 0) detail::not_a_hom(h, r, "in the class-" + std::to_string(c) + " quotient of the target");
  }
  GroupHom out = h;
  if (!out.certified_class || *out.certified_class < c) out.certified_class = c;
  return out;
}

/// Certifies h to class c. A free target is checked exactly by free
/// reduction; otherwise each relator image must vanish in target/target_{c+1}.
inline GroupHom check_hom(const GroupHom& h, int c, const NqLimits& limits = {}) {
  if (c < 1) throw InvalidArgument("check_hom needs class >= 1");
  if (h.target.relator_count() == 0) {
    for (std::size_t r = 0; r < h.source.relator_count(); ++r) {
      if (!h.apply(h.source.relators()[r]).empty()) detail::not_a_hom(h, r, "in the free target");
    }
    GroupHom out = h;
    out.certified_exactly = true;
    out.certified_class = c;
    return out;
  }
  return check_hom(h, nilpotent_quotient(h.target, c, limits));
}

}  // namespace nilgenus
