#pragma once

// Homology from presentations: H_1 from the relator exponent matrix, Fox
// derivatives, and mod-p homology of the presentation 2-complex (or of its
// finite cover given by a coset table).

#include <map>

#include "nilgenus/coset_table.hpp"
#include "nilgenus/zlinalg.hpp"

namespace nilgenus {

/// Rows are relators, columns generators.
inline IntMatrix exponent_matrix(const Presentation& p) {
  IntMatrix m(p.relator_count(), p.generator_count());
  for (std::size_t r = 0; r < p.relator_count(); ++r) {
    auto s = exponent_sums(p.relators()[r]);
    for (std::size_t g = 0; g < s.size(); ++g) m(r, g) = static_cast<long>(s[g]);
  }
  return m;
}

/// H_1 = G/[G,G].
inline AbelianInvariants abelianization(const Presentation& p) { return cokernel(exponent_matrix(p)); }

/// Element of the integral group ring of the free group: word -> coefficient.
using GroupRingElement = std::map<Word, long long>;

inline long long augmentation(const GroupRingElement& e) {
  long long s = 0;
  for (const auto& [w, c] : e) s += c;
  return s;
}

/// d r / d x_g, by d(uv) = du + u dv, dx = 1, d(x^-1) = -x^-1.
inline GroupRingElement fox_derivative(const Word& r, std::size_t g) {
  GroupRingElement out;
  auto l = r.letters();
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (generator_of(l[i]) != g) continue;
    bool positive = sign_of(l[i]) > 0;
    Word prefix = Word::reduce(l.subspan(0, positive ? i : i + 1), r.alphabet_size());
    long long& c = out[prefix];
    c += positive ? 1 : -1;
    if (c == 0) out.erase(prefix);
  }
  return out;
}

/// Rows are relators, columns generators.
using FoxMatrix = std::vector<std::vector<GroupRingElement>>;

inline FoxMatrix fox_derivatives(const Presentation& p) {
  FoxMatrix m;
  for (const auto& r : p.relators()) {
    m.emplace_back();
    for (std::size_t g = 0; g < p.generator_count(); ++g) m.back().push_back(fox_derivative(r, g));
  }
  return m;
}

struct HomologyDims {
  std::size_t h0 = 0, h1 = 0, h2 = 0;
  friend bool operator==(const HomologyDims&, const HomologyDims&) = default;
};

/// Homology of the presentation complex with trivial F_p coefficients. The
/// boundary C_2 -> C_1 is the augmented Fox matrix, i.e. the exponent matrix;
/// C_1 -> C_0 vanishes. This is group homology when the complex is aspherical.
inline HomologyDims complex_homology_mod_p(const Presentation& p, std::uint64_t prime) {
  if (!is_prime(prime)) throw InvalidArgument("complex_homology_mod_p: " + std::to_string(prime) + " is not prime");
  std::size_t r2 = rank_mod_p(exponent_matrix(p), prime);
  return {1, p.generator_count() - r2, p.relator_count() - r2};
}

/// The same for the finite cover with deck action given by the closed
/// coset table t: cells are (coset, generator) and (coset, relator).
inline HomologyDims complex_homology_mod_p(const Presentation& p, const CosetTable& t, std::uint64_t prime) {
  if (!is_prime(prime)) throw InvalidArgument("complex_homology_mod_p: " + std::to_string(prime) + " is not prime");
  if (auto defect = table_defect(p, t)) throw InvalidArgument("complex_homology_mod_p: " + *defect);
  const std::size_t n = t.degree(), g = p.generator_count(), r = p.relator_count();
  IntMatrix d1(n * g, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < g; ++k) {
      auto e = static_cast<std::size_t>(t.get(c, 2 * k));
      d1(c * g + k, e) += 1;
      d1(c * g + k, c) -= 1;
    }
  IntMatrix d2(n * r, n * g);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t x = c;
      for (Letter l : p.relators()[j].letters()) {
        std::size_t k = generator_of(l);
        if (sign_of(l) > 0) {
          d2(c * r + j, x * g + k) += 1;
          x = static_cast<std::size_t>(t.get(x, 2 * k));
        } else {
          x = static_cast<std::size_t>(t.get(x, 2 * k + 1));
          d2(c * r + j, x * g + k) -= 1;
        }
      }
    }
  std::size_t rk1 = rank_mod_p(d1, prime), rk2 = rank_mod_p(d2, prime);
  return {n - rk1, n * g - rk1 - rk2, n * r - rk2};
}

}  // namespace nilgenus
