#pragma once

// Nilpotent quotients G/G_{c+1} (G_1 = G, G_{k+1} = [G_k, G]) as consistent
// weighted pc presentations, built one central layer at a time.
//
// Every pc generator has a definition that is kept exact in later classes:
// the image of a source generator (weight 1), a commutator [g_j, g_i], or
// g_i^{m_i} times the inverse of the rest of its power relation. By induction
// a generator of weight k then lies in G_k, so the generators of weight >= k
// span exactly G_k. Layer k+1 is found by giving every other relation a free
// central tail, forcing consistency and the source relators, and reducing the
// resulting tail lattice to Hermite normal form.

#include <chrono>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nilgenus/pc_presentation.hpp"
#include "nilgenus/words.hpp"
#include "nilgenus/zlinalg.hpp"

namespace nilgenus {

struct NqLimits {
  std::size_t max_hirsch = 200;
  double max_seconds_per_class = 60.0;
};

struct PcDefinition {
  enum class Kind { Image, Commutator, Power };
  Kind kind;
  /// Image: source generator. Commutator: j of [g_j, g_i]. Power: i.
  std::size_t a;
  /// Commutator: i. Unused otherwise.
  std::size_t b = 0;
};

class PcQuotient {
 public:
  explicit PcQuotient(Presentation source) : source_(std::move(source)) {
    epi_.assign(source_.generator_count(), PcWord{});
    pc_.finalise();
  }

  const Presentation& source() const noexcept { return source_; }
  /// The c in G/G_{c+1}.
  int class_bound() const noexcept { return class_; }
  const PcPresentation& pc() const noexcept { return pc_; }
  std::size_t size() const noexcept { return pc_.size(); }
  std::size_t hirsch_length() const {
    std::size_t h = 0;
    for (std::size_t i = 0; i < pc_.size(); ++i) h += pc_.relative_order(i) == 0;
    return h;
  }
  const PcDefinition& definition(std::size_t i) const { return defs_[i]; }
  /// Image of source generator k in normal form.
  const PcWord& epi(std::size_t k) const { return epi_[k]; }
  /// Set when some layer came out trivial, so G_k = G_{k+1} for k >= this.
  std::optional<int> stable_from() const noexcept { return stable_from_; }

  /// Generators of weight k: [first, last).
  std::pair<std::size_t, std::size_t> layer(int k) const {
    std::size_t a = 0;
    while (a < size() && pc_.weight(a) < k) ++a;
    std::size_t b = a;
    while (b < size() && pc_.weight(b) == k) ++b;
    return {a, b};
  }

  /// Normal form of the image of w.
  ExpVec collect(const Word& w) const {
    if (w.alphabet_size() != source_.generator_count()) throw AlphabetError("word not over the quotient's source");
    ExpVec u = pc_.identity();
    for (Letter l : w.letters()) pc_.multiply_word(u, epi_[generator_of(l)], sign_of(l));
    return u;
  }

 private:
  friend class NqBuilder;
  friend PcQuotient truncate(const PcQuotient& q, int c);

  Presentation source_;
  int class_ = 0;
  PcPresentation pc_;
  std::vector<PcDefinition> defs_;
  std::vector<PcWord> epi_;
  std::optional<int> stable_from_;
};

/// Grows a PcQuotient by one class.
class NqBuilder {
 public:
  NqBuilder(PcQuotient& q, const NqLimits& limits) : q_(q), limits_(limits) {}

  void extend() {
    start_ = std::chrono::steady_clock::now();
    const int W = q_.class_ + 1;
    if (q_.stable_from_) {
      q_.class_ = W;
      return;
    }
    const PcPresentation& old = q_.pc_;
    n_ = old.size();
    enumerate_tails(W);
    build_extended(W);
    LatticeBasis lattice(tails_.size());
    consistency(W, lattice);
    relators(lattice);
    rebuild(W, lattice);
  }

 private:
  struct Tail {
    PcDefinition::Kind kind;
    std::size_t a, b;
  };

  void tick() const {
    auto el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (el > limits_.max_seconds_per_class) {
      throw CapExceeded("nilpotent quotient: time cap of " + std::to_string(limits_.max_seconds_per_class) +
                        " s exceeded at class " + std::to_string(q_.class_ + 1));
    }
  }

  void enumerate_tails(int W) {
    const PcPresentation& old = q_.pc_;
    tails_.clear();
    std::vector<bool> image_def(q_.source_.generator_count(), false), power_def(n_, false);
    std::vector<std::vector<bool>> comm_def(n_, std::vector<bool>(n_, false));
    for (const auto& d : q_.defs_) {
      switch (d.kind) {
        case PcDefinition::Kind::Image: image_def[d.a] = true; break;
        case PcDefinition::Kind::Power: power_def[d.a] = true; break;
        case PcDefinition::Kind::Commutator: comm_def[d.a][d.b] = true; break;
      }
    }
    for (std::size_t k = 0; k < image_def.size(); ++k)
      if (!image_def[k]) tails_.push_back({PcDefinition::Kind::Image, k, 0});
    for (std::size_t i = 0; i < n_; ++i)
      if (old.relative_order(i) != 0 && !power_def[i]) tails_.push_back({PcDefinition::Kind::Power, i, 0});
    // Tails of [g_j, g_i] with w_i = 1, w_j = W-1 go last: the Hermite
    // reduction keeps late columns, and these make the preferred definitions.
    std::vector<Tail> preferred;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        if (comm_def[j][i] || old.weight(i) + old.weight(j) > W) continue;
        Tail t{PcDefinition::Kind::Commutator, j, i};
        if (old.weight(i) == 1 && old.weight(j) == W - 1)
          preferred.push_back(t);
        else
          tails_.push_back(t);
      }
    tails_.insert(tails_.end(), preferred.begin(), preferred.end());
  }

  void build_extended(int W) {
    const PcPresentation& old = q_.pc_;
    ext_ = PcPresentation();
    for (std::size_t i = 0; i < n_; ++i) ext_.add_generator(old.weight(i), old.relative_order(i));
    for (std::size_t t = 0; t < tails_.size(); ++t) ext_.add_generator(W, 0);
    for (std::size_t i = 0; i < n_; ++i) ext_.set_power(i, old.power(i));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < j; ++i) ext_.set_commutator(j, i, old.commutator(j, i));
    ext_epi_ = q_.epi_;
    for (std::size_t t = 0; t < tails_.size(); ++t) {
      PcTerm term{static_cast<std::uint32_t>(n_ + t), 1};
      const Tail& tl = tails_[t];
      switch (tl.kind) {
        case PcDefinition::Kind::Image: ext_epi_[tl.a].push_back(term); break;
        case PcDefinition::Kind::Power: {
          PcWord w = old.power(tl.a);
          w.push_back(term);
          ext_.set_power(tl.a, std::move(w));
          break;
        }
        case PcDefinition::Kind::Commutator: {
          PcWord w = old.commutator(tl.a, tl.b);
          w.push_back(term);
          ext_.set_commutator(tl.a, tl.b, std::move(w));
          break;
        }
      }
    }
    ext_.finalise();
  }

  ExpVec unit(std::size_t g, Exponent e) const {
    ExpVec u = ext_.identity();
    ext_.multiply_generator(u, g, e);
    return u;
  }
  ExpVec gens(std::initializer_list<std::pair<std::size_t, Exponent>> seq) const {
    ExpVec u = ext_.identity();
    for (auto [g, e] : seq) ext_.multiply_generator(u, g, e);
    return u;
  }
  ExpVec times(ExpVec u, const ExpVec& v) const {
    ext_.multiply(u, v);
    return u;
  }

  /// Records lhs = rhs; the two may differ only in tail coordinates.
  void equate(const ExpVec& lhs, const ExpVec& rhs, LatticeBasis& lattice, const char* what) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (lhs[i] != rhs[i]) throw Error(std::string("nilpotent quotient: inconsistent lower layers (") + what + ")");
    }
    SparseRow row;
    for (std::size_t t = 0; t < tails_.size(); ++t) {
      Exponent d = lhs[n_ + t] - rhs[n_ + t];
      if (d != 0) row.emplace_back(t, Integer(static_cast<long>(d)));
    }
    if (!row.empty()) lattice.add(std::move(row));
  }

  void consistency(int W, LatticeBasis& lattice) {
    const PcPresentation& p = ext_;
    auto signs = [&](std::size_t g) {
      return p.relative_order(g) == 0 ? std::vector<Exponent>{1, -1} : std::vector<Exponent>{1};
    };
    for (std::size_t k = 0; k < n_; ++k)
      for (std::size_t j = 0; j < k; ++j) {
        if (p.weight(j) + p.weight(k) + 1 > W) continue;
        for (std::size_t i = 0; i < j; ++i) {
          if (p.weight(i) + p.weight(j) + p.weight(k) > W) continue;
          tick();
          for (Exponent sk : signs(k))
            for (Exponent sj : signs(j))
              for (Exponent si : signs(i)) {
                ExpVec lhs = gens({{k, sk}, {j, sj}, {i, si}});
                ExpVec rhs = times(unit(k, sk), gens({{j, sj}, {i, si}}));
                equate(lhs, rhs, lattice, "associativity");
              }
        }
      }
    for (std::size_t j = 0; j < n_; ++j) {
      tick();
      const Exponent mj = p.relative_order(j);
      if (mj != 0) {
        ExpVec pw = ext_.identity();
        ext_.multiply_word(pw, p.power(j));
        // g_j^{m_j} g_j = g_j g_j^{m_j}
        equate(times(pw, unit(j, 1)), times(unit(j, 1), pw), lattice, "power");
        for (std::size_t i = 0; i < j; ++i)
          equate(times(pw, unit(i, 1)), times(unit(j, mj - 1), gens({{j, 1}, {i, 1}})), lattice, "power");
      }
      for (std::size_t i = 0; i < j; ++i) {
        const Exponent mi = p.relative_order(i);
        if (mi != 0) {
          ExpVec pw = ext_.identity();
          ext_.multiply_word(pw, p.power(i));
          equate(gens({{j, 1}, {i, mi - 1}, {i, 1}}), times(unit(j, 1), pw), lattice, "power");
        } else {
          equate(gens({{j, 1}, {i, -1}, {i, 1}}), unit(j, 1), lattice, "inverse");
          if (mj == 0) equate(gens({{j, -1}, {i, -1}, {i, 1}}), unit(j, -1), lattice, "inverse");
        }
        if (mj == 0) equate(times(unit(j, -1), gens({{j, 1}, {i, 1}})), unit(i, 1), lattice, "inverse");
      }
    }
  }

  void relators(LatticeBasis& lattice) {
    ExpVec zero = ext_.identity();
    for (const auto& r : q_.source_.relators()) {
      tick();
      ExpVec u = ext_.identity();
      for (Letter l : r.letters()) ext_.multiply_word(u, ext_epi_[generator_of(l)], sign_of(l));
      equate(u, zero, lattice, "relator");
    }
  }

  static Exponent to_exponent(const Integer& x) {
    if (!mpz_fits_slong_p(x.get_mpz_t())) throw CapExceeded("nilpotent quotient: exponent overflow");
    return x.get_si();
  }

  void rebuild(int W, const LatticeBasis& lattice) {
    const std::size_t T = tails_.size();
    auto rows = lattice.reduced();
    // Classify tail columns.
    std::vector<long> kept_index(T, -1);
    std::vector<Exponent> kept_order;
    std::vector<std::size_t> kept_column;
    for (std::size_t t = 0; t < T; ++t) {
      auto it = rows.find(t);
      if (it != rows.end() && it->second.front().second == 1) continue;
      kept_index[t] = static_cast<long>(kept_column.size());
      kept_column.push_back(t);
      kept_order.push_back(it == rows.end() ? 0 : to_exponent(it->second.front().second));
    }
    const std::size_t K = kept_column.size();
    std::size_t hirsch = q_.hirsch_length();
    for (Exponent m : kept_order) hirsch += m == 0;
    if (hirsch > limits_.max_hirsch) {
      throw CapExceeded("nilpotent quotient: Hirsch length " + std::to_string(hirsch) + " exceeds cap " +
                        std::to_string(limits_.max_hirsch) + " at class " + std::to_string(W));
    }

    // Power relations of the new torsion generators, normalised from the last.
    std::vector<ExpVec> powers(K, ExpVec(K, 0));
    auto normalise = [&](ExpVec& v) {
      for (std::size_t k = 0; k < K; ++k) {
        Exponent m = kept_order[k];
        if (m == 0 || (v[k] >= 0 && v[k] < m)) continue;
        Exponent r = ((v[k] % m) + m) % m;
        Exponent qt = (v[k] - r) / m;
        v[k] = r;
        for (std::size_t l = k + 1; l < K; ++l) v[l] += qt * powers[k][l];
      }
    };
    for (std::size_t k = K; k-- > 0;) {
      if (kept_order[k] == 0) continue;
      const SparseRow& row = rows.at(kept_column[k]);
      ExpVec v(K, 0);
      for (std::size_t e = 1; e < row.size(); ++e) v[static_cast<std::size_t>(kept_index[row[e].first])] -= to_exponent(row[e].second);
      normalise(v);
      powers[k] = std::move(v);
    }
    auto tail_value = [&](std::size_t t) {
      ExpVec v(K, 0);
      if (kept_index[t] >= 0) {
        v[static_cast<std::size_t>(kept_index[t])] = 1;
        return v;
      }
      const SparseRow& row = rows.at(t);
      for (std::size_t e = 1; e < row.size(); ++e) v[static_cast<std::size_t>(kept_index[row[e].first])] -= to_exponent(row[e].second);
      normalise(v);
      return v;
    };
    auto append = [&](PcWord w, const ExpVec& v) {
      for (std::size_t k = 0; k < K; ++k)
        if (v[k] != 0) w.push_back({static_cast<std::uint32_t>(n_ + k), v[k]});
      return w;
    };

    const PcPresentation& old = q_.pc_;
    PcPresentation next;
    for (std::size_t i = 0; i < n_; ++i) next.add_generator(old.weight(i), old.relative_order(i));
    for (std::size_t k = 0; k < K; ++k) next.add_generator(W, kept_order[k]);
    for (std::size_t i = 0; i < n_; ++i) next.set_power(i, old.power(i));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < j; ++i) next.set_commutator(j, i, old.commutator(j, i));
    std::vector<PcWord> epi = q_.epi_;
    for (std::size_t t = 0; t < T; ++t) {
      const Tail& tl = tails_[t];
      ExpVec v = tail_value(t);
      switch (tl.kind) {
        case PcDefinition::Kind::Image: epi[tl.a] = append(epi[tl.a], v); break;
        case PcDefinition::Kind::Power: next.set_power(tl.a, append(old.power(tl.a), v)); break;
        case PcDefinition::Kind::Commutator:
          next.set_commutator(tl.a, tl.b, append(old.commutator(tl.a, tl.b), v));
          break;
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (kept_order[k] != 0) next.set_power(n_ + k, append({}, powers[k]));
      const Tail& tl = tails_[kept_column[k]];
      q_.defs_.push_back({tl.kind, tl.a, tl.b});
    }
    next.finalise();
    q_.pc_ = std::move(next);
    q_.epi_ = std::move(epi);
    q_.class_ = W;
    if (K == 0) q_.stable_from_ = W;
  }

  PcQuotient& q_;
  NqLimits limits_;
  std::chrono::steady_clock::time_point start_;
  std::size_t n_ = 0;
  std::vector<Tail> tails_;
  PcPresentation ext_;
  std::vector<PcWord> ext_epi_;
};

/// G/G_{c+1} for the group presented by p.
inline PcQuotient nilpotent_quotient(const Presentation& p, int c, const NqLimits& limits = {}) {
  if (c < 1) throw InvalidArgument("nilpotent quotient needs class >= 1");
  PcQuotient q(p);
  NqBuilder b(q, limits);
  for (int k = 1; k <= c; ++k) b.extend();
  return q;
}

/// The class-c quotient of q (c <= q.class_bound()): drops generators of
/// weight > c, which span G_{c+1}.
inline PcQuotient truncate(const PcQuotient& q, int c) {
  if (c < 0 || c > q.class_bound()) throw InvalidArgument("truncation class out of range");
  std::size_t n = 0;
  while (n < q.size() && q.pc().weight(n) <= c) ++n;
  auto cut = [n](const PcWord& w) {
    PcWord out;
    for (const auto& t : w)
      if (t.gen < n) out.push_back(t);
    return out;
  };
  PcQuotient out(q.source());
  for (std::size_t i = 0; i < n; ++i) out.pc_.add_generator(q.pc().weight(i), q.pc().relative_order(i));
  for (std::size_t i = 0; i < n; ++i) out.pc_.set_power(i, cut(q.pc().power(i)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) out.pc_.set_commutator(j, i, cut(q.pc().commutator(j, i)));
  out.pc_.finalise();
  out.defs_.assign(q.defs_.begin(), q.defs_.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t k = 0; k < q.source().generator_count(); ++k) out.epi_[k] = cut(q.epi(k));
  out.class_ = c;
  if (q.stable_from() && *q.stable_from() <= c) out.stable_from_ = q.stable_from();
  return out;
}

/// Abelian invariants of G_i/G_{i+1} for i = 1..class_bound.
inline std::vector<AbelianInvariants> lcs_invariants(const PcQuotient& q) {
  std::vector<AbelianInvariants> out;
  for (int k = 1; k <= q.class_bound(); ++k) {
    auto [a, b] = q.layer(k);
    IntMatrix rel(0, b - a);
    for (std::size_t i = a; i < b; ++i) {
      Exponent m = q.pc().relative_order(i);
      if (m == 0) continue;
      std::vector<Integer> row(b - a);
      row[i - a] = static_cast<long>(m);
      for (const auto& t : q.pc().power(i))
        if (t.gen < b) row[t.gen - a] -= static_cast<long>(t.exp);
      rel.append_row(row);
    }
    if (rel.rows() == 0) {
      out.push_back({b - a, {}});
    } else {
      out.push_back(cokernel(rel));
    }
  }
  return out;
}

enum class Verdict { Iso, NotSurjective, InvariantMismatch };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Iso: return "iso";
    case Verdict::NotSurjective: return "not-surjective";
    case Verdict::InvariantMismatch: return "invariant-mismatch";
  }
  return "?";
}

struct InducedMapReport {
  int nilpotency_class = 0;
  bool surjective = false;
  /// Entry i-1 compares G_i/G_{i+1} of source and target.
  std::vector<bool> factor_match;
  std::vector<AbelianInvariants> source_factors;
  std::vector<AbelianInvariants> target_factors;
  Verdict verdict = Verdict::NotSurjective;
};

namespace detail {

/// Whether the vectors together with the relation rows span Z^dim.
inline bool spans_lattice(std::size_t dim, const std::vector<SparseRow>& vecs) {
  LatticeBasis b(dim);
  for (const auto& v : vecs) b.add(v);
  if (b.rank() != dim) return false;
  for (const auto& [col, row] : b.reduced())
    if (row.front().second != 1) return false;
  return true;
}

inline SparseRow project(const ExpVec& v, std::size_t a, std::size_t b) {
  SparseRow r;
  for (std::size_t i = a; i < b; ++i)
    if (v[i] != 0) r.emplace_back(i - a, Integer(static_cast<long>(v[i])));
  return r;
}

/// Relations of layer [a, b) as rows: m_i e_i - (power relation within the layer).
inline std::vector<SparseRow> layer_relations(const PcPresentation& pc, std::size_t a, std::size_t b) {
  std::vector<SparseRow> rows;
  for (std::size_t i = a; i < b; ++i) {
    Exponent m = pc.relative_order(i);
    if (m == 0) continue;
    ExpVec v(pc.size(), 0);
    v[i] = m;
    for (const auto& t : pc.power(i)) v[t.gen] -= t.exp;
    rows.push_back(project(v, a, b));
  }
  return rows;
}

}  // namespace detail

/// Compares the map G/G_{c+1} -> H/H_{c+1} induced by h, given both
/// quotients at class c. Nilpotent groups: a surjection whose lower central
/// factors have equal invariants is an isomorphism (induction on class, using
/// that a surjection between isomorphic finitely generated abelian groups is
/// injective).
inline InducedMapReport induced_map_report(const GroupHom& h, const PcQuotient& qs, const PcQuotient& qt, int c) {
  if (!h.certified_at(c)) throw InvalidArgument("induced map: homomorphism not certified to class " + std::to_string(c));
  if (qs.class_bound() != c || qt.class_bound() != c) throw InvalidArgument("induced map: quotients not at class " + std::to_string(c));
  if (!(qs.source() == h.source) || !(qt.source() == h.target)) throw InvalidArgument("induced map: quotients do not match the hom");
  InducedMapReport rep;
  rep.nilpotency_class = c;
  const PcPresentation& pc = qt.pc();
  std::vector<ExpVec> images;
  for (const auto& w : h.images) images.push_back(qt.collect(w));

  // Layer 1 from the images; layer k from commutators of layer k-1 with them.
  rep.surjective = true;
  for (int k = 1; k <= c && rep.surjective; ++k) {
    auto [a, b] = qt.layer(k);
    if (a == b) continue;
    std::vector<SparseRow> vecs = detail::layer_relations(pc, a, b);
    if (k == 1) {
      for (const auto& v : images) vecs.push_back(detail::project(v, a, b));
    } else {
      auto [pa, pb] = qt.layer(k - 1);
      for (std::size_t g = pa; g < pb; ++g) {
        ExpVec x = pc.identity();
        x[g] = 1;
        for (const auto& y : images) vecs.push_back(detail::project(pc.commutator_of(x, y), a, b));
      }
    }
    rep.surjective = detail::spans_lattice(b - a, vecs);
  }
  rep.source_factors = lcs_invariants(qs);
  rep.target_factors = lcs_invariants(qt);
  bool all = true;
  for (int k = 0; k < c; ++k) {
    bool m = rep.source_factors[k] == rep.target_factors[k];
    rep.factor_match.push_back(m);
    all = all && m;
  }
  rep.verdict = !rep.surjective ? Verdict::NotSurjective : all ? Verdict::Iso : Verdict::InvariantMismatch;
  return rep;
}

}  // namespace nilgenus
