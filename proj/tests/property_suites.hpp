#pragma once

// Randomised property suites. Each returns the number of cases run and the
// first failure, so both the unit tests and the acceptance binary can use them.

#include <functional>
#include <random>
#include <string>

#include "nilgenus/nilgenus.hpp"
#include "oracles.hpp"

namespace props {

using namespace nilgenus;

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void check(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (ok) return;
    if (failures++ == 0) first_failure = what();
  }
};

inline std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t alphabet, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, alphabet - 1);
  std::bernoulli_distribution inv(0.5);
  std::vector<Letter> out(len(rng));
  for (auto& l : out) l = make_letter(gen(rng), inv(rng) ? -1 : 1);
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t alphabet, std::size_t max_len) {
  return Word::reduce(random_letters(rng, alphabet, max_len), alphabet);
}

inline std::string show(const Word& w) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < w.alphabet_size(); ++k) names.push_back("x" + std::to_string(k + 1));
  return format_word(w, names);
}

/// free_reduce is idempotent, length-nonincreasing, yields reduced words and
/// keeps exponent sums.
inline Outcome free_reduction(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t i = 0; i < n; ++i) {
    auto raw = random_letters(rng, 4, 64);
    Word w = free_reduce(raw, 4);
    Word again = free_reduce(w.letters(), 4);
    bool reduced = true;
    for (std::size_t k = 1; k < w.length(); ++k) reduced = reduced && w[k] != -w[k - 1];
    std::vector<long long> sums(4, 0);
    for (Letter l : raw) sums[generator_of(l)] += sign_of(l);
    o.check(again == w && w.length() <= raw.size() && reduced && exponent_sums(w) == sums,
            [&] { return "free reduction of a word of length " + std::to_string(raw.size()) + " gave " + show(w); });
  }
  return o;
}

/// collect(uv) = collect(u) collect(v) and collect(u^-1) = collect(u)^-1 in
/// several nilpotent quotients, with and without torsion.
inline Outcome collection_homomorphism(std::size_t n, std::uint64_t seed = 2) {
  std::vector<PcQuotient> qs;
  qs.push_back(nilpotent_quotient(parse_presentation("gens: a b\n"), 5));
  qs.push_back(nilpotent_quotient(parse_presentation("gens: a b c\n"), 3));
  qs.push_back(nilpotent_quotient(parse_presentation("gens: a b\nrel: a^4\nrel: b^4\n"), 4));
  qs.push_back(nilpotent_quotient(parse_presentation("gens: a b\nrel: a^3\nrel: b^9\n"), 3));
  qs.push_back(nilpotent_quotient(parse_presentation("gens: a b\nrel: a^2\nrel: b^-1 a b a^-1 b^-1 a b^2 a^-1\n"), 4));
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t i = 0; i < n; ++i) {
    const PcQuotient& q = qs[i % qs.size()];
    const std::size_t g = q.source().generator_count();
    Word u = random_word(rng, g, 20), v = random_word(rng, g, 20);
    ExpVec cu = q.collect(u), cv = q.collect(v);
    bool ok = q.collect(multiply(u, v)) == q.pc().product(cu, cv) && q.collect(invert(u)) == q.pc().inverse(cu) &&
              q.collect(commutator(u, v)) == q.pc().commutator_of(cu, cv);
    o.check(ok, [&] { return "collection is not multiplicative on u = " + show(u) + ", v = " + show(v); });
  }
  return o;
}

/// SNF(U M V) = SNF(M) for random unimodular U, V; small cases also agree
/// with determinantal divisors.
inline Outcome snf_unimodular(std::size_t n, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 5), entry(-9, 9), mult(-3, 3);
  Outcome o;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = static_cast<std::size_t>(dim(rng)), c = static_cast<std::size_t>(dim(rng));
    IntMatrix m(r, c);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < c; ++b) m(a, b) = entry(rng) * (rng() % 3 == 0 ? 0 : 1);
    auto unimodular = [&](std::size_t k) {
      IntMatrix u = IntMatrix::identity(k);
      for (int step = 0; step < 12 && k > 1; ++step) {
        std::size_t x = rng() % k, y = rng() % k;
        if (x == y) continue;
        int f = mult(rng);
        for (std::size_t t = 0; t < k; ++t) u(x, t) += f * u(y, t);
      }
      if (rng() % 2) {
        for (std::size_t t = 0; t < k; ++t) u(0, t) = -u(0, t);
      }
      return u;
    };
    IntMatrix twisted = unimodular(r) * m * unimodular(c);
    SnfResult a = smith_normal_form(m), b = smith_normal_form(twisted);
    bool chain = true;
    for (std::size_t k = 1; k < a.diagonal.size(); ++k)
      if (sgn(a.diagonal[k]) != 0) chain = chain && a.diagonal[k] % a.diagonal[k - 1] == 0;
    std::vector<Integer> nonzero;
    for (const auto& d : a.diagonal)
      if (sgn(d) != 0) nonzero.push_back(d);
    bool oracle_ok = r * c > 16 || nonzero == oracle::invariant_factors(m);
    o.check(a.diagonal == b.diagonal && a.rank_free == b.rank_free && chain && oracle_ok,
            [&] { return "SNF mismatch on a " + std::to_string(r) + "x" + std::to_string(c) + " matrix"; });
  }
  return o;
}

/// Coset tables from enumeration close: every relator and every subgroup
/// generator traces correctly, the table passes re-verification, and the
/// index divides the group order.
inline Outcome coset_table_closure(std::size_t n, std::uint64_t seed = 4) {
  std::mt19937_64 rng(seed);
  const char* bases[] = {"gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b a b a b\n",
                         "gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b a b\n",
                         "gens: a b\nrel: a^4\nrel: b^2\nrel: a b a b\n",
                         "gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b a b\n",
                         "gens: a b\nrel: a^8\nrel: a^4 b^-2\nrel: b^-1 a b a\n"};
  std::vector<Presentation> groups;
  std::vector<std::size_t> orders;
  for (const char* s : bases) {
    groups.push_back(parse_presentation(s));
    orders.push_back(todd_coxeter(groups.back(), {}).index());
  }
  Outcome o;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t which = i % groups.size();
    Presentation p = groups[which];
    std::vector<Word> rels = p.relators();
    if (rng() % 2) {
      Word extra = random_word(rng, 2, 8);
      if (!extra.empty()) rels.push_back(extra);
    }
    Presentation q(p.generator_names(), rels);
    std::size_t order = todd_coxeter(q, {}).index();
    std::vector<Word> sub;
    for (std::size_t k = rng() % 3; k > 0; --k) sub.push_back(random_word(rng, 2, 6));
    CosetTable t = todd_coxeter(q, sub);
    bool ok = t.complete() && !table_defect(q, t) && order % t.index() == 0 && orders[which] % order == 0 &&
              standardise(t) == t;
    for (const auto& w : sub) ok = ok && t.trace(0, w) == std::size_t{0};
    for (std::size_t c = 0; c < t.degree() && ok; ++c)
      for (const auto& r : q.relators()) ok = ok && t.trace(c, r) == c;
    o.check(ok, [&] { return "coset table failed closure for group " + std::to_string(which) + " case " + std::to_string(i); });
  }
  return o;
}

/// low_index output is identical for 1, 2 and 8 workers.
inline Outcome jobs_determinism(std::size_t n, std::uint64_t seed = 5) {
  std::mt19937_64 rng(seed);
  Outcome o;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Word> rels;
    for (std::size_t k = 1 + rng() % 2; k > 0; --k) {
      Word w = random_word(rng, 2, 8);
      if (!w.empty()) rels.push_back(w);
    }
    Presentation p({"a", "b"}, rels);
    LowIndexOptions opt;
    opt.max_index = 3 + i % 2;
    opt.normal_only = i % 3 == 0;
    std::vector<std::vector<CosetTable>> runs;
    for (unsigned jobs : {1u, 2u, 8u}) {
      opt.jobs = jobs;
      std::vector<CosetTable> tables;
      for (auto& r : low_index(p, opt)) tables.push_back(std::move(r.table));
      runs.push_back(std::move(tables));
    }
    o.check(runs[0] == runs[1] && runs[0] == runs[2], [&] { return "worker count changed low_index output, case " + std::to_string(i); });
  }
  return o;
}

}  // namespace props
