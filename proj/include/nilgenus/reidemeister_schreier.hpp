#pragma once

// Reidemeister-Schreier rewriting: a presentation of the subgroup described
// by a closed coset table, on one Schreier generator per edge outside a
// breadth-first spanning tree.

#include <set>

#include "nilgenus/coset_table.hpp"

namespace nilgenus {

struct SchreierData {
  /// For coset c and generator g, the Schreier generator of the edge
  /// c -> c·g, or -1 on tree edges.
  std::vector<std::vector<long>> edge_generator;
  std::size_t generator_count = 0;
};

inline SchreierData schreier_generators(const CosetTable& t) {
  const std::size_t n = t.degree(), g = t.generator_count();
  std::vector<std::vector<bool>> tree(n, std::vector<bool>(g, false));
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t col = 0; col < t.columns(); ++col) {
      auto d = static_cast<std::size_t>(t.get(queue[i], col));
      if (seen[d]) continue;
      seen[d] = true;
      queue.push_back(d);
      if (col % 2 == 0)
        tree[queue[i]][col / 2] = true;
      else
        tree[d][col / 2] = true;
    }
  SchreierData out;
  out.edge_generator.assign(n, std::vector<long>(g, -1));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < g; ++k)
      if (!tree[c][k]) out.edge_generator[c][k] = static_cast<long>(out.generator_count++);
  return out;
}

/// Rewrites w, read from coset c, as a word in the Schreier generators.
/// Returns the end coset too.
inline std::pair<Word, std::size_t> schreier_rewrite(const CosetTable& t, const SchreierData& s, const Word& w,
                                                     std::size_t c) {
  std::vector<Letter> out;
  for (Letter l : w.letters()) {
    std::size_t k = generator_of(l);
    if (sign_of(l) > 0) {
      if (long e = s.edge_generator[c][k]; e >= 0) out.push_back(make_letter(static_cast<std::size_t>(e), 1));
      c = static_cast<std::size_t>(t.get(c, 2 * k));
    } else {
      std::size_t from = static_cast<std::size_t>(t.get(c, 2 * k + 1));
      if (long e = s.edge_generator[from][k]; e >= 0) out.push_back(make_letter(static_cast<std::size_t>(e), -1));
      c = from;
    }
  }
  return {Word::reduce(out, s.generator_count), c};
}

/// Presentation of the subgroup with coset table t. Generator `x_c` is the
/// Schreier generator u_c x u_{c·x}^-1 for a non-tree edge; relators are the
/// rewritten conjugates of the relators of p, cyclically reduced, without
/// empty or repeated ones.
inline Presentation reidemeister_schreier(const Presentation& p, const CosetTable& t) {
  if (auto defect = table_defect(p, t)) throw InvalidArgument("reidemeister_schreier: " + *defect);
  SchreierData s = schreier_generators(t);
  std::vector<std::string> names(s.generator_count);
  for (std::size_t c = 0; c < t.degree(); ++c)
    for (std::size_t k = 0; k < p.generator_count(); ++k)
      if (long e = s.edge_generator[c][k]; e >= 0) names[static_cast<std::size_t>(e)] = p.name(k) + "_" + std::to_string(c);
  std::vector<Word> rels;
  std::set<Word> seen;
  for (const auto& r : p.relators())
    for (std::size_t c = 0; c < t.degree(); ++c) {
      auto [w, end] = schreier_rewrite(t, s, r, c);
      if (end != c) throw Error("reidemeister_schreier: relator does not close at coset " + std::to_string(c));
      Word red = cyclically_reduce(w);
      if (!red.empty() && seen.insert(red).second) rels.push_back(red);
    }
  return Presentation(names, rels);
}

}  // namespace nilgenus
