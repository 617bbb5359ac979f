#pragma once

// Free-group utilities on top of words.hpp: Tietze elimination of
// generators and subgroup membership by Stallings folding.

#include <map>
#include <numeric>
#include <set>

#include "nilgenus/words.hpp"

namespace nilgenus {

struct TietzeResult {
  Presentation presentation;
  /// Image of each original generator as a word in the simplified presentation.
  std::vector<Word> images;
};

/// Repeatedly removes a generator that occurs exactly once in some relator,
/// drops relators that become trivial and duplicate relators. The group is
/// unchanged; images records the isomorphism.
inline TietzeResult tietze_simplify(const Presentation& p, std::size_t max_total_length = 20000) {
  std::size_t n = p.generator_count();
  std::vector<bool> alive(n, true);
  // Work over the original alphabet; eliminated generators never reappear.
  std::vector<Word> rels;
  for (const auto& r : p.relators()) rels.push_back(cyclically_reduce(r));
  std::vector<Word> value;  // current expression of each original generator
  for (std::size_t k = 0; k < n; ++k) value.push_back(p.gen(k));

  for (;;) {
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> best;  // (len, rel, gen)
    for (std::size_t ri = 0; ri < rels.size(); ++ri) {
      std::vector<int> count(n, 0);
      for (Letter l : rels[ri].letters()) ++count[generator_of(l)];
      for (std::size_t g = 0; g < n; ++g) {
        if (count[g] == 1 && (!best || rels[ri].length() < std::get<0>(*best))) {
          best = std::make_tuple(rels[ri].length(), ri, g);
        }
      }
    }
    if (!best) break;
    auto [len, ri, g] = *best;
    // Rotate so the generator is first: r = g^e u, hence g = u^-e.
    auto l = rels[ri].letters();
    std::size_t at = 0;
    while (generator_of(l[at]) != g) ++at;
    std::vector<Letter> rot(l.begin() + static_cast<std::ptrdiff_t>(at), l.end());
    rot.insert(rot.end(), l.begin(), l.begin() + static_cast<std::ptrdiff_t>(at));
    int e = sign_of(rot[0]);
    Word u = Word::reduce(std::span<const Letter>(rot).subspan(1), n);
    Word replacement = e > 0 ? invert(u) : u;
    std::vector<Word> subst;
    for (std::size_t k = 0; k < n; ++k) subst.push_back(k == g ? replacement : p.gen(k));
    rels.erase(rels.begin() + static_cast<std::ptrdiff_t>(ri));
    std::size_t total = 0;
    for (auto& r : rels) {
      r = cyclically_reduce(substitute(r, subst, n));
      total += r.length();
    }
    for (auto& v : value) v = substitute(v, subst, n);
    alive[g] = false;
    std::erase_if(rels, [](const Word& w) { return w.empty(); });
    if (total > max_total_length) break;
  }

  std::vector<std::size_t> new_index(n, 0);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) {
    if (alive[k]) {
      new_index[k] = names.size();
      names.push_back(p.name(k));
    }
  }
  auto reindex = [&](const Word& w) {
    std::vector<Letter> out;
    for (Letter l : w.letters()) out.push_back(make_letter(new_index[generator_of(l)], sign_of(l)));
    return Word::reduce(out, names.size());
  };
  std::vector<Word> new_rels;
  std::set<Word> seen;
  for (const auto& r : rels) {
    Word w = reindex(r);
    if (!w.empty() && seen.insert(w).second) new_rels.push_back(w);
  }
  TietzeResult out{Presentation(names, new_rels), {}};
  for (const auto& v : value) out.images.push_back(reindex(v));
  return out;
}

/// Source presentation with each assignment "gen=word" imposed as a relator,
/// Tietze simplified. Returns the quotient map.
inline GroupHom quotient_by_assignments(const Presentation& source, std::string_view spec) {
  GroupHom assign = parse_hom_spec(spec, source, source);
  std::vector<Word> rels = source.relators();
  for (std::size_t k = 0; k < source.generator_count(); ++k) {
    Word r = multiply(source.gen(k), invert(assign.images[k]));
    if (!r.empty()) rels.push_back(r);
  }
  Presentation q(source.generator_names(), rels);
  TietzeResult t = tietze_simplify(q);
  return GroupHom(source, t.presentation, t.images);
}

/// Folded Stallings graph of the subgroup of the free group F(rank)
/// generated by some words.
class StallingsGraph {
 public:
  StallingsGraph(std::size_t rank, std::span<const Word> generators) : rank_(rank) {
    add_vertex();
    for (const auto& w : generators) {
      if (w.alphabet_size() != rank) throw AlphabetError("subgroup generator over the wrong alphabet");
      if (w.empty()) continue;
      std::size_t v = 0;
      for (std::size_t i = 0; i < w.length(); ++i) {
        std::size_t next = i + 1 == w.length() ? 0 : add_vertex();
        add_edge(v, w[i], next);
        v = next;
      }
    }
    fold();
  }

  /// Whether w lies in the subgroup.
  bool contains(const Word& w) const {
    std::size_t v = 0;
    for (Letter l : w.letters()) {
      auto it = edges_[v].find(l);
      if (it == edges_[v].end()) return false;
      v = find(it->second);
    }
    return v == 0;
  }

  bool is_whole_group() const {
    for (std::size_t g = 0; g < rank_; ++g) {
      if (!contains(Word::generator(g, rank_))) return false;
    }
    return true;
  }

 private:
  std::size_t add_vertex() {
    edges_.emplace_back();
    parent_.push_back(parent_.size());
    return edges_.size() - 1;
  }
  void add_edge(std::size_t a, Letter l, std::size_t b) {
    edges_[a].emplace(l, b);
    edges_[b].emplace(-l, a);
  }
  std::size_t find(std::size_t v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }
  void fold() {
    // Merge vertices reached from one vertex by two edges with the same
    // label until the graph is deterministic.
    for (std::size_t v = 0; v < edges_.size(); ++v) normalise(v);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t v = 0; v < edges_.size(); ++v) {
        if (parent_[v] != v) continue;
        std::map<Letter, std::size_t> seen;
        for (auto& [l, target] : edges_[v]) {
          std::size_t t = find(target);
          auto [it, fresh] = seen.emplace(l, t);
          if (!fresh && it->second != t) {
            merge(it->second, t);
            changed = true;
          }
        }
        if (changed) break;
      }
    }
  }
  void merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    for (auto& e : edges_[b]) edges_[a].insert(e);
    edges_[b].clear();
    for (auto& m : edges_) {
      for (auto& [l, t] : m) t = find(t);
    }
    for (std::size_t v = 0; v < edges_.size(); ++v) normalise(v);
  }
  void normalise(std::size_t v) {
    std::multimap<Letter, std::size_t> fixed;
    for (auto& [l, t] : edges_[v]) fixed.emplace(l, find(t));
    edges_[v].clear();
    for (auto& [l, t] : fixed) {
      bool dup = false;
      auto range = edges_[v].equal_range(l);
      for (auto it = range.first; it != range.second; ++it) dup = dup || it->second == t;
      if (!dup) edges_[v].emplace(l, t);
    }
  }

  std::size_t rank_;
  std::vector<std::multimap<Letter, std::size_t>> edges_;
  std::vector<std::size_t> parent_;
};

}  // namespace nilgenus
