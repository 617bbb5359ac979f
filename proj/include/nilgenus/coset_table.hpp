#pragma once

// Coset tables: the action of a finitely presented group on the cosets of a
// subgroup. Column 2g holds the action of generator g, column 2g+1 that of
// its inverse. Cosets are numbered from 0; coset 0 is the subgroup itself.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilgenus/words.hpp"

namespace nilgenus {

class CosetTable {
 public:
  static constexpr std::int32_t undefined = -1;

  CosetTable() = default;
  CosetTable(std::size_t generators, std::size_t degree)
      : gens_(generators), degree_(degree), data_(degree * 2 * generators, undefined) {}

  static std::size_t column(Letter l) {
    return 2 * generator_of(l) + (sign_of(l) < 0 ? 1 : 0);
  }
  static std::size_t inverse_column(std::size_t col) { return col ^ 1u; }

  std::size_t generator_count() const noexcept { return gens_; }
  std::size_t columns() const noexcept { return 2 * gens_; }
  std::size_t degree() const noexcept { return degree_; }
  /// Index of the subgroup once the table is closed.
  std::size_t index() const noexcept { return degree_; }

  std::int32_t get(std::size_t coset, std::size_t col) const { return data_[coset * 2 * gens_ + col]; }
  void set(std::size_t coset, std::size_t col, std::int32_t v) { data_[coset * 2 * gens_ + col] = v; }
  std::int32_t act(std::size_t coset, Letter l) const { return get(coset, column(l)); }

  /// Coset reached from `coset` by reading w, if every step is defined.
  std::optional<std::size_t> trace(std::size_t coset, const Word& w) const {
    std::size_t c = coset;
    for (Letter l : w.letters()) {
      std::int32_t n = act(c, l);
      if (n == undefined) return std::nullopt;
      c = static_cast<std::size_t>(n);
    }
    return c;
  }

  bool complete() const {
    for (auto v : data_)
      if (v == undefined) return false;
    return true;
  }

  /// Image of each coset under generator g.
  std::vector<std::size_t> permutation(std::size_t g) const {
    std::vector<std::size_t> p(degree_);
    for (std::size_t c = 0; c < degree_; ++c) p[c] = static_cast<std::size_t>(get(c, 2 * g));
    return p;
  }

  const std::vector<std::int32_t>& raw() const noexcept { return data_; }
  std::vector<Word> subgroup_generators;

  /// Row-major comparison of the tables; the canonical order of records.
  friend bool operator<(const CosetTable& a, const CosetTable& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.data_ < b.data_;
  }
  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.gens_ == b.gens_ && a.degree_ == b.degree_ && a.data_ == b.data_;
  }

 private:
  std::size_t gens_ = 0;
  std::size_t degree_ = 0;
  std::vector<std::int32_t> data_;
};

/// Renumbers a complete table by order of first appearance, scanning cosets
/// in their new order and columns left to right, starting from `base`. The
/// result describes the stabiliser of `base`.
inline CosetTable standardise(const CosetTable& t, std::size_t base = 0) {
  const std::size_t n = t.degree();
  std::vector<std::int32_t> to_new(n, CosetTable::undefined);
  std::vector<std::size_t> to_old;
  to_new[base] = 0;
  to_old.push_back(base);
  for (std::size_t i = 0; i < to_old.size(); ++i)
    for (std::size_t col = 0; col < t.columns(); ++col) {
      std::int32_t d = t.get(to_old[i], col);
      if (d == CosetTable::undefined) throw InvalidArgument("standardise: table not complete");
      if (to_new[static_cast<std::size_t>(d)] == CosetTable::undefined) {
        to_new[static_cast<std::size_t>(d)] = static_cast<std::int32_t>(to_old.size());
        to_old.push_back(static_cast<std::size_t>(d));
      }
    }
  if (to_old.size() != n) throw InvalidArgument("standardise: action not transitive");
  CosetTable out(t.generator_count(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t col = 0; col < t.columns(); ++col)
      out.set(i, col, to_new[static_cast<std::size_t>(t.get(to_old[i], col))]);
  out.subgroup_generators = t.subgroup_generators;
  return out;
}

/// Empty when the table is a closed, transitive coset table of p whose
/// subgroup generators fix coset 0; otherwise the first defect found.
inline std::optional<std::string> table_defect(const Presentation& p, const CosetTable& t) {
  const std::size_t n = t.degree();
  if (t.generator_count() != p.generator_count()) return "generator count differs from the presentation";
  if (n == 0) return "table has no cosets";
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t col = 0; col < t.columns(); ++col) {
      std::int32_t d = t.get(c, col);
      if (d == CosetTable::undefined) return "entry undefined at coset " + std::to_string(c);
      if (d < 0 || static_cast<std::size_t>(d) >= n) return "entry out of range at coset " + std::to_string(c);
      if (t.get(static_cast<std::size_t>(d), CosetTable::inverse_column(col)) != static_cast<std::int32_t>(c))
        return "inverse columns disagree at coset " + std::to_string(c);
    }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t col = 0; col < t.columns(); ++col) {
      auto d = static_cast<std::size_t>(t.get(queue[i], col));
      if (!seen[d]) {
        seen[d] = true;
        queue.push_back(d);
      }
    }
  if (queue.size() != n) return "action not transitive";
  for (std::size_t r = 0; r < p.relator_count(); ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (t.trace(c, p.relators()[r]) != c)
        return "relator " + std::to_string(r + 1) + " moves coset " + std::to_string(c);
  for (const auto& w : t.subgroup_generators)
    if (t.trace(0, w) != 0u) return "subgroup generator moves coset 0";
  return std::nullopt;
}

/// Words u_c with 0·u_c = c, from a breadth-first spanning tree over the
/// columns in order.
inline std::vector<Word> schreier_transversal(const CosetTable& t) {
  std::vector<std::optional<Word>> rep(t.degree());
  rep[0] = Word(t.generator_count());
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t col = 0; col < t.columns(); ++col) {
      auto d = static_cast<std::size_t>(t.get(queue[i], col));
      if (rep[d]) continue;
      rep[d] = multiply(*rep[queue[i]], Word::generator(col / 2, t.generator_count(), col % 2 ? -1 : 1));
      queue.push_back(d);
    }
  std::vector<Word> out;
  for (auto& r : rep) out.push_back(r ? *r : Word(t.generator_count()));
  return out;
}

/// Whether the stabiliser of coset 0 is normal: every base point yields
/// the same standard table.
inline bool is_normal(const CosetTable& t) {
  CosetTable s = standardise(t);
  for (std::size_t a = 1; a < t.degree(); ++a)
    if (!(standardise(t, a) == s)) return false;
  return true;
}

/// Whether the subgroup of `fine` lies in that of `coarse`: cosets of the
/// smaller subgroup map onto cosets of the larger one compatibly.
inline bool refines(const CosetTable& fine, const CosetTable& coarse) {
  if (fine.generator_count() != coarse.generator_count()) return false;
  std::vector<std::int32_t> phi(fine.degree(), CosetTable::undefined);
  phi[0] = 0;
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t c = queue[i];
    for (std::size_t col = 0; col < fine.columns(); ++col) {
      auto d = static_cast<std::size_t>(fine.get(c, col));
      std::int32_t image = coarse.get(static_cast<std::size_t>(phi[c]), col);
      if (phi[d] == CosetTable::undefined) {
        phi[d] = image;
        queue.push_back(d);
      } else if (phi[d] != image) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace nilgenus
