#pragma once

// Todd-Coxeter coset enumeration, HLT strategy: relators are traced from each
// live coset in turn, filling gaps with new cosets; coincidences are
// processed with a union-find queue. When the coset cap is reached a
// lookahead pass scans every coset without defining new ones. For an
// infinite-index subgroup enumeration does not terminate and ends in the cap.

#include <algorithm>
#include <numeric>

#include "nilgenus/coset_table.hpp"

namespace nilgenus {

namespace detail {

class HltEnumerator {
 public:
  HltEnumerator(const Presentation& p, std::vector<Word> subgroup, std::size_t max_cosets)
      : p_(p), subgroup_(std::move(subgroup)), cols_(2 * p.generator_count()), max_(max_cosets) {
    for (const auto& r : p_.relators()) relators_.push_back(to_columns(r));
    for (const auto& w : subgroup_) {
      if (w.alphabet_size() != p.generator_count()) throw AlphabetError("subgroup generator over the wrong alphabet");
      subgroup_cols_.push_back(to_columns(w));
    }
    new_coset();
  }

  CosetTable run() {
    for (const auto& w : subgroup_cols_) scan_with_retry(0, w);
    for (std::size_t a = 0; a < parent_.size(); ++a) {
      if (!alive(a)) continue;
      for (const auto& r : relators_) {
        if (!alive(a)) break;
        scan_with_retry(a, r);
      }
      for (std::size_t col = 0; col < cols_ && alive(a); ++col) {
        if (entry(a, col) == CosetTable::undefined) {
          if (live_ >= max_) lookahead();
          if (!alive(a)) break;
          if (entry(a, col) == CosetTable::undefined) define(a, col);
        }
      }
    }
    return compact();
  }

 private:
  static std::vector<std::size_t> to_columns(const Word& w) {
    std::vector<std::size_t> out;
    for (Letter l : w.letters()) out.push_back(CosetTable::column(l));
    return out;
  }

  bool alive(std::size_t a) const { return parent_[a] == a; }
  std::int32_t& entry(std::size_t a, std::size_t col) { return table_[a * cols_ + col]; }

  std::size_t new_coset() {
    std::size_t a = parent_.size();
    parent_.push_back(a);
    table_.resize(table_.size() + cols_, CosetTable::undefined);
    ++live_;
    return a;
  }

  void define(std::size_t a, std::size_t col) {
    if (live_ >= max_) throw CapExceeded("coset enumeration exceeded " + std::to_string(max_) + " cosets");
    std::size_t b = new_coset();
    entry(a, col) = static_cast<std::int32_t>(b);
    entry(b, CosetTable::inverse_column(col)) = static_cast<std::int32_t>(a);
  }

  struct NeedSpace {};

  void scan_with_retry(std::size_t a, const std::vector<std::size_t>& w) {
    for (;;) {
      try {
        scan(a, w, true);
        return;
      } catch (const NeedSpace&) {
        lookahead();
        if (!alive(a)) return;
        if (live_ >= max_) throw CapExceeded("coset enumeration exceeded " + std::to_string(max_) + " cosets");
      }
    }
  }

  // Traces w from coset a forwards and backwards; with fill, gaps are closed
  // by defining cosets, otherwise a single gap yields a deduction.
  void scan(std::size_t a, const std::vector<std::size_t>& w, bool fill) {
    if (w.empty()) return;
    std::size_t f = a, b = a;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
    for (;;) {
      while (i <= j && entry(f, w[static_cast<std::size_t>(i)]) != CosetTable::undefined) {
        f = static_cast<std::size_t>(entry(f, w[static_cast<std::size_t>(i)]));
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && entry(b, CosetTable::inverse_column(w[static_cast<std::size_t>(j)])) != CosetTable::undefined) {
        b = static_cast<std::size_t>(entry(b, CosetTable::inverse_column(w[static_cast<std::size_t>(j)])));
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        std::size_t col = w[static_cast<std::size_t>(i)];
        entry(f, col) = static_cast<std::int32_t>(b);
        entry(b, CosetTable::inverse_column(col)) = static_cast<std::int32_t>(f);
        return;
      }
      if (!fill) return;
      if (live_ >= max_) throw NeedSpace{};
      define(f, w[static_cast<std::size_t>(i)]);
    }
  }

  std::size_t rep(std::size_t k) {
    std::size_t r = k;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[k] != r) {
      std::size_t n = parent_[k];
      parent_[k] = r;
      k = n;
    }
    return r;
  }

  void merge(std::size_t k, std::size_t l, std::vector<std::size_t>& queue) {
    std::size_t a = rep(k), b = rep(l);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    --live_;
    queue.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::size_t g = queue[q];
      for (std::size_t col = 0; col < cols_; ++col) {
        std::int32_t d = entry(g, col);
        if (d == CosetTable::undefined) continue;
        auto dd = static_cast<std::size_t>(d);
        std::size_t icol = CosetTable::inverse_column(col);
        if (entry(dd, icol) == static_cast<std::int32_t>(g)) entry(dd, icol) = CosetTable::undefined;
        std::size_t mu = rep(g), nu = rep(dd);
        if (entry(mu, col) != CosetTable::undefined) {
          merge(nu, static_cast<std::size_t>(entry(mu, col)), queue);
        } else if (entry(nu, icol) != CosetTable::undefined) {
          merge(mu, static_cast<std::size_t>(entry(nu, icol)), queue);
        } else {
          entry(mu, col) = static_cast<std::int32_t>(nu);
          entry(nu, icol) = static_cast<std::int32_t>(mu);
        }
      }
    }
  }

  void lookahead() {
    for (std::size_t a = 0; a < parent_.size(); ++a)
      for (const auto& r : relators_) {
        if (!alive(a)) break;
        scan(a, r, false);
      }
  }

  CosetTable compact() {
    std::vector<std::int32_t> to_new(parent_.size(), CosetTable::undefined);
    std::size_t n = 0;
    for (std::size_t a = 0; a < parent_.size(); ++a)
      if (alive(a)) to_new[a] = static_cast<std::int32_t>(n++);
    CosetTable t(p_.generator_count(), n);
    for (std::size_t a = 0; a < parent_.size(); ++a) {
      if (!alive(a)) continue;
      for (std::size_t col = 0; col < cols_; ++col) {
        std::int32_t d = entry(a, col);
        if (d == CosetTable::undefined) throw Error("coset enumeration left an undefined entry");
        t.set(static_cast<std::size_t>(to_new[a]), col, to_new[rep(static_cast<std::size_t>(d))]);
      }
    }
    t.subgroup_generators = subgroup_;
    return standardise(t);
  }

  const Presentation& p_;
  std::vector<Word> subgroup_;
  std::size_t cols_;
  std::size_t max_;
  std::vector<std::vector<std::size_t>> relators_;
  std::vector<std::vector<std::size_t>> subgroup_cols_;
  std::vector<std::size_t> parent_;
  std::vector<std::int32_t> table_;
  std::size_t live_ = 0;
};

}  // namespace detail

/// Closed coset table of the subgroup generated by `subgroup`, numbered in
/// standard (first appearance) order.
inline CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup, std::size_t max_cosets = 1000000) {
  if (max_cosets < 1) throw InvalidArgument("todd_coxeter: max_cosets must be at least 1");
  detail::HltEnumerator e(p, subgroup, max_cosets);
  CosetTable t = e.run();
  if (auto defect = table_defect(p, t)) throw Error("coset enumeration produced a bad table: " + *defect);
  return t;
}

}  // namespace nilgenus
