#pragma once

// Weighted nilpotent polycyclic presentations and collection from the left.
//
// Generators g_0 < g_1 < ... carry a weight (their lower-central layer) and a
// relative order (0 for infinite). The relations are
//
//   g_i^{m_i}     = power(i)            for torsion g_i, a word in g_{i+1}..
//   [g_j, g_i]    = commutator(j, i)    for i < j, a word in g_{j+1}..
//
// with [x,y] = x^-1 y^-1 x y, so g_j^{g_i} = g_j [g_j, g_i]. Conjugates by
// inverses of infinite generators are derived when the presentation is
// finalised. Elements are exponent vectors g_0^{e_0} g_1^{e_1} ...

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nilgenus/errors.hpp"

namespace nilgenus {

using Exponent = std::int64_t;
using ExpVec = std::vector<Exponent>;

struct PcTerm {
  std::uint32_t gen;
  Exponent exp;
  friend bool operator==(const PcTerm&, const PcTerm&) = default;
};
/// Normal-form word: strictly increasing generators, nonzero exponents.
using PcWord = std::vector<PcTerm>;

inline PcWord to_pc_word(std::span<const Exponent> v) {
  PcWord w;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) w.push_back({static_cast<std::uint32_t>(i), v[i]});
  return w;
}

class PcPresentation {
 public:
  std::size_t size() const noexcept { return weight_.size(); }
  int weight(std::size_t i) const { return weight_[i]; }
  /// 0 for infinite generators.
  Exponent relative_order(std::size_t i) const { return order_[i]; }
  const PcWord& power(std::size_t i) const { return power_[i]; }
  /// [g_j, g_i] for i < j.
  const PcWord& commutator(std::size_t j, std::size_t i) const { return comm_[tri(j, i)]; }
  bool commutes(std::size_t j, std::size_t i) const { return comm_[tri(j, i)].empty(); }

  /// Appends a generator; its relations default to trivial.
  std::size_t add_generator(int weight, Exponent order = 0) {
    std::size_t n = size();
    weight_.push_back(weight);
    order_.push_back(order);
    power_.emplace_back();
    comm_.resize(tri(n + 1, 0));
    finalised_ = false;
    return n;
  }
  void set_relative_order(std::size_t i, Exponent order) {
    order_[i] = order;
    finalised_ = false;
  }
  void set_power(std::size_t i, PcWord w) {
    power_[i] = std::move(w);
    finalised_ = false;
  }
  void set_commutator(std::size_t j, std::size_t i, PcWord w) {
    comm_[tri(j, i)] = std::move(w);
    finalised_ = false;
  }

  /// Builds conjugates g_j^{g_i}, g_j^{g_i^-1}. Must be called after the
  /// relations change and before collecting.
  void finalise() {
    std::size_t n = size();
    conj_pos_.assign(comm_.size(), {});
    conj_neg_.assign(comm_.size(), {});
    finalised_ = true;  // collection below only touches finished pairs
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        if (commutes(j, i)) continue;
        PcWord w{{static_cast<std::uint32_t>(j), 1}};
        w.insert(w.end(), comm_[tri(j, i)].begin(), comm_[tri(j, i)].end());
        conj_pos_[tri(j, i)] = std::move(w);
      }
    // g_j^{g_i^-1} = g_j (c^{g_i^-1})^-1 where c = [g_j, g_i] lies in g_{j+1}..;
    // pairs are filled for i descending and j descending so every conjugate
    // the collector needs here already exists.
    for (std::size_t ii = n; ii-- > 0;) {
      if (order_[ii] != 0) continue;
      for (std::size_t j = n; j-- > ii + 1;) {
        if (commutes(j, ii)) continue;
        ExpVec y(n, 0);
        for (const auto& t : comm_[tri(j, ii)]) {
          if (commutes(t.gen, ii))
            multiply_generator(y, t.gen, t.exp);
          else
            multiply_word(y, conj_word(t.gen, ii, -1), t.exp);
        }
        ExpVec x(n, 0);
        x[j] = 1;
        multiply_inverse(x, y);
        conj_neg_[tri(j, ii)] = to_pc_word(x);
      }
    }
  }

  bool finalised() const noexcept { return finalised_; }

  ExpVec identity() const { return ExpVec(size(), 0); }

  /// u <- u * g_i^e
  void multiply_generator(ExpVec& u, std::size_t i, Exponent e) const {
    std::vector<Item> stack;
    stack.push_back(Item::generator(i, e));
    run(u, stack);
  }
  /// u <- u * w^k
  void multiply_word(ExpVec& u, const PcWord& w, Exponent k = 1) const {
    if (k == 0 || w.empty()) return;
    std::vector<Item> stack;
    stack.push_back(Item::word(&w, k < 0 ? -k : k, k < 0));
    run(u, stack);
  }
  void multiply(ExpVec& u, std::span<const Exponent> v) const {
    PcWord w = to_pc_word(v);
    multiply_word(u, w);
  }
  /// u <- u * v^-1
  void multiply_inverse(ExpVec& u, std::span<const Exponent> v) const {
    PcWord w = to_pc_word(v);
    multiply_word(u, w, -1);
  }
  ExpVec product(std::span<const Exponent> a, std::span<const Exponent> b) const {
    ExpVec u(a.begin(), a.end());
    multiply(u, b);
    return u;
  }
  ExpVec inverse(std::span<const Exponent> a) const {
    ExpVec u = identity();
    multiply_inverse(u, a);
    return u;
  }
  /// [a, b] = a^-1 b^-1 a b
  ExpVec commutator_of(std::span<const Exponent> a, std::span<const Exponent> b) const {
    ExpVec u = inverse(a);
    multiply_inverse(u, b);
    multiply(u, a);
    multiply(u, b);
    return u;
  }

 private:
  struct Item {
    const PcWord* w;
    std::uint32_t gen;
    Exponent exp;  // generator exponent, or remaining repetitions of *w
    bool inverse;
    static Item generator(std::size_t g, Exponent e) {
      return {nullptr, static_cast<std::uint32_t>(g), e, false};
    }
    static Item word(const PcWord* w, Exponent count, bool inv) { return {w, 0, count, inv}; }
  };

  static std::size_t tri(std::size_t j, std::size_t i) { return j * (j - 1) / 2 + i; }

  const PcWord& conj_word(std::size_t j, std::size_t i, int sign) const {
    return sign > 0 ? conj_pos_[tri(j, i)] : conj_neg_[tri(j, i)];
  }

  static Exponent checked_add(Exponent a, Exponent b) {
    Exponent r;
    if (__builtin_add_overflow(a, b, &r)) throw CapExceeded("exponent overflow during collection");
    return r;
  }

  void run(ExpVec& u, std::vector<Item>& stack) const {
    if (!finalised_) throw Error("collection in a presentation that was not finalised");
    const std::size_t n = size();
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      if (it.w) {
        if (it.exp > 1) stack.push_back(Item::word(it.w, it.exp - 1, it.inverse));
        const PcWord& w = *it.w;
        if (!it.inverse) {
          for (std::size_t k = w.size(); k-- > 0;) stack.push_back(Item::generator(w[k].gen, w[k].exp));
        } else {
          for (const auto& t : w) stack.push_back(Item::generator(t.gen, -t.exp));
        }
        continue;
      }
      const std::size_t i = it.gen;
      Exponent e = it.exp;
      if (e == 0) continue;
      const Exponent m = order_[i];
      if (m != 0 && (e < 0 || e >= m)) {
        // g_i^e = g_i^r (g_i^m)^q, and g_i^m commutes with g_i.
        Exponent r = ((e % m) + m) % m;
        Exponent q = (e - r) / m;
        if (q != 0 && !power_[i].empty()) stack.push_back(Item::word(&power_[i], q < 0 ? -q : q, q < 0));
        if (r != 0) stack.push_back(Item::generator(i, r));
        continue;
      }
      bool suffix_commutes = true;
      bool suffix_empty = true;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (u[j] == 0) continue;
        suffix_empty = false;
        if (!commutes(j, i)) {
          suffix_commutes = false;
          break;
        }
      }
      if (suffix_commutes) {
        if (m == 0) {
          u[i] = checked_add(u[i], e);
          continue;
        }
        Exponent s = u[i] + e;
        if (s < m) {
          u[i] = s;
          continue;
        }
        if (suffix_empty) {
          u[i] = s - m;
          if (!power_[i].empty()) stack.push_back(Item::word(&power_[i], 1, false));
          continue;
        }
      }
      // Move one g_i^{+-1} across the suffix: S g_i^s = g_i^s S^{g_i^s}.
      const int s = e > 0 ? 1 : -1;
      if (e - s != 0) stack.push_back(Item::generator(i, e - s));
      for (std::size_t j = n; j-- > i + 1;) {
        Exponent a = u[j];
        if (a == 0) continue;
        u[j] = 0;
        if (commutes(j, i)) {
          stack.push_back(Item::generator(j, a));
        } else {
          stack.push_back(Item::word(&conj_word(j, i, s), a < 0 ? -a : a, a < 0));
        }
      }
      u[i] = checked_add(u[i], s);
      if (m != 0 && u[i] == m) {
        u[i] = 0;
        if (!power_[i].empty()) stack.push_back(Item::word(&power_[i], 1, false));
      }
    }
  }

  std::vector<int> weight_;
  std::vector<Exponent> order_;
  std::vector<PcWord> power_;
  std::vector<PcWord> comm_;
  std::vector<PcWord> conj_pos_;
  std::vector<PcWord> conj_neg_;
  bool finalised_ = false;
};

}  // namespace nilgenus
