#pragma once

// Exact integer matrix algebra: Smith normal form over Z, echelon (Hermite)
// bases of integer lattices and rank over prime fields.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "nilgenus/errors.hpp"

namespace nilgenus {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& row : init) {
      if (row.size() != cols_) throw InvalidArgument("ragged matrix literal");
      for (long v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<Integer>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw InvalidArgument("row length mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw InvalidArgument("matrix product shape mismatch");
    IntMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        if (sgn((*this)(i, k)) == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += (*this)(i, k) * o(k, j);
      }
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct SnfResult {
  /// min(rows, cols) entries d1 | d2 | ..., zeros last.
  std::vector<Integer> diagonal;
  /// Free rank of the cokernel Z^cols / rowspace: cols minus nonzero d_i.
  std::size_t rank_free = 0;

  std::size_t rank() const {
    return static_cast<std::size_t>(
        std::count_if(diagonal.begin(), diagonal.end(), [](const Integer& d) { return sgn(d) != 0; }));
  }
  /// Torsion coefficients of the cokernel (the d_i > 1).
  std::vector<Integer> torsion() const {
    std::vector<Integer> t;
    for (const auto& d : diagonal)
      if (d > 1) t.push_back(d);
    return t;
  }
};

namespace detail {

inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

class SnfWorker {
 public:
  SnfWorker(IntMatrix m, bool track_columns)
      : a_(std::move(m)), track_(track_columns), q_(track_columns ? IntMatrix::identity(a_.cols()) : IntMatrix()) {}

  void run() {
    std::size_t r = a_.rows(), c = a_.cols();
    for (std::size_t t = 0; t < std::min(r, c); ++t) {
      if (!place_min_pivot(t)) break;
      for (;;) {
        bool dirty = false;
        for (std::size_t i = t + 1; i < r; ++i) {
          if (sgn(a_(i, t)) == 0) continue;
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), a_(i, t).get_mpz_t(), a_(t, t).get_mpz_t());
          add_row_multiple(i, t, -q);
          if (sgn(a_(i, t)) != 0) dirty = true;
        }
        for (std::size_t j = t + 1; j < c; ++j) {
          if (sgn(a_(t, j)) == 0) continue;
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), a_(t, j).get_mpz_t(), a_(t, t).get_mpz_t());
          add_col_multiple(j, t, -q);
          if (sgn(a_(t, j)) != 0) dirty = true;
        }
        if (dirty) {
          place_min_pivot_in_cross(t);
          continue;
        }
        // Pivot isolated; it must divide the rest of the block.
        std::optional<std::size_t> bad_row;
        for (std::size_t i = t + 1; i < r && !bad_row; ++i)
          for (std::size_t j = t + 1; j < c; ++j)
            if (!mpz_divisible_p(a_(i, j).get_mpz_t(), a_(t, t).get_mpz_t())) {
              bad_row = i;
              break;
            }
        if (!bad_row) break;
        add_row_multiple(t, *bad_row, 1);
      }
      if (sgn(a_(t, t)) < 0) negate_row(t);
    }
  }

  IntMatrix& matrix() { return a_; }
  IntMatrix& column_transform() { return q_; }

 private:
  // Moves the nonzero entry of least absolute value in the block [t.., t..]
  // to (t, t). Returns false when the block is zero.
  bool place_min_pivot(std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < a_.rows(); ++i)
      for (std::size_t j = t; j < a_.cols(); ++j) {
        if (sgn(a_(i, j)) == 0) continue;
        if (!best || cmpabs(a_(i, j), a_(best->first, best->second)) < 0) best = {{i, j}};
      }
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }
  void place_min_pivot_in_cross(std::size_t t) {
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < a_.rows(); ++i)
      if (sgn(a_(i, t)) != 0 && cmpabs(a_(i, t), a_(bi, bj)) < 0) bi = i, bj = t;
    for (std::size_t j = t; j < a_.cols(); ++j)
      if (sgn(a_(t, j)) != 0 && cmpabs(a_(t, j), a_(bi, bj)) < 0) bi = t, bj = j;
    swap_rows(t, bi);
    swap_cols(t, bj);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < a_.cols(); ++j) swap(a_(a, j), a_(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < a_.rows(); ++i) swap(a_(i, a), a_(i, b));
    if (track_)
      for (std::size_t i = 0; i < q_.rows(); ++i) swap(q_(i, a), q_(i, b));
  }
  void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    for (std::size_t j = 0; j < a_.cols(); ++j)
      if (sgn(a_(src, j)) != 0) a_(dst, j) += k * a_(src, j);
  }
  void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k) {
    for (std::size_t i = 0; i < a_.rows(); ++i)
      if (sgn(a_(i, src)) != 0) a_(i, dst) += k * a_(i, src);
    if (track_)
      for (std::size_t i = 0; i < q_.rows(); ++i)
        if (sgn(q_(i, src)) != 0) q_(i, dst) += k * q_(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < a_.cols(); ++j) a_(r, j) = -a_(r, j);
  }

  IntMatrix a_;
  bool track_;
  IntMatrix q_;
};

inline SnfResult read_diagonal(const IntMatrix& d) {
  SnfResult out;
  std::size_t k = std::min(d.rows(), d.cols());
  for (std::size_t i = 0; i < k; ++i) out.diagonal.push_back(d(i, i));
  out.rank_free = d.cols() - out.rank();
  return out;
}

}  // namespace detail

/// Smith normal form. Pivots are chosen of least absolute value to contain
/// coefficient growth.
inline SnfResult smith_normal_form(const IntMatrix& m) {
  detail::SnfWorker w(m, false);
  w.run();
  return detail::read_diagonal(w.matrix());
}

/// SNF together with a unimodular Q such that rowspace(m)·Q = rowspace(D).
/// Row j of Q gives the coordinates of basis vector e_j in the cyclic
/// decomposition of Z^cols / rowspace(m).
inline std::pair<SnfResult, IntMatrix> smith_normal_form_with_transform(const IntMatrix& m) {
  detail::SnfWorker w(m, true);
  w.run();
  return {detail::read_diagonal(w.matrix()), std::move(w.column_transform())};
}

/// Z^free_rank + Z/t_1 + ... with t_1 | t_2 | ..., every t_i > 1.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Invariants of Z^m.cols() modulo the row space of m.
inline AbelianInvariants cokernel(const IntMatrix& m) {
  SnfResult s = smith_normal_form(m);
  return {s.rank_free, s.torsion()};
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Rank over the field with p elements.
inline std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p) {
  if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
  std::size_t r = m.rows(), c = m.cols();
  std::vector<std::uint64_t> a(r * c);
  Integer pz(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Integer v;
      mpz_fdiv_r(v.get_mpz_t(), m(i, j).get_mpz_t(), pz.get_mpz_t());
      a[i * c + j] = v.get_ui();
    }
  auto mulmod = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % p);
  };
  auto inverse = [&](std::uint64_t x) {
    std::uint64_t result = 1, e = p - 2;
    while (e) {
      if (e & 1) result = mulmod(result, x);
      x = mulmod(x, x);
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < c && rank < r; ++col) {
    std::size_t piv = rank;
    while (piv < r && a[piv * c + col] == 0) ++piv;
    if (piv == r) continue;
    for (std::size_t j = 0; j < c; ++j) std::swap(a[piv * c + j], a[rank * c + j]);
    std::uint64_t inv = inverse(a[rank * c + col]);
    for (std::size_t j = col; j < c; ++j) a[rank * c + j] = mulmod(a[rank * c + j], inv);
    for (std::size_t i = 0; i < r; ++i) {
      if (i == rank || a[i * c + col] == 0) continue;
      std::uint64_t f = a[i * c + col];
      for (std::size_t j = col; j < c; ++j) a[i * c + j] = (a[i * c + j] + p - mulmod(f, a[rank * c + j])) % p;
    }
    ++rank;
  }
  return rank;
}

/// Sparse integer vector: sorted (column, nonzero value) pairs.
using SparseRow = std::vector<std::pair<std::size_t, Integer>>;

/// Echelon basis of a sublattice of Z^n, built one generator at a time.
/// reduced() yields the Hermite normal form: positive pivots, entries above
/// each pivot reduced into [0, pivot).
class LatticeBasis {
 public:
  explicit LatticeBasis(std::size_t dimension) : dim_(dimension) {}

  std::size_t dimension() const noexcept { return dim_; }

  void add(SparseRow v) {
    while (!v.empty()) {
      std::size_t col = v.front().first;
      auto it = rows_.find(col);
      if (it == rows_.end()) {
        if (v.front().second < 0) negate(v);
        install(col, std::move(v));
        return;
      }
      SparseRow& b = it->second;
      const Integer& pb = b.front().second;
      const Integer& pv = v.front().second;
      if (mpz_divisible_p(pv.get_mpz_t(), pb.get_mpz_t())) {
        Integer q = pv / pb;
        v = combine(v, 1, b, -q);
        continue;
      }
      // Replace the basis row by the gcd combination; keep reducing the rest.
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), pb.get_mpz_t(), pv.get_mpz_t());
      Integer bb = pb / g, vv = pv / g;
      SparseRow new_b = combine(b, s, v, t);
      SparseRow rest = combine(v, bb, b, -vv);
      if (new_b.front().second < 0) negate(new_b);
      install(col, std::move(new_b));
      v = std::move(rest);
    }
  }

  /// Rows in HNF keyed by pivot column.
  std::map<std::size_t, SparseRow> reduced() const {
    auto out = rows_;
    for (auto it = out.begin(); it != out.end(); ++it) {
      const SparseRow& prow = it->second;
      const Integer& p = prow.front().second;
      for (auto jt = out.begin(); jt != it; ++jt) {
        Integer q = floor_div(entry(jt->second, it->first), p);
        if (sgn(q) != 0) jt->second = combine(jt->second, 1, prow, -q);
      }
    }
    return out;
  }

  std::size_t rank() const noexcept { return rows_.size(); }

  static Integer entry(const SparseRow& r, std::size_t col) {
    auto it = std::lower_bound(r.begin(), r.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
    return it != r.end() && it->first == col ? it->second : Integer(0);
  }

  static SparseRow combine(const SparseRow& a, const Integer& ka, const SparseRow& b, const Integer& kb) {
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        Integer v = ka * a[i].second;
        if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
        ++i;
      } else if (i == a.size() || b[j].first < a[i].first) {
        Integer v = kb * b[j].second;
        if (sgn(v) != 0) out.emplace_back(b[j].first, std::move(v));
        ++j;
      } else {
        Integer v = ka * a[i].second + kb * b[j].second;
        if (sgn(v) != 0) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

 private:
  // Stores v as the row with pivot col after reducing it by the other rows,
  // then reduces the earlier rows at col.
  void install(std::size_t col, SparseRow v) {
    for (std::size_t e = 1; e < v.size();) {
      auto jt = rows_.find(v[e].first);
      if (jt == rows_.end() || jt->first == col) {
        ++e;
        continue;
      }
      Integer q = floor_div(v[e].second, jt->second.front().second);
      if (sgn(q) == 0) {
        ++e;
        continue;
      }
      std::size_t at = v[e].first;
      v = combine(v, 1, jt->second, -q);
      e = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), at, [](const auto& x, std::size_t c) { return x.first < c; }) - v.begin());
      if (e < v.size() && v[e].first == at) ++e;
    }
    const Integer& p = v.front().second;
    for (auto& [c, row] : rows_) {
      if (c >= col) break;
      Integer x = entry(row, col);
      if (sgn(x) == 0) continue;
      Integer q = floor_div(x, p);
      if (sgn(q) != 0) row = combine(row, 1, v, -q);
    }
    rows_[col] = std::move(v);
  }
  static Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static void negate(SparseRow& v) {
    for (auto& e : v) e.second = -e.second;
  }

  std::size_t dim_;
  std::map<std::size_t, SparseRow> rows_;
};

}  // namespace nilgenus
