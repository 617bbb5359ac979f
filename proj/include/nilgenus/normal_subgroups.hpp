#pragma once

// Finite-index normal subgroups from permutation data: intersections via
// the diagonal action, kernels of maps onto finite abelian groups, and the
// nilpotency test for finite quotients.

#include <map>

#include "nilgenus/low_index.hpp"
#include "nilgenus/zlinalg.hpp"

namespace nilgenus {

/// Table of the intersection of the subgroups of `tables`: the stabiliser of
/// (0, ..., 0) in the product action. For normal subgroups this is the
/// kernel of the diagonal action.
inline CosetTable intersect_normals(const Presentation& p, const std::vector<CosetTable>& tables,
                                    std::size_t max_degree = 1000000) {
  if (tables.empty()) throw InvalidArgument("intersect_normals: no tables");
  const std::size_t cols = 2 * p.generator_count();
  for (const auto& t : tables)
    if (auto defect = table_defect(p, t)) throw InvalidArgument("intersect_normals: " + *defect);
  using Point = std::vector<std::int32_t>;
  std::map<Point, std::size_t> index;
  std::vector<Point> points{Point(tables.size(), 0)};
  index.emplace(points[0], 0);
  std::vector<std::vector<std::int32_t>> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.emplace_back(cols);
    for (std::size_t col = 0; col < cols; ++col) {
      Point q(tables.size());
      for (std::size_t k = 0; k < tables.size(); ++k) q[k] = tables[k].get(static_cast<std::size_t>(points[i][k]), col);
      auto [it, fresh] = index.emplace(q, points.size());
      if (fresh) {
        if (points.size() >= max_degree)
          throw CapExceeded("intersect_normals: degree exceeds " + std::to_string(max_degree));
        points.push_back(q);
      }
      rows[i][col] = static_cast<std::int32_t>(it->second);
    }
  }
  CosetTable t(p.generator_count(), points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t col = 0; col < cols; ++col) t.set(i, col, rows[i][col]);
  return standardise(t);
}

/// Coset table of the kernel of the map sending generator g to images[g] in
/// Z/moduli[0] + Z/moduli[1] + ... . The table is the regular action of the
/// image; relators must map to zero.
inline CosetTable abelian_kernel_table(const Presentation& p, const std::vector<std::uint64_t>& moduli,
                                       const std::vector<std::vector<std::int64_t>>& images,
                                       std::size_t max_degree = 1000000) {
  const std::size_t g = p.generator_count(), k = moduli.size();
  if (images.size() != g) throw InvalidArgument("abelian_kernel_table: one image per generator required");
  for (auto m : moduli)
    if (m == 0) throw InvalidArgument("abelian_kernel_table: modulus must be positive");
  auto reduce = [&](std::vector<std::int64_t> v) {
    for (std::size_t i = 0; i < k; ++i) {
      auto m = static_cast<std::int64_t>(moduli[i]);
      v[i] = ((v[i] % m) + m) % m;
    }
    return v;
  };
  std::vector<std::vector<std::int64_t>> im;
  for (const auto& v : images) {
    if (v.size() != k) throw InvalidArgument("abelian_kernel_table: image has wrong length");
    im.push_back(reduce(v));
  }
  for (std::size_t r = 0; r < p.relator_count(); ++r) {
    auto sums = exponent_sums(p.relators()[r]);
    std::vector<std::int64_t> v(k, 0);
    for (std::size_t j = 0; j < g; ++j)
      for (std::size_t i = 0; i < k; ++i) v[i] += sums[j] * im[j][i] % static_cast<std::int64_t>(moduli[i]);
    v = reduce(v);
    for (auto x : v)
      if (x != 0) throw NotAHomomorphism(r, "relator " + std::to_string(r + 1) + " does not map to zero in the abelian quotient");
  }
  using Point = std::vector<std::int64_t>;
  std::map<Point, std::size_t> index;
  std::vector<Point> points{Point(k, 0)};
  index.emplace(points[0], 0);
  std::vector<std::vector<std::int32_t>> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.emplace_back(2 * g);
    for (std::size_t col = 0; col < 2 * g; ++col) {
      Point q = points[i];
      for (std::size_t j = 0; j < k; ++j) q[j] += (col % 2 ? -1 : 1) * im[col / 2][j];
      q = reduce(q);
      auto [it, fresh] = index.emplace(q, points.size());
      if (fresh) {
        if (points.size() >= max_degree) throw CapExceeded("abelian_kernel_table: index exceeds " + std::to_string(max_degree));
        points.push_back(q);
      }
      rows[i][col] = static_cast<std::int32_t>(it->second);
    }
  }
  CosetTable t(g, points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t col = 0; col < 2 * g; ++col) t.set(i, col, rows[i][col]);
  return standardise(t);
}

/// Whether G/N is nilpotent for the normal subgroup N of table t: for every
/// prime p, the elements of p-power order must number exactly the p-part of
/// |G/N| (equivalently every Sylow subgroup is normal).
inline bool finite_quotient_is_nilpotent(const CosetTable& t) {
  if (!is_normal(t)) throw InvalidArgument("finite_quotient_is_nilpotent: subgroup not normal");
  const std::size_t n = t.degree();
  // Regular action: the element taking coset 0 to coset c acts by the
  // transversal word u_c.
  std::vector<Word> u = schreier_transversal(t);
  std::vector<std::size_t> order(n, 1);
  for (std::size_t c = 1; c < n; ++c) {
    std::size_t x = c, k = 1;
    while (x != 0) {
      x = *t.trace(x, u[c]);
      ++k;
    }
    order[c] = k;
  }
  std::size_t rest = n;
  for (std::size_t p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    std::size_t pp = 1;
    while (rest % p == 0) {
      rest /= p;
      pp *= p;
    }
    std::size_t count = 0;
    for (std::size_t o : order) {
      std::size_t m = o;
      while (m % p == 0) m /= p;
      count += m == 1;
    }
    if (count != pp) return false;
  }
  return true;
}

/// M(d): the intersection of the normal subgroups of index <= d with
/// nilpotent quotient.
inline CosetTable nilpotent_normal_intersection(const Presentation& p, std::size_t d, unsigned jobs = 1,
                                                std::size_t max_degree = 1000000) {
  LowIndexOptions opt;
  opt.max_index = d;
  opt.normal_only = true;
  opt.jobs = jobs;
  std::vector<CosetTable> keep;
  for (auto& r : low_index(p, opt))
    if (finite_quotient_is_nilpotent(r.table)) keep.push_back(std::move(r.table));
  return intersect_normals(p, keep, max_degree);
}

}  // namespace nilgenus
