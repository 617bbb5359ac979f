#pragma once

// Towers of finite-index normal subgroups and the ratios b_1(N)/[G:N] along
// them. Only the finite sequence is reported; no limit is claimed.

#include "nilgenus/homcalc.hpp"
#include "nilgenus/normal_subgroups.hpp"
#include "nilgenus/reidemeister_schreier.hpp"

namespace nilgenus {

enum class TowerStrategy { PCongruence, MOfD, Explicit };

struct Tower {
  TowerStrategy strategy = TowerStrategy::Explicit;
  /// Prime of the congruence tower.
  std::uint64_t prime = 0;
  std::vector<CosetTable> steps;
};

struct TowerOptions {
  std::size_t max_index = 256;
  unsigned jobs = 1;
};

namespace detail {

inline void validate_tower(const Presentation& p, const Tower& t) {
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (auto defect = table_defect(p, t.steps[i])) throw InvalidArgument("tower step " + std::to_string(i + 1) + ": " + *defect);
    if (!is_normal(t.steps[i])) throw InvalidArgument("tower step " + std::to_string(i + 1) + " is not normal");
    if (i > 0 && !refines(t.steps[i], t.steps[i - 1]))
      throw InvalidArgument("tower step " + std::to_string(i + 1) + " is not contained in the previous one");
  }
}

}  // namespace detail

/// Kernels of G -> (Z/p^i)^{b_1}, i = 1..depth, through the free part of
/// H_1(G).
inline Tower congruence_tower(const Presentation& p, std::uint64_t prime, std::size_t depth, const TowerOptions& opt = {}) {
  if (!is_prime(prime)) throw InvalidArgument("congruence tower: " + std::to_string(prime) + " is not prime");
  auto [snf, q] = smith_normal_form_with_transform(exponent_matrix(p));
  const std::size_t g = p.generator_count(), rank = snf.rank(), b1 = snf.rank_free;
  Tower t;
  t.strategy = TowerStrategy::PCongruence;
  t.prime = prime;
  std::uint64_t modulus = 1;
  for (std::size_t i = 1; i <= depth; ++i) {
    if (modulus > opt.max_index) throw CapExceeded("congruence tower: index exceeds " + std::to_string(opt.max_index));
    modulus *= prime;
    std::vector<std::vector<std::int64_t>> images(g, std::vector<std::int64_t>(b1));
    for (std::size_t j = 0; j < g; ++j)
      for (std::size_t k = 0; k < b1; ++k) {
        Integer v = q(j, rank + k) % static_cast<unsigned long>(modulus);
        images[j][k] = v.get_si();
      }
    Integer index;
    mpz_ui_pow_ui(index.get_mpz_t(), modulus, b1);
    if (index > static_cast<unsigned long>(opt.max_index))
      throw CapExceeded("congruence tower: index " + index.get_str() + " exceeds " + std::to_string(opt.max_index));
    t.steps.push_back(abelian_kernel_table(p, std::vector<std::uint64_t>(b1, modulus), images, opt.max_index));
  }
  detail::validate_tower(p, t);
  return t;
}

/// Steps M(2), M(3), ..., keeping a step only when its index grows, until
/// depth steps are found.
inline Tower m_of_d_tower(const Presentation& p, std::size_t depth, const TowerOptions& opt = {}) {
  Tower t;
  t.strategy = TowerStrategy::MOfD;
  for (std::size_t d = 2; t.steps.size() < depth; ++d) {
    if (d > opt.max_index) throw CapExceeded("m-of-d tower: no further growth below index " + std::to_string(opt.max_index));
    CosetTable m = nilpotent_normal_intersection(p, d, opt.jobs, opt.max_index);
    if (t.steps.empty() ? m.index() > 1 : m.index() > t.steps.back().index()) t.steps.push_back(std::move(m));
  }
  detail::validate_tower(p, t);
  return t;
}

inline Tower explicit_tower(const Presentation& p, std::vector<CosetTable> steps) {
  Tower t;
  t.strategy = TowerStrategy::Explicit;
  t.steps = std::move(steps);
  detail::validate_tower(p, t);
  return t;
}

struct L2Estimate {
  std::vector<std::size_t> indices;
  std::vector<std::size_t> betti;
  /// b_1(N_m) / [G : N_m], exact.
  std::vector<Rational> ratios;
  bool indices_increasing = true;
  bool ratios_nonincreasing = true;
};

inline L2Estimate luck_estimate(const Presentation& p, const Tower& t) {
  detail::validate_tower(p, t);
  L2Estimate e;
  for (const auto& step : t.steps) {
    Presentation sub = reidemeister_schreier(p, step);
    std::size_t b1 = abelianization(sub).free_rank;
    Rational r(static_cast<unsigned long>(b1), static_cast<unsigned long>(step.index()));
    r.canonicalize();
    if (!e.indices.empty()) {
      e.indices_increasing = e.indices_increasing && step.index() > e.indices.back();
      e.ratios_nonincreasing = e.ratios_nonincreasing && r <= e.ratios.back();
    }
    e.indices.push_back(step.index());
    e.betti.push_back(b1);
    e.ratios.push_back(r);
  }
  return e;
}

}  // namespace nilgenus
