#pragma once

// Low-index subgroups by backtracking over partial coset tables. The first
// undefined entry in row-major order is filled with an existing coset or a
// new one; relator consequences are deduced Felsch-style and undone on
// backtrack. A partial table survives only if no other base point can give
// a smaller standard table, so each conjugacy class of subgroups is reported
// once, by its least standard table.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "nilgenus/coset_table.hpp"

namespace nilgenus {

struct SubgroupRecord {
  CosetTable table;
  bool normal = false;
  std::size_t index = 0;
};

struct LowIndexOptions {
  std::size_t max_index = 1;
  bool normal_only = false;
  unsigned jobs = 1;
  /// Search nodes before giving up with CapExceeded.
  std::uint64_t max_nodes = 200000000;
};

namespace detail {

class LowIndexSearch {
 public:
  struct State {
    std::vector<std::int32_t> t;
    std::size_t count = 1;
  };

  LowIndexSearch(const Presentation& p, const LowIndexOptions& opt)
      : p_(p), opt_(opt), cols_(2 * p.generator_count()), n_(opt.max_index), by_first_(cols_) {
    std::set<std::vector<std::size_t>> seen;
    for (const auto& r : p.relators()) {
      for (const Word& w : {r, invert(r)}) {
        Word c = cyclically_reduce(w);
        auto l = c.letters();
        for (std::size_t s = 0; s < l.size(); ++s) {
          std::vector<std::size_t> cols;
          for (std::size_t k = 0; k < l.size(); ++k) cols.push_back(CosetTable::column(l[(s + k) % l.size()]));
          if (seen.insert(cols).second) by_first_[cols.front()].push_back(cols);
        }
      }
    }
  }

  State root() const {
    State s;
    s.t.assign(n_ * cols_, CosetTable::undefined);
    return s;
  }

  std::vector<SubgroupRecord> run() {
    std::vector<SubgroupRecord> out;
    if (cols_ == 0) {
      out.push_back(record(root()));
      return out;
    }
    std::vector<State> frontier{root()};
    const std::size_t target = opt_.jobs > 1 ? 16 * static_cast<std::size_t>(opt_.jobs) : 1;
    // Breadth-first until there is enough independent work.
    while (frontier.size() < target) {
      std::vector<State> next;
      bool grew = false;
      for (auto& s : frontier) {
        auto gap = first_gap(s);
        if (!gap) {
          accept(s, out);
          continue;
        }
        grew = true;
        for (auto& c : children(s, *gap)) next.push_back(std::move(c));
      }
      frontier = std::move(next);
      if (!grew || frontier.empty()) break;
    }
    std::vector<std::vector<SubgroupRecord>> found(std::max(1u, opt_.jobs));
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::size_t w) {
      try {
        for (;;) {
          std::size_t k = cursor.fetch_add(1);
          if (k >= frontier.size()) return;
          std::vector<std::size_t> trail;
          dfs(frontier[k], trail, found[w]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        abort_ = true;
      }
    };
    if (opt_.jobs <= 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < opt_.jobs; ++w) pool.emplace_back(worker, w);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& f : found) out.insert(out.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));
    std::sort(out.begin(), out.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) { return a.table < b.table; });
    return out;
  }

 private:
  std::int32_t& at(State& s, std::size_t c, std::size_t col) const { return s.t[c * cols_ + col]; }
  std::int32_t at(const State& s, std::size_t c, std::size_t col) const { return s.t[c * cols_ + col]; }

  std::optional<std::pair<std::size_t, std::size_t>> first_gap(const State& s) const {
    for (std::size_t c = 0; c < s.count; ++c)
      for (std::size_t col = 0; col < cols_; ++col)
        if (at(s, c, col) == CosetTable::undefined) return std::make_pair(c, col);
    return std::nullopt;
  }

  void set(State& s, std::size_t c, std::size_t col, std::size_t d, std::vector<std::size_t>& trail) const {
    at(s, c, col) = static_cast<std::int32_t>(d);
    trail.push_back(c * cols_ + col);
    std::size_t ic = CosetTable::inverse_column(col);
    if (at(s, d, ic) == CosetTable::undefined) {
      at(s, d, ic) = static_cast<std::int32_t>(c);
      trail.push_back(d * cols_ + ic);
    }
  }

  // Sets a·col = b and closes under relator deductions. False on conflict.
  bool assign(State& s, std::size_t a, std::size_t col, std::size_t b, std::vector<std::size_t>& trail) const {
    set(s, a, col, b, trail);
    std::vector<std::pair<std::size_t, std::size_t>> queue{{a, col}, {b, CosetTable::inverse_column(col)}};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [c0, first] = queue[q];
      for (const auto& w : by_first_[first]) {
        std::size_t f = c0, g = c0;
        std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(w.size()) - 1;
        while (i <= j && at(s, f, w[static_cast<std::size_t>(i)]) != CosetTable::undefined)
          f = static_cast<std::size_t>(at(s, f, w[static_cast<std::size_t>(i++)]));
        if (i > j) {
          if (f != g) return false;
          continue;
        }
        while (j >= i && at(s, g, CosetTable::inverse_column(w[static_cast<std::size_t>(j)])) != CosetTable::undefined)
          g = static_cast<std::size_t>(at(s, g, CosetTable::inverse_column(w[static_cast<std::size_t>(j--)])));
        if (j < i) return false;
        if (i == j) {
          std::size_t dc = w[static_cast<std::size_t>(i)];
          set(s, f, dc, g, trail);
          queue.emplace_back(f, dc);
          queue.emplace_back(g, CosetTable::inverse_column(dc));
        }
      }
    }
    return true;
  }

  // False if some base point provably yields a smaller standard table.
  bool maybe_least(const State& s) const {
    std::vector<std::int32_t> to_new(s.count);
    std::vector<std::size_t> to_old;
    for (std::size_t base = 0; base < s.count; ++base) {
      std::fill(to_new.begin(), to_new.end(), CosetTable::undefined);
      to_old.assign(1, base);
      to_new[base] = 0;
      bool decided = false;
      for (std::size_t b = 0; b < s.count && !decided; ++b) {
        if (b >= to_old.size()) break;
        for (std::size_t col = 0; col < cols_; ++col) {
          std::int32_t x = at(s, to_old[b], col);
          std::int32_t y = at(s, b, col);
          if (x == CosetTable::undefined || y == CosetTable::undefined) {
            decided = true;
            break;
          }
          std::int32_t& xn = to_new[static_cast<std::size_t>(x)];
          if (xn == CosetTable::undefined) {
            xn = static_cast<std::int32_t>(to_old.size());
            to_old.push_back(static_cast<std::size_t>(x));
          }
          if (xn < y) return false;
          if (xn > y) {
            decided = true;
            break;
          }
        }
      }
    }
    return true;
  }

  void tick() {
    if (abort_) throw CapExceeded("low-index search aborted");
    if (++nodes_ > opt_.max_nodes) throw CapExceeded("low-index search exceeded " + std::to_string(opt_.max_nodes) + " nodes");
  }

  std::vector<State> children(const State& s, std::pair<std::size_t, std::size_t> gap) {
    std::vector<State> out;
    auto [a, col] = gap;
    std::size_t ic = CosetTable::inverse_column(col);
    for (std::size_t b = 0; b <= s.count && b < n_; ++b) {
      if (b < s.count && at(s, b, ic) != CosetTable::undefined) continue;
      tick();
      State c = s;
      if (b == s.count) ++c.count;
      std::vector<std::size_t> trail;
      if (assign(c, a, col, b, trail) && maybe_least(c)) out.push_back(std::move(c));
    }
    return out;
  }

  void dfs(State& s, std::vector<std::size_t>& trail, std::vector<SubgroupRecord>& out) {
    auto gap = first_gap(s);
    if (!gap) {
      accept(s, out);
      return;
    }
    auto [a, col] = *gap;
    std::size_t ic = CosetTable::inverse_column(col);
    for (std::size_t b = 0; b <= s.count && b < n_; ++b) {
      if (b < s.count && at(s, b, ic) != CosetTable::undefined) continue;
      tick();
      std::size_t mark = trail.size();
      std::size_t count = s.count;
      if (b == s.count) ++s.count;
      if (assign(s, a, col, b, trail) && maybe_least(s)) dfs(s, trail, out);
      while (trail.size() > mark) {
        s.t[trail.back()] = CosetTable::undefined;
        trail.pop_back();
      }
      s.count = count;
    }
  }

  CosetTable table_of(const State& s) const {
    CosetTable t(p_.generator_count(), s.count);
    for (std::size_t c = 0; c < s.count; ++c)
      for (std::size_t col = 0; col < cols_; ++col) t.set(c, col, at(s, c, col));
    return t;
  }

  SubgroupRecord record(const State& s) const {
    SubgroupRecord r;
    r.table = table_of(s);
    r.index = s.count;
    r.normal = is_normal(r.table);
    return r;
  }

  void accept(const State& s, std::vector<SubgroupRecord>& out) const {
    SubgroupRecord r = record(s);
    // Complete tables get the exact test: standard, and least over base points.
    if (!(standardise(r.table) == r.table)) return;
    for (std::size_t base = 1; base < r.index; ++base)
      if (standardise(r.table, base) < r.table) return;
    if (auto defect = table_defect(p_, r.table)) throw Error("low-index search produced a bad table: " + *defect);
    if (opt_.normal_only && !r.normal) return;
    out.push_back(std::move(r));
  }

  const Presentation& p_;
  LowIndexOptions opt_;
  std::size_t cols_;
  std::size_t n_;
  std::vector<std::vector<std::vector<std::size_t>>> by_first_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> abort_{false};
};

}  // namespace detail

/// Subgroups of index <= max_index up to conjugacy (exactly, when only normal
/// subgroups are requested), including the whole group, sorted by index and
/// then by standard table. The result does not depend on the worker count.
inline std::vector<SubgroupRecord> low_index(const Presentation& p, const LowIndexOptions& opt) {
  if (opt.max_index < 1) throw InvalidArgument("low_index: max index must be at least 1");
  detail::LowIndexSearch s(p, opt);
  return s.run();
}

inline std::vector<SubgroupRecord> low_index(const Presentation& p, std::size_t max_index, bool normal_only = false) {
  LowIndexOptions opt;
  opt.max_index = max_index;
  opt.normal_only = normal_only;
  return low_index(p, opt);
}

}  // namespace nilgenus
