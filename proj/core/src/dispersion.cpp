#include "disperse/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "disperse/rng.hpp"

namespace disperse {
namespace {

// Length of the arc from a up to b on the unit circle; a == b is the full
// circle minus one point.
double arc_length(double a, double b) {
  if (a < b) return b - a;
  if (b < a) return 1.0 - (a - b);
  return 1.0;
}

struct Gap {
  double len;
  double lo;
  double hi;
};

// Longest first, then lowest start.
struct GapOrder {
  bool operator()(const Gap& x, const Gap& y) const {
    if (x.len != y.len) return x.len > y.len;
    return x.lo < y.lo;
  }
};

// Gaps between the values of a growing set, on [0,1] with fixed walls at 0
// and 1 (cube) or on the circle (torus). Inserting only splits gaps, so every
// gap, and in particular the longest, only shrinks. The ordered gap set is
// kept only when best() is needed.
class GapSet {
public:
  explicit GapSet(bool torus) : torus_(torus) { reset(true); }

  void reset(bool track_best) {
    track_ = track_best;
    values_.clear();
    gaps_.clear();
    if (!torus_) {
      values_ = {0.0, 1.0};
      if (track_) gaps_.insert({1.0, 0.0, 1.0});
    }
  }

  void insert(double y) {
    auto it = std::lower_bound(values_.begin(), values_.end(), y);
    if (it != values_.end() && *it == y) return;
    it = values_.insert(it, y);
    if (!track_) return;
    const std::size_t size = values_.size();
    if (torus_ && size == 1) return;
    if (torus_ && size == 2) {
      const double c = values_[it == values_.begin() ? 1 : 0];
      gaps_.insert({arc_length(c, y), c, y});
      gaps_.insert({arc_length(y, c), y, c});
      return;
    }
    const auto i = static_cast<std::size_t>(it - values_.begin());
    const double prev = values_[(i + size - 1) % size];
    const double next = values_[(i + 1) % size];
    gaps_.erase(Gap{span(prev, next), prev, next});
    gaps_.insert({span(prev, y), prev, y});
    gaps_.insert({span(y, next), y, next});
  }

  Gap best() const {
    if (torus_ && values_.empty()) return {1.0, 0.0, 0.0};
    if (torus_ && values_.size() == 1) return {1.0, values_[0], values_[0]};
    return *gaps_.begin();
  }

  // Gap that strictly contains every value in `ys` (all must share one gap),
  // or nullopt when a value is blocked or they fall in different gaps.
  std::optional<Gap> containing(std::span<const double> ys) const {
    if (torus_ && values_.empty()) return Gap{1.0, 0.0, 0.0};
    if (torus_ && values_.size() == 1) {
      const double c = values_[0];
      for (double y : ys)
        if (y == c) return std::nullopt;
      return Gap{1.0, c, c};
    }
    const double y0 = ys[0];
    auto it = std::upper_bound(values_.begin(), values_.end(), y0);
    double lo, hi;
    if (!torus_) {
      if (it == values_.end()) return std::nullopt;
      hi = *it;
      lo = *std::prev(it);
    } else {
      hi = it == values_.end() ? values_.front() : *it;
      lo = it == values_.begin() ? values_.back() : *std::prev(it);
    }
    if (lo == y0) return std::nullopt;
    for (double y : ys)
      if (!inside(lo, hi, y)) return std::nullopt;
    return Gap{span(lo, hi), lo, hi};
  }

private:
  double span(double a, double b) const { return torus_ ? arc_length(a, b) : b - a; }
  bool inside(double lo, double hi, double y) const {
    if (!torus_ || lo < hi) return lo < y && y < hi;
    return y > lo || y < hi;
  }

  bool torus_;
  bool track_ = true;
  std::vector<double> values_;
  std::set<Gap, GapOrder> gaps_;
};

struct Group {
  double value;
  std::size_t begin;
  std::size_t end;
};

constexpr std::int64_t kNoSupport = -1;

struct End {
  double value;
  double width;
  std::int64_t group;    // group entering the slab after this end, or -1
  std::int64_t support;  // the single point on this face, or -1
};

struct Start {
  double value;
  double max_width;
  std::int64_t group;  // -1 for the cube's lower wall
  std::int64_t support;
  std::size_t first;     // cube: first group after the start
  std::size_t end_count; // torus: excludes the full-circle end
};

bool better(const Gap& x, const Gap& y) { return x.len > y.len || (x.len == y.len && x.lo < y.lo); }

// Best circular gap among a fixed multiset of values after deleting one
// occurrence of a value, in O(1) per query after an O(k) build.
class CircleGaps {
public:
  explicit CircleGaps(std::vector<double> sorted_values) {
    for (std::size_t i = 0; i < sorted_values.size();) {
      std::size_t j = i;
      while (j < sorted_values.size() && sorted_values[j] == sorted_values[i]) ++j;
      values_.push_back(sorted_values[i]);
      counts_.push_back(j - i);
      i = j;
    }
    const std::size_t m = values_.size();
    if (m < 2) return;
    for (std::size_t i = 0; i < m; ++i) gaps_.push_back(gap(i, (i + 1) % m));
    prefix_ = gaps_;
    suffix_ = gaps_;
    for (std::size_t i = 1; i < m; ++i)
      if (better(prefix_[i - 1], prefix_[i])) prefix_[i] = prefix_[i - 1];
    for (std::size_t i = m - 1; i-- > 0;)
      if (better(suffix_[i + 1], suffix_[i])) suffix_[i] = suffix_[i + 1];
    if (m >= 3) {
      middle_ = gaps_[1];
      for (std::size_t i = 2; i + 1 < m; ++i)
        if (better(gaps_[i], *middle_)) middle_ = gaps_[i];
    }
  }

  Gap best() const {
    if (values_.empty()) return {1.0, 0.0, 0.0};
    if (values_.size() == 1) return {1.0, values_[0], values_[0]};
    return prefix_.back();
  }

  Gap best_without(double y) const {
    const auto i = static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), y) - values_.begin());
    if (counts_[i] > 1) return best();
    const std::size_t m = values_.size();
    if (m == 1) return {1.0, 0.0, 0.0};
    if (m == 2) return {1.0, values_[1 - i], values_[1 - i]};
    Gap merged = gap((i + m - 1) % m, (i + 1) % m);
    std::optional<Gap> rest;
    if (i == 0) {
      rest = middle_;
    } else {
      if (i >= 2) rest = prefix_[i - 2];
      if (i + 1 < m && (!rest || better(suffix_[i + 1], *rest))) rest = suffix_[i + 1];
    }
    return rest && better(*rest, merged) ? *rest : merged;
  }

private:
  Gap gap(std::size_t a, std::size_t b) const {
    return {arc_length(values_[a], values_[b]), values_[a], values_[b]};
  }

  std::vector<double> values_;
  std::vector<std::size_t> counts_;
  std::vector<Gap> gaps_, prefix_, suffix_;
  std::optional<Gap> middle_;
};

// Branch and bound over candidate faces. A maximal empty box has, on each
// face not on the cube's wall, a point lying strictly inside the box on the
// other axes. When a face value is held by a single point, that point becomes
// a constraint for the remaining axes, which prunes most candidates early.
// Constraints only ever remove candidates, so every box offered is empty.
class ExactSolver {
public:
  ExactSolver(const PointSet& ps, bool torus)
      : d_(ps.dim()), n_(ps.size()), torus_(torus), x_(ps.data().begin(), ps.data().end()) {
    if (torus_) {
      for (auto& v : x_)
        if (v == 1.0) v = 0.0;
    }
    order_.resize(d_);
    for (std::size_t a = 0; a < d_; ++a) {
      auto& o = order_[a];
      o.resize(n_);
      std::iota(o.begin(), o.end(), 0u);
      std::stable_sort(o.begin(), o.end(), [&](auto p, auto q) { return coord(p, a) < coord(q, a); });
    }
    stamp_.assign(n_, 0);
    cur_lo_.assign(d_, 0.0);
    cur_hi_.assign(d_, 0.0);
  }

  DispersionResult run() {
    std::vector<std::uint32_t> all(n_);
    std::iota(all.begin(), all.end(), 0u);
    solve(0, all, 1.0, {});

    DispersionResult r{0.0, Box::unit(d_), true, false};
    if (torus_) {
      std::vector<TorusInterval> arcs;
      for (std::size_t a = 0; a < d_; ++a) arcs.emplace_back(best_lo_[a], best_hi_[a]);
      TorusBox w(std::move(arcs));
      r.value = w.volume();
      r.degenerate = w.degenerate();
      r.witness = std::move(w);
    } else {
      Box w(best_lo_, best_hi_);
      r.value = w.volume();
      r.witness = std::move(w);
    }
    return r;
  }

private:
  using Constraints = std::vector<std::uint32_t>;

  double coord(std::uint32_t p, std::size_t a) const { return x_[p * d_ + a]; }

  void offer(double vol) {
    if (vol > best_) {
      best_ = vol;
      best_lo_ = cur_lo_;
      best_hi_ = cur_hi_;
      return;
    }
    if (vol < best_) return;
    for (std::size_t a = 0; a < d_; ++a) {
      if (cur_lo_[a] != best_lo_[a]) {
        if (cur_lo_[a] < best_lo_[a]) break;
        return;
      }
      if (cur_hi_[a] != best_hi_[a]) {
        if (cur_hi_[a] < best_hi_[a]) break;
        return;
      }
      if (a + 1 == d_) return;
    }
    best_lo_ = cur_lo_;
    best_hi_ = cur_hi_;
  }

  std::vector<std::uint32_t> sorted_on(std::size_t axis, const std::vector<std::uint32_t>& members) {
    ++epoch_;
    for (auto p : members) stamp_[p] = epoch_;
    std::vector<std::uint32_t> out;
    out.reserve(members.size());
    for (auto p : order_[axis])
      if (stamp_[p] == epoch_) out.push_back(p);
    return out;
  }

  std::vector<Group> groups_of(std::size_t axis, const std::vector<std::uint32_t>& sorted) const {
    std::vector<Group> g;
    for (std::size_t i = 0; i < sorted.size();) {
      const double v = coord(sorted[i], axis);
      std::size_t j = i;
      while (j < sorted.size() && coord(sorted[j], axis) == v) ++j;
      g.push_back({v, i, j});
      i = j;
    }
    return g;
  }

  // Faces on the cube's walls need no supporting point.
  std::int64_t support_of(const Group& g, const std::vector<std::uint32_t>& sorted) const {
    if (!torus_ && (g.value == 0.0 || g.value == 1.0)) return kNoSupport;
    return g.end - g.begin == 1 ? static_cast<std::int64_t>(sorted[g.begin]) : kNoSupport;
  }

  std::vector<Start> starts_of(const std::vector<Group>& g, const std::vector<std::uint32_t>& sorted) const {
    std::vector<Start> starts;
    const std::size_t k = g.size();
    if (!torus_) {
      const bool wall_end = k == 0 || g[k - 1].value < 1.0;
      auto cube_start = [&](double s, std::int64_t group, std::size_t first) {
        const auto support = group < 0 ? kNoSupport : support_of(g[static_cast<std::size_t>(group)], sorted);
        return Start{s, 1.0 - s, group, support, first, k - first + (wall_end ? 1 : 0)};
      };
      if (k == 0 || g[0].value > 0.0) starts.push_back(cube_start(0.0, -1, 0));
      for (std::size_t t = 0; t < k; ++t) {
        if (g[t].value < 1.0) starts.push_back(cube_start(g[t].value, static_cast<std::int64_t>(t), t + 1));
      }
    } else {
      for (std::size_t t = 0; t < k; ++t) {
        starts.push_back(Start{g[t].value, 1.0, static_cast<std::int64_t>(t), support_of(g[t], sorted), t, k - 1});
      }
    }
    return starts;
  }

  // The i-th end of a start, in order of increasing width.
  End end_at(const Start& st, std::size_t i, const std::vector<Group>& g,
             const std::vector<std::uint32_t>& sorted) const {
    if (!torus_) {
      const std::size_t u = st.first + i;
      if (u == g.size()) return {1.0, 1.0 - st.value, -1, kNoSupport};
      return {g[u].value, g[u].value - st.value, static_cast<std::int64_t>(u), support_of(g[u], sorted)};
    }
    const std::size_t u = (st.first + 1 + i) % g.size();
    return {g[u].value, arc_length(st.value, g[u].value), static_cast<std::int64_t>(u), support_of(g[u], sorted)};
  }

  // Smallest width an interval starting at s needs to strictly contain every
  // constraint on this axis; infinity when impossible.
  double needed_width(std::size_t axis, double s, const Constraints& cons) const {
    double need = 0.0;
    for (auto c : cons) {
      const double y = coord(c, axis);
      if (torus_) {
        if (y == s) return HUGE_VAL;
        need = std::max(need, arc_length(s, y));
      } else {
        if (y <= s) return HUGE_VAL;
        need = std::max(need, y - s);
      }
    }
    return need;
  }

  void solve(std::size_t axis, const std::vector<std::uint32_t>& members, double scale, const Constraints& cons) {
    if (members.empty()) {
      for (std::size_t a = axis; a < d_; ++a) {
        cur_lo_[a] = 0.0;
        cur_hi_[a] = torus_ ? 0.0 : 1.0;
      }
      offer(scale);
      return;
    }
    auto sorted = sorted_on(axis, members);
    if (axis + 1 == d_) return solve_last(axis, sorted, scale, cons);
    if (axis + 2 == d_) return solve_pair(axis, sorted, scale, cons);
    solve_outer(axis, sorted, scale, cons);
  }

  void solve_last(std::size_t axis, const std::vector<std::uint32_t>& sorted, double scale, const Constraints& cons) {
    GapSet gaps(torus_);
    for (auto p : sorted) gaps.insert(coord(p, axis));
    std::optional<Gap> gp = gaps.best();
    if (!cons.empty()) {
      std::vector<double> ys;
      for (auto c : cons) ys.push_back(coord(c, axis));
      gp = gaps.containing(ys);
    }
    if (!gp) return;
    cur_lo_[axis] = gp->lo;
    cur_hi_[axis] = gp->hi;
    offer(scale * gp->len);
  }

  // Length of the gap among `values` strictly containing every y in `ys`,
  // 0 when there is none.
  double containing_length(const std::vector<double>& values, const std::vector<double>& ys) const {
    const double y0 = ys[0];
    double down = torus_ ? 1.0 : y0, up = torus_ ? 1.0 : 1.0 - y0;
    for (double v : values) {
      if (v == y0) return 0.0;
      if (torus_) {
        up = std::min(up, arc_length(y0, v));
        down = std::min(down, arc_length(v, y0));
      } else if (v > y0) {
        up = std::min(up, v - y0);
      } else {
        down = std::min(down, y0 - v);
      }
    }
    for (double y : ys) {
      if (y == y0) continue;
      const bool ok = torus_ ? arc_length(y0, y) < up || arc_length(y, y0) < down
                             : (y > y0 ? y - y0 < up : y0 - y < down);
      if (!ok) return 0.0;
    }
    return torus_ ? std::min(1.0, up + down) : up + down;
  }

  // Upper bound on the inner extent: members whose outer coordinate lies
  // between the constraints on the outer axis are inside the box there, so
  // the inner axis must avoid them.
  double inner_extent_bound(std::size_t axis, const std::vector<std::uint32_t>& sorted,
                            const Constraints& cons) const {
    const std::size_t inner = axis + 1;
    std::vector<double> xs, ys, blockers;
    for (auto c : cons) {
      xs.push_back(coord(c, axis));
      ys.push_back(coord(c, inner));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    auto bound_for = [&](auto&& in_hull) {
      blockers.clear();
      for (auto p : sorted)
        if (in_hull(coord(p, axis))) blockers.push_back(coord(p, inner));
      return containing_length(blockers, ys);
    };
    if (!torus_) return bound_for([&](double x) { return xs.front() <= x && x <= xs.back(); });
    if (xs.size() == 1) return bound_for([&](double x) { return x == xs[0]; });
    // The arc misses exactly one of the open gaps between constraint values.
    double bound = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double a = xs[i], b = xs[(i + 1) % xs.size()];
      bound = std::max(bound, bound_for([&](double x) {
        const bool skipped = a < b ? a < x && x < b : x > a || x < b;
        return !skipped;
      }));
    }
    return bound;
  }

  void solve_pair(std::size_t axis, const std::vector<std::uint32_t>& sorted, double scale, const Constraints& cons) {
    if (!cons.empty() && scale * inner_extent_bound(axis, sorted, cons) < best_) return;
    const std::size_t inner = axis + 1;
    const auto groups = groups_of(axis, sorted);
    GapSet gaps(torus_);
    std::vector<double> common, ys;

    std::optional<CircleGaps> circle;
    if (torus_) {
      std::vector<double> inner_values;
      for (auto p : sorted) inner_values.push_back(coord(p, inner));
      std::sort(inner_values.begin(), inner_values.end());
      circle.emplace(std::move(inner_values));
    }

    for (const auto& st : starts_of(groups, sorted)) {
      if (torus_) full_circle_end(axis, st, groups, sorted, *circle, scale);
      if (scale * st.max_width < best_) continue;
      const double need = needed_width(axis, st.value, cons);
      if (need == HUGE_VAL) continue;

      common.clear();
      for (auto c : cons) common.push_back(coord(c, inner));
      if (st.support != kNoSupport) common.push_back(coord(static_cast<std::uint32_t>(st.support), inner));

      gaps.reset(common.empty());
      for (std::size_t i = 0; i < st.end_count; ++i) {
        const End end = end_at(st, i, groups, sorted);
        std::optional<Gap> bound = common.empty() ? std::optional<Gap>(gaps.best()) : gaps.containing(common);
        if (!bound || scale * st.max_width * bound->len < best_) break;
        if (end.width > need && scale * end.width * bound->len >= best_) {
          std::optional<Gap> gp = bound;
          if (end.support != kNoSupport) {
            ys = common;
            ys.push_back(coord(static_cast<std::uint32_t>(end.support), inner));
            gp = gaps.containing(ys);
          }
          if (gp) {
            cur_lo_[axis] = st.value;
            cur_hi_[axis] = end.value;
            cur_lo_[inner] = gp->lo;
            cur_hi_[inner] = gp->hi;
            offer(scale * end.width * gp->len);
          }
        }
        if (end.group >= 0) {
          const auto& grp = groups[static_cast<std::size_t>(end.group)];
          for (std::size_t i = grp.begin; i < grp.end; ++i) gaps.insert(coord(sorted[i], inner));
        }
      }
    }
  }

  // Torus arc (s, s): the circle minus the start coordinate. Its slab holds
  // every member outside the start group; constraints on the inner axis are
  // dropped, which only adds candidates.
  void full_circle_end(std::size_t axis, const Start& st, const std::vector<Group>& groups,
                       const std::vector<std::uint32_t>& sorted, const CircleGaps& circle, double scale) {
    if (scale < best_) return;
    const std::size_t inner = axis + 1;
    const auto& grp = groups[static_cast<std::size_t>(st.group)];
    Gap gp;
    if (st.support != kNoSupport) {
      gp = circle.best_without(coord(static_cast<std::uint32_t>(st.support), inner));
    } else {
      GapSet gaps(true);
      for (std::size_t i = 0; i < sorted.size(); ++i)
        if (i < grp.begin || i >= grp.end) gaps.insert(coord(sorted[i], inner));
      gp = gaps.best();
    }
    cur_lo_[axis] = st.value;
    cur_hi_[axis] = st.value;
    cur_lo_[inner] = gp.lo;
    cur_hi_[inner] = gp.hi;
    offer(scale * gp.len);
  }

  void solve_outer(std::size_t axis, const std::vector<std::uint32_t>& sorted, double scale, const Constraints& cons) {
    const auto groups = groups_of(axis, sorted);
    std::vector<std::uint32_t> slab;
    Constraints next;
    for (const auto& st : starts_of(groups, sorted)) {
      if (torus_ && scale >= best_) {
        // Full-circle arc: every member outside the start group.
        const auto& grp = groups[static_cast<std::size_t>(st.group)];
        slab.clear();
        for (std::size_t i = 0; i < sorted.size(); ++i)
          if (i < grp.begin || i >= grp.end) slab.push_back(sorted[i]);
        cur_lo_[axis] = st.value;
        cur_hi_[axis] = st.value;
        solve(axis + 1, slab, scale, cons);
      }
      if (scale * st.max_width < best_) continue;
      const double need = needed_width(axis, st.value, cons);
      if (need == HUGE_VAL) continue;
      slab.clear();
      for (std::size_t i = 0; i < st.end_count; ++i) {
        const End end = end_at(st, i, groups, sorted);
        if (end.width > need && scale * end.width >= best_) {
          next = cons;
          if (st.support != kNoSupport) next.push_back(static_cast<std::uint32_t>(st.support));
          if (end.support != kNoSupport) next.push_back(static_cast<std::uint32_t>(end.support));
          cur_lo_[axis] = st.value;
          cur_hi_[axis] = end.value;
          solve(axis + 1, slab, scale * end.width, next);
        }
        if (end.group >= 0) {
          const auto& grp = groups[static_cast<std::size_t>(end.group)];
          slab.insert(slab.end(), sorted.begin() + static_cast<std::ptrdiff_t>(grp.begin),
                      sorted.begin() + static_cast<std::ptrdiff_t>(grp.end));
        }
      }
    }
  }

  std::size_t d_;
  std::size_t n_;
  bool torus_;
  std::vector<double> x_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  double best_ = -1.0;
  std::vector<double> best_lo_, best_hi_, cur_lo_, cur_hi_;
};

void check_limits(const PointSet& ps, const ExactLimits& limits) {
  if (ps.dim() > limits.max_dim) {
    throw ExactCapExceeded("exact dispersion limited to d <= " + std::to_string(limits.max_dim) + " (got d = " +
                           std::to_string(ps.dim()) + ")");
  }
  if (ps.size() > limits.max_points) {
    throw ExactCapExceeded("exact dispersion limited to n <= " + std::to_string(limits.max_points) + " (got n = " +
                           std::to_string(ps.size()) + ")");
  }
}

// ---- grid oracle -----------------------------------------------------------

double grid_at(std::uint32_t j, std::uint32_t g) { return static_cast<double>(j) / static_cast<double>(g); }

// Smallest j in [0, g] with j/g >= x.
std::uint32_t grid_ceil(double x, std::uint32_t g) {
  std::uint32_t j = 0;
  auto guess = static_cast<long long>(std::ceil(x * g)) - 1;
  if (guess > 0) j = static_cast<std::uint32_t>(std::min<long long>(guess, g));
  while (j > 0 && grid_at(j - 1, g) >= x) --j;
  while (j < g && grid_at(j, g) < x) ++j;
  return j;
}

// Largest k in [0, g] with k/g <= x.
std::uint32_t grid_floor(double x, std::uint32_t g) {
  std::uint32_t k = 0;
  auto guess = static_cast<long long>(std::floor(x * g)) + 1;
  if (guess > 0) k = static_cast<std::uint32_t>(std::min<long long>(guess, g));
  while (k > 0 && grid_at(k, g) > x) --k;
  while (k < g && grid_at(k + 1, g) <= x) ++k;
  return k;
}

struct GridInterval {
  std::uint32_t j;
  std::uint32_t k;
  double len;
};

bool grid_inside(const GridInterval& iv, double x, std::uint32_t g, bool torus) {
  const double a = grid_at(iv.j, g), b = grid_at(iv.k, g);
  if (!torus || iv.j < iv.k) return a < x && x < b;
  if (iv.j > iv.k) return x > a || x < b;
  return x != a;
}

// Longest grid interval (cube) or arc (torus) avoiding every blocker.
double grid_best_1d(std::vector<double> blockers, std::uint32_t g, bool torus) {
  std::sort(blockers.begin(), blockers.end());
  blockers.erase(std::unique(blockers.begin(), blockers.end()), blockers.end());
  double best = 0.0;
  if (!torus) {
    blockers.insert(blockers.begin(), 0.0);
    blockers.push_back(1.0);
    for (std::size_t i = 0; i + 1 < blockers.size(); ++i) {
      const auto j = grid_ceil(blockers[i], g), k = grid_floor(blockers[i + 1], g);
      if (k > j) best = std::max(best, grid_at(k - j, g));
    }
    return best;
  }
  if (blockers.empty()) return 1.0;
  for (std::size_t i = 0; i < blockers.size(); ++i) {
    const bool wrap = i + 1 == blockers.size();
    const double p = blockers[i], q = wrap ? blockers[0] : blockers[i + 1];
    const long long j = grid_ceil(p, g);
    long long k = grid_floor(q, g);
    if (wrap) k += g;
    const long long units = k - j;
    if (units >= static_cast<long long>(g)) {
      best = 1.0;
    } else if (units > 0) {
      best = std::max(best, grid_at(static_cast<std::uint32_t>(units), g));
    }
  }
  return best;
}

}  // namespace

DispersionResult largest_empty_box(const PointSet& ps, const ExactLimits& limits) {
  check_limits(ps, limits);
  return ExactSolver(ps, false).run();
}

DispersionResult largest_empty_torus_box(const PointSet& ps, const ExactLimits& limits) {
  check_limits(ps, limits);
  return ExactSolver(ps, true).run();
}

DispersionResult exact_dispersion(const PointSet& ps, BoxKind kind, const ExactLimits& limits) {
  return kind == BoxKind::cube ? largest_empty_box(ps, limits) : largest_empty_torus_box(ps, limits);
}

double grid_oracle(const PointSet& ps, std::uint32_t g, BoxKind kind, std::uint64_t max_work) {
  if (g < 2) throw std::invalid_argument("grid oracle needs g >= 2");
  const bool torus = kind == BoxKind::torus;
  const std::size_t d = ps.dim(), n = ps.size();

  std::vector<GridInterval> intervals;
  if (!torus) {
    for (std::uint32_t j = 0; j < g; ++j)
      for (std::uint32_t k = j + 1; k <= g; ++k) intervals.push_back({j, k, grid_at(k - j, g)});
  } else {
    for (std::uint32_t j = 0; j < g; ++j)
      for (std::uint32_t k = 0; k < g; ++k)
        intervals.push_back({j, k, j == k ? 1.0 : grid_at((k + g - j) % g, g)});
  }

  double work = static_cast<double>(std::max<std::size_t>(n, 1));
  for (std::size_t a = 0; a + 1 < d; ++a) work *= static_cast<double>(intervals.size());
  if (work > static_cast<double>(max_work)) {
    throw ExactCapExceeded("grid oracle would need about " + std::to_string(work) + " steps");
  }

  // inside[a][i]: bitset of points strictly inside interval i on axis a.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> inside(d > 0 ? d - 1 : 0);
  for (std::size_t a = 0; a + 1 < d; ++a) {
    inside[a].assign(intervals.size() * words, 0);
    for (std::size_t i = 0; i < intervals.size(); ++i)
      for (std::size_t p = 0; p < n; ++p)
        if (grid_inside(intervals[i], ps[p][a], g, torus)) inside[a][i * words + p / 64] |= std::uint64_t{1} << (p % 64);
  }

  double best = 0.0;
  std::vector<std::vector<std::uint64_t>> masks(d, std::vector<std::uint64_t>(words, ~std::uint64_t{0}));
  if (n % 64 && words) masks[0][words - 1] = (std::uint64_t{1} << (n % 64)) - 1;

  auto rec = [&](auto&& self, std::size_t axis, double prefix) -> void {
    const auto& mask = masks[axis];
    if (axis + 1 == d) {
      std::vector<double> blockers;
      for (std::size_t p = 0; p < n; ++p)
        if (mask[p / 64] >> (p % 64) & 1) blockers.push_back(ps[p][axis]);
      best = std::max(best, prefix * grid_best_1d(std::move(blockers), g, torus));
      return;
    }
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (prefix * intervals[i].len <= best) continue;
      auto& next = masks[axis + 1];
      for (std::size_t w = 0; w < words; ++w) next[w] = mask[w] & inside[axis][i * words + w];
      self(self, axis + 1, prefix * intervals[i].len);
    }
  };
  rec(rec, 0, 1.0);
  return best;
}

DispersionResult estimate_dispersion(const PointSet& ps, std::uint64_t trials, std::uint64_t seed, BoxKind kind) {
  if (trials < 1) throw std::invalid_argument("estimate_dispersion needs trials >= 1");
  const std::size_t d = ps.dim(), n = ps.size();
  const bool torus = kind == BoxKind::torus;
  Rng rng(seed);
  const double half = 0.5 / std::pow(static_cast<double>(n + 1), 1.0 / static_cast<double>(d));

  DispersionResult best{-1.0, Box::unit(d), false, false};
  std::vector<std::size_t> axes(d);

  for (std::uint64_t t = 0; t < trials; ++t) {
    std::vector<double> c(d);
    for (auto& v : c) v = rng.uniform();
    std::iota(axes.begin(), axes.end(), 0u);
    for (std::size_t i = d; i > 1; --i) std::swap(axes[i - 1], axes[rng.below(i)]);

    if (!torus) {
      std::vector<double> lo(d), hi(d);
      for (std::size_t a = 0; a < d; ++a) {
        lo[a] = std::max(0.0, c[a] - half);
        hi[a] = std::min(1.0, c[a] + half);
      }
      if (interior_intersects(Box(lo, hi), ps)) continue;
      for (auto a : axes) {
        double new_lo = 0.0, new_hi = 1.0;
        for (std::size_t p = 0; p < n; ++p) {
          auto x = ps[p];
          bool blocks = true;
          for (std::size_t b = 0; b < d && blocks; ++b)
            if (b != a) blocks = lo[b] < x[b] && x[b] < hi[b];
          if (!blocks) continue;
          if (x[a] <= lo[a]) new_lo = std::max(new_lo, x[a]);
          if (x[a] >= hi[a]) new_hi = std::min(new_hi, x[a]);
        }
        lo[a] = new_lo;
        hi[a] = new_hi;
      }
      Box w(std::move(lo), std::move(hi));
      const double v = w.volume();
      if (v > best.value) best = {v, std::move(w), false, false};
    } else {
      std::vector<TorusInterval> arcs;
      for (std::size_t a = 0; a < d; ++a) {
        double lo = c[a] - half, hi = c[a] + half;
        if (lo < 0.0) lo += 1.0;
        if (hi >= 1.0) hi -= 1.0;
        arcs.emplace_back(lo, hi);
      }
      if (intersects(TorusBox(arcs), ps)) continue;
      for (auto a : axes) {
        // Nearest blocking coordinates below the arc start and above its end.
        const double s = arcs[a].a(), e = arcs[a].b();
        double down = 2.0, up = 2.0, lo_at = s, hi_at = e;
        for (std::size_t p = 0; p < n; ++p) {
          auto x = ps[p];
          bool blocks = true;
          for (std::size_t b = 0; b < d && blocks; ++b)
            if (b != a) blocks = arcs[b].contains(x[b]);
          if (!blocks) continue;
          const double dd = arc_length(x[a], s) == 1.0 ? 0.0 : arc_length(x[a], s);
          const double du = arc_length(e, x[a]) == 1.0 ? 0.0 : arc_length(e, x[a]);
          if (dd < down) {
            down = dd;
            lo_at = x[a];
          }
          if (du < up) {
            up = du;
            hi_at = x[a];
          }
        }
        arcs[a] = down > 1.0 ? TorusInterval(s, s) : TorusInterval(lo_at, hi_at);
      }
      TorusBox w(std::move(arcs));
      const double v = w.volume();
      if (v > best.value) {
        const bool deg = w.degenerate();
        best = {v, std::move(w), false, deg};
      }
    }
  }
  if (best.value < 0.0) best.value = 0.0;
  return best;
}

bool witness_is_empty(const DispersionResult& result, const PointSet& ps) {
  if (const auto* box = std::get_if<Box>(&result.witness)) return !interior_intersects(*box, ps);
  return !intersects(std::get<TorusBox>(result.witness), ps);
}

}  // namespace disperse
