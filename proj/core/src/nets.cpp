#include "disperse/nets.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "disperse/parallel.hpp"
#include "disperse/points_io.hpp"
#include "disperse/rng.hpp"

namespace disperse {
namespace {

constexpr std::size_t kMaxWitnesses = 16;

// Smallest j in [0, m] with j/m >= x.
std::uint32_t ceil_index(double x, std::uint32_t m) {
  auto j = static_cast<std::int64_t>(std::ceil(x * m));
  j = std::clamp<std::int64_t>(j, 0, m);
  while (j > 0 && grid_value(static_cast<std::uint32_t>(j - 1), m) >= x) --j;
  while (j < m && grid_value(static_cast<std::uint32_t>(j), m) < x) ++j;
  return static_cast<std::uint32_t>(j);
}

// Largest k in [0, m] with k/m <= x.
std::uint32_t floor_index(double x, std::uint32_t m) {
  auto k = static_cast<std::int64_t>(std::floor(x * m));
  k = std::clamp<std::int64_t>(k, 0, m);
  while (k < m && grid_value(static_cast<std::uint32_t>(k + 1), m) <= x) ++k;
  while (k > 0 && grid_value(static_cast<std::uint32_t>(k), m) > x) --k;
  return static_cast<std::uint32_t>(k);
}

// Largest j with j/m < x, or -1.
std::int32_t below_index(double x, std::uint32_t m) {
  auto j = static_cast<std::int64_t>(std::ceil(x * m)) - 1;
  j = std::clamp<std::int64_t>(j, -1, m);
  while (j < static_cast<std::int64_t>(m) && grid_value(static_cast<std::uint32_t>(j + 1), m) < x) ++j;
  while (j >= 0 && grid_value(static_cast<std::uint32_t>(j), m) >= x) --j;
  return static_cast<std::int32_t>(j);
}

struct Interval {
  std::uint16_t j;
  std::uint16_t k;
  std::uint32_t length;
};

std::vector<Interval> axis_intervals(BoxKind kind, std::uint32_t m) {
  std::vector<Interval> out;
  if (kind == BoxKind::cube) {
    for (std::uint32_t j = 0; j < m; ++j)
      for (std::uint32_t k = j + 1; k <= m; ++k)
        out.push_back({static_cast<std::uint16_t>(j), static_cast<std::uint16_t>(k), k - j});
  } else {
    for (std::uint32_t j = 0; j < m; ++j)
      for (std::uint32_t k = 0; k < m; ++k)
        if (j != k)
          out.push_back({static_cast<std::uint16_t>(j), static_cast<std::uint16_t>(k), (k + m - j) % m});
  }
  return out;
}

double grid_volume_scale(const NetParams& p) { return std::pow(static_cast<double>(p.grid_m), static_cast<double>(p.dim)); }

// Length products admitted into the net: prod / m^d >= delta.
bool admits(std::uint64_t prod, double scale, double delta) {
  return static_cast<double>(prod) / scale >= delta;
}

}  // namespace

const char* to_string(BoxKind kind) noexcept { return kind == BoxKind::cube ? "cube" : "torus"; }

double grid_value(std::uint32_t j, std::uint32_t m) noexcept {
  return static_cast<double>(j) / static_cast<double>(m);
}

double NetParams::guaranteed_volume() const {
  const double shrink = 1.0 - 2.0 / (static_cast<double>(grid_m) * eps);
  if (shrink <= 0.0) return 0.0;
  return eps * std::pow(shrink, static_cast<double>(dim));
}

void NetParams::validate() const {
  if (dim < 1) throw std::invalid_argument("net dimension must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
  if (!(delta > 0.0 && delta <= eps)) throw std::invalid_argument("delta must lie in (0, eps]");
  if (grid_m > kMaxGridResolution) throw std::invalid_argument("grid resolution above 65535");
  if (grid_m < static_cast<std::uint32_t>(std::ceil(2.0 / eps)) + 1) {
    throw std::invalid_argument("grid resolution below ceil(2/eps)+1");
  }
  if (!(guaranteed_volume() >= delta)) {
    throw std::invalid_argument("grid too coarse: eps*(1-2/(m*eps))^d < delta");
  }
}

std::uint32_t grid_resolution(std::size_t dim, double eps, double delta) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
  if (!(delta > 0.0 && delta < eps)) {
    throw std::invalid_argument("grid resolution needs 0 < delta < eps");
  }
  const auto floor_m = static_cast<std::uint32_t>(std::ceil(2.0 / eps)) + 1;
  // Closed form from eps*(1-2/(m*eps))^d = delta, then settle on integers.
  const double root = std::pow(delta / eps, 1.0 / static_cast<double>(dim));
  const double approx = 2.0 / (eps * (1.0 - root));
  if (!(approx < kMaxGridResolution)) throw std::invalid_argument("required grid resolution exceeds 65535");
  const auto start = static_cast<std::uint32_t>(std::max(0.0, std::floor(approx) - 2.0));
  NetParams p{dim, eps, delta, std::max(floor_m, start)};
  while (!(p.guaranteed_volume() >= delta)) {
    if (++p.grid_m > kMaxGridResolution) throw std::invalid_argument("required grid resolution exceeds 65535");
  }
  return p.grid_m;
}

NetParams make_net_params(std::size_t dim, double eps, double delta) {
  return NetParams{dim, eps, delta, grid_resolution(dim, eps, delta)};
}

Box round_inner(const Box& box, std::uint32_t m) {
  std::vector<double> lo(box.dim()), hi(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const auto j = ceil_index(box.lo()[i], m);
    const auto k = floor_index(box.hi()[i], m);
    if (k <= j) {
      lo[i] = hi[i] = box.lo()[i];
    } else {
      lo[i] = grid_value(j, m);
      hi[i] = grid_value(k, m);
    }
  }
  return Box(std::move(lo), std::move(hi));
}

namespace {

// Grid arc (start index, length units) inside `arc`, or nullopt if empty.
std::optional<std::pair<std::uint32_t, std::uint32_t>> inner_arc(const TorusInterval& arc, std::uint32_t m) {
  const std::int64_t start = ceil_index(arc.a(), m);
  std::int64_t end = floor_index(arc.b(), m);
  if (!(arc.a() < arc.b())) end += m;
  const std::int64_t units = std::min<std::int64_t>(end - start, m - 1);
  if (units <= 0) return std::nullopt;
  return std::pair{static_cast<std::uint32_t>(start % m), static_cast<std::uint32_t>(units)};
}

}  // namespace

std::optional<TorusBox> round_inner(const TorusBox& box, std::uint32_t m) {
  std::vector<TorusInterval> arcs;
  arcs.reserve(box.dim());
  for (const auto& arc : box.arcs()) {
    auto g = inner_arc(arc, m);
    if (!g) return std::nullopt;
    arcs.emplace_back(grid_value(g->first, m), grid_value((g->first + g->second) % m, m));
  }
  return TorusBox(std::move(arcs));
}

NetTooLarge::NetTooLarge(std::uint64_t size, std::uint64_t cap)
    : std::runtime_error("net would hold " + std::to_string(size) + " elements, cap is " + std::to_string(cap)),
      size_(size),
      cap_(cap) {}

Box Net::box(std::size_t i) const {
  if (kind_ != BoxKind::cube) throw std::logic_error("box() on a torus net");
  auto k = key(i);
  std::vector<double> lo(dim()), hi(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    lo[a] = grid_value(k[2 * a], grid_m());
    hi[a] = grid_value(k[2 * a + 1], grid_m());
  }
  return Box(std::move(lo), std::move(hi));
}

TorusBox Net::torus_box(std::size_t i) const {
  if (kind_ != BoxKind::torus) throw std::logic_error("torus_box() on a cube net");
  auto k = key(i);
  std::vector<TorusInterval> arcs;
  arcs.reserve(dim());
  for (std::size_t a = 0; a < dim(); ++a) arcs.emplace_back(grid_value(k[2 * a], grid_m()), grid_value(k[2 * a + 1], grid_m()));
  return TorusBox(std::move(arcs));
}

double Net::element_volume(std::size_t i) const {
  auto k = key(i);
  const std::uint32_t m = grid_m();
  std::uint64_t prod = 1;
  for (std::size_t a = 0; a < dim(); ++a) {
    const std::uint32_t j = k[2 * a], e = k[2 * a + 1];
    prod *= kind_ == BoxKind::cube ? e - j : (e + m - j) % m;
  }
  return static_cast<double>(prod) / grid_volume_scale(params_);
}

std::optional<std::size_t> Net::find(Key key) const {
  const std::size_t w = 2 * dim();
  if (key.size() != w) return std::nullopt;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto k = this->key(mid);
    if (std::lexicographical_compare(k.begin(), k.end(), key.begin(), key.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size() && std::equal(key.begin(), key.end(), this->key(lo).begin())) return lo;
  return std::nullopt;
}

std::vector<std::size_t> Net::missed_by(const PointSet& ps) const {
  if (ps.dim() != dim()) throw std::invalid_argument("point set dimension differs from net dimension");
  const std::size_t d = dim(), n = ps.size();
  const std::uint32_t m = grid_m();
  // Per point and axis: le = max{j : j/m <= x}, lt = max{j : j/m < x}.
  std::vector<std::int32_t> le(n * d), lt(n * d);
  const bool cube = kind_ == BoxKind::cube;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t a = 0; a < d; ++a) {
      const double x = !cube && ps[p][a] == 1.0 ? 0.0 : ps[p][a];
      le[p * d + a] = static_cast<std::int32_t>(floor_index(x, m));
      lt[p * d + a] = below_index(x, m);
    }
  }
  auto inside = [&](std::size_t e, std::size_t p) {
    auto k = key(e);
    for (std::size_t a = 0; a < d; ++a) {
      const std::int32_t j = k[2 * a], h = k[2 * a + 1];
      const std::int32_t pl = le[p * d + a];
      bool in;
      if (cube) {
        in = j <= pl && h > pl;
      } else if (j < h) {
        in = j <= lt[p * d + a] && h > pl;
      } else {
        in = h > pl || j <= lt[p * d + a];
      }
      if (!in) return false;
    }
    return true;
  };

  std::vector<std::uint8_t> missed(size(), 0);
  parallel_chunks(size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      bool hit = false;
      for (std::size_t p = 0; p < n && !hit; ++p) hit = inside(i, p);
      missed[i] = hit ? 0 : 1;
    }
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < missed.size(); ++i)
    if (missed[i]) out.push_back(i);
  return out;
}

Net Net::without(std::size_t i) const {
  Net copy = *this;
  const std::size_t w = 2 * dim();
  copy.keys_.erase(copy.keys_.begin() + static_cast<std::ptrdiff_t>(i * w),
                   copy.keys_.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
  return copy;
}

std::uint64_t count_net(const NetParams& params, BoxKind kind, std::uint64_t stop_after) {
  params.validate();
  const std::uint32_t m = params.grid_m;
  const double scale = grid_volume_scale(params);
  // Length classes per axis and how many intervals have each length.
  const std::uint32_t max_len = kind == BoxKind::cube ? m : m - 1;
  auto multiplicity = [&](std::uint32_t len) -> std::uint64_t { return kind == BoxKind::cube ? m - len + 1 : m; };

  std::uint64_t total = 0;
  bool stopped = false;
  auto rec = [&](auto&& self, std::size_t axis, std::uint64_t prod, std::uint64_t weight) -> void {
    if (stopped) return;
    if (axis == params.dim) {
      total += weight;
      if (total > stop_after) stopped = true;
      return;
    }
    // Largest attainable product from the remaining axes, to prune early.
    double rest = 1.0;
    for (std::size_t a = axis + 1; a < params.dim; ++a) rest *= max_len;
    for (std::uint32_t len = max_len; len >= 1; --len) {
      if (static_cast<double>(prod) * len * rest / scale < params.delta) break;
      self(self, axis + 1, prod * len, weight * multiplicity(len));
      if (stopped) return;
    }
  };
  rec(rec, 0, 1, 1);
  return total;
}

Net build_net(const NetParams& params, BoxKind kind, std::uint64_t cap) {
  params.validate();
  const std::uint64_t count = count_net(params, kind, cap);
  if (count > cap) throw NetTooLarge(count, cap);

  Net net(params, kind);
  const auto intervals = axis_intervals(kind, params.grid_m);
  const std::uint32_t max_len = kind == BoxKind::cube ? params.grid_m : params.grid_m - 1;
  const double scale = grid_volume_scale(params);
  const std::size_t d = params.dim;
  net.keys_.reserve(count * 2 * d);

  // Depth-first over axes in lexicographic interval order, which emits the
  // elements already sorted.
  std::vector<std::uint16_t> key(2 * d);
  auto rec = [&](auto&& self, std::size_t axis, std::uint64_t prod) -> void {
    if (axis == d) {
      if (admits(prod, scale, params.delta)) net.keys_.insert(net.keys_.end(), key.begin(), key.end());
      return;
    }
    double rest = 1.0;
    for (std::size_t a = axis + 1; a < d; ++a) rest *= max_len;
    for (const auto& iv : intervals) {
      if (static_cast<double>(prod) * iv.length * rest / scale < params.delta) continue;
      key[2 * axis] = iv.j;
      key[2 * axis + 1] = iv.k;
      self(self, axis + 1, prod * iv.length);
    }
  };
  rec(rec, 0, 1);
  return net;
}

std::uint32_t resolution_for_min_size(std::size_t dim, double eps, double delta, BoxKind kind, double min_size,
                                      std::uint64_t cap) {
  NetParams p = make_net_params(dim, eps, delta);
  while (true) {
    const std::uint64_t n = count_net(p, kind, cap);
    if (n > cap) throw NetTooLarge(n, cap);
    if (static_cast<double>(n) >= min_size) return p.grid_m;
    if (++p.grid_m > kMaxGridResolution) throw std::invalid_argument("required grid resolution exceeds 65535");
  }
}

NetVerification verify_net(const Net& net, std::uint64_t trials, std::uint64_t seed) {
  const auto& p = net.params();
  const std::size_t d = p.dim;
  const std::uint32_t m = p.grid_m;
  Rng rng(seed);
  NetVerification report;
  std::vector<std::uint16_t> key(2 * d);

  while (report.samples < trials) {
    std::vector<double> u(d), v(d);
    for (std::size_t a = 0; a < d; ++a) {
      u[a] = rng.uniform();
      v[a] = rng.uniform();
    }
    if (net.kind() == BoxKind::cube) {
      std::vector<double> lo(d), hi(d);
      for (std::size_t a = 0; a < d; ++a) {
        lo[a] = std::min(u[a], v[a]);
        hi[a] = std::max(u[a], v[a]);
      }
      Box b(std::move(lo), std::move(hi));
      if (b.volume() < p.eps) continue;
      ++report.samples;
      const Box r = round_inner(b, m);
      bool ok = r.volume() > 0.0;
      if (ok) {
        for (std::size_t a = 0; a < d; ++a) {
          key[2 * a] = static_cast<std::uint16_t>(ceil_index(r.lo()[a], m));
          key[2 * a + 1] = static_cast<std::uint16_t>(floor_index(r.hi()[a], m));
        }
        auto idx = net.find(key);
        ok = idx && net.element_volume(*idx) >= p.delta;
      }
      if (!ok) {
        ++report.violations;
        if (report.cube_witnesses.size() < kMaxWitnesses) report.cube_witnesses.push_back(b);
      }
    } else {
      std::vector<TorusInterval> arcs;
      arcs.reserve(d);
      bool skip = false;
      for (std::size_t a = 0; a < d; ++a) {
        if (u[a] == v[a]) skip = true;
        arcs.emplace_back(u[a], v[a]);
      }
      if (skip) continue;
      TorusBox b(std::move(arcs));
      if (b.volume() < p.eps) continue;
      ++report.samples;
      bool ok = false;
      if (auto r = round_inner(b, m)) {
        for (std::size_t a = 0; a < d; ++a) {
          key[2 * a] = static_cast<std::uint16_t>(floor_index((*r)[a].a(), m));
          key[2 * a + 1] = static_cast<std::uint16_t>(floor_index((*r)[a].b(), m));
        }
        auto idx = net.find(key);
        ok = idx && net.element_volume(*idx) >= p.delta;
      }
      if (!ok) {
        ++report.violations;
        if (report.torus_witnesses.size() < kMaxWitnesses) report.torus_witnesses.push_back(b);
      }
    }
  }
  return report;
}

void write_net(std::ostream& out, const Net& net) {
  const std::uint32_t m = net.grid_m();
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto k = net.key(i);
    for (std::size_t a = 0; a < net.dim(); ++a) {
      if (a) out << ';';
      out << format_double(grid_value(k[2 * a], m)) << ',' << format_double(grid_value(k[2 * a + 1], m));
    }
    out << '\n';
  }
}

}  // namespace disperse
