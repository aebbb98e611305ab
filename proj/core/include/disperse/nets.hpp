#pragma once

// Finite delta-approximations of the family of boxes with volume >= eps.
//
// A net here is every grid box (endpoints j/m) whose volume is at least
// delta. Any box B of volume >= eps has all sides >= eps, and rounding its
// endpoints inward to the grid loses at most 2/m per side, so
//
//     vol(round_inner(B)) >= eps * (1 - 2/(m*eps))^d,
//
// and choosing m to make the right side >= delta certifies the net.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "disperse/geometry.hpp"

namespace disperse {

enum class BoxKind { cube, torus };

const char* to_string(BoxKind kind) noexcept;

inline constexpr std::uint64_t kDefaultNetCap = 100'000'000;
inline constexpr std::uint32_t kMaxGridResolution = 65535;

struct NetParams {
  std::size_t dim = 1;
  double eps = 1.0;
  double delta = 0.5;
  std::uint32_t grid_m = 4;

  // eps * (1 - 2/(grid_m*eps))^dim, the guaranteed volume of a rounded box.
  double guaranteed_volume() const;
  // Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  friend bool operator==(const NetParams&, const NetParams&) = default;
};

// Smallest m >= ceil(2/eps) + 1 with eps * (1 - 2/(m*eps))^d >= delta.
// Requires 0 < delta < eps <= 1 (delta == eps has no finite solution).
std::uint32_t grid_resolution(std::size_t dim, double eps, double delta);

// NetParams with grid_m = grid_resolution(dim, eps, delta).
NetParams make_net_params(std::size_t dim, double eps, double delta);

// Grid value j/m; every grid coordinate in the library is computed by this.
double grid_value(std::uint32_t j, std::uint32_t m) noexcept;

// Largest box with grid endpoints inside `box`. A side holding no whole grid
// cell collapses to [lo, lo); the caller decides what zero volume means.
Box round_inner(const Box& box, std::uint32_t m);
// Torus analogue; nullopt when some arc collapses to nothing. Arcs are capped
// at (m-1)/m so the result is never a degenerate full circle.
std::optional<TorusBox> round_inner(const TorusBox& box, std::uint32_t m);

class NetTooLarge : public std::runtime_error {
public:
  NetTooLarge(std::uint64_t size, std::uint64_t cap);
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t cap() const noexcept { return cap_; }

private:
  std::uint64_t size_;
  std::uint64_t cap_;
};

// Elements are stored as grid index pairs (j_i, k_i) per axis, sorted
// lexicographically. For the cube the pair means [j/m, k/m); for the torus it
// is the arc from j/m to k/m with j, k in [0, m) and j != k.
class Net {
public:
  using Key = std::span<const std::uint16_t>;

  const NetParams& params() const noexcept { return params_; }
  BoxKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return params_.dim; }
  std::uint32_t grid_m() const noexcept { return params_.grid_m; }
  std::size_t size() const noexcept { return keys_.size() / (2 * dim()); }

  Key key(std::size_t i) const { return {keys_.data() + 2 * dim() * i, 2 * dim()}; }
  Box box(std::size_t i) const;
  TorusBox torus_box(std::size_t i) const;
  // Volume in grid units: prod(lengths) / m^d.
  double element_volume(std::size_t i) const;

  std::optional<std::size_t> find(Key key) const;

  // Indices of elements containing no point of `ps`, ascending.
  std::vector<std::size_t> missed_by(const PointSet& ps) const;
  bool pierced_by(const PointSet& ps) const { return missed_by(ps).empty(); }

  // Copy with element `i` removed.
  Net without(std::size_t i) const;

  friend Net build_net(const NetParams&, BoxKind, std::uint64_t);
  friend bool operator==(const Net&, const Net&) = default;

private:
  Net(NetParams params, BoxKind kind) : params_(params), kind_(kind) {}

  NetParams params_;
  BoxKind kind_;
  std::vector<std::uint16_t> keys_;
};

// Exact element count of build_net(params, kind) without enumerating it.
// Stops counting once the total exceeds `stop_after`.
std::uint64_t count_net(const NetParams& params, BoxKind kind,
                        std::uint64_t stop_after = UINT64_MAX);

// Throws NetTooLarge when the element count exceeds `cap`.
Net build_net(const NetParams& params, BoxKind kind, std::uint64_t cap = kDefaultNetCap);

// Smallest m >= grid_resolution(...) whose net has at least `min_size`
// elements. Finer grids keep the delta-approximation property, so this is how
// a caller meets a lower bound on |N| such as delta*|N| >= e.
std::uint32_t resolution_for_min_size(std::size_t dim, double eps, double delta, BoxKind kind,
                                      double min_size, std::uint64_t cap = kDefaultNetCap);

struct NetVerification {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  // First few boxes whose inner rounding was missing or too small.
  std::vector<Box> cube_witnesses;
  std::vector<TorusBox> torus_witnesses;
};

// Rejection-samples `trials` boxes of volume >= eps and checks that each one's
// inner rounding is a net element of volume >= delta.
NetVerification verify_net(const Net& net, std::uint64_t trials, std::uint64_t seed);

// One element per line: "lo_1,hi_1;lo_2,hi_2;..." (torus: "a_1,b_1;...").
void write_net(std::ostream& out, const Net& net);

}  // namespace disperse
