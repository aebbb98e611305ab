#pragma once

// Points and axis-parallel boxes in the unit cube [0,1]^d and on the torus.
//
// Boundary conventions:
//   * cube boxes are half-open products [lo_i, hi_i);
//   * torus arcs (a, b) are open: a < x < b when a < b, and
//     x not in [b, a] when b < a (the wrapped complement);
//   * a == b denotes the circle minus the single coordinate a, length 1.
//     It only appears as a supremum witness, never as a net element.
//   * on the torus the coordinate 1 is the same point as 0.

#include <cstddef>
#include <span>
#include <vector>

namespace disperse {

class Point {
public:
  explicit Point(std::vector<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Point&, const Point&) = default;

private:
  std::vector<double> coords_;
};

// Finite point set, stored row-major so a point is a contiguous span.
// Duplicates are allowed; distinct_count() reports how many are unique.
class PointSet {
public:
  explicit PointSet(std::size_t dim);
  PointSet(std::size_t dim, std::vector<double> row_major);
  PointSet(std::size_t dim, const std::vector<Point>& points);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  Point point(std::size_t i) const;
  std::span<const double> data() const noexcept { return coords_; }

  void push_back(std::span<const double> p);
  void push_back(const Point& p) { push_back(p.coords()); }

  std::size_t distinct_count() const;
  // Same points in the same order with later duplicates dropped.
  PointSet deduplicated() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

private:
  std::size_t dim_;
  std::vector<double> coords_;
};

class Box {
public:
  Box(std::vector<double> lo, std::vector<double> hi);
  static Box unit(std::size_t dim);

  std::size_t dim() const noexcept { return lo_.size(); }
  std::span<const double> lo() const noexcept { return lo_; }
  std::span<const double> hi() const noexcept { return hi_; }
  double side(std::size_t i) const { return hi_[i] - lo_[i]; }

  double volume() const;
  // Half-open membership: lo_i <= x_i < hi_i on every axis.
  bool contains(std::span<const double> p) const;
  // Open membership lo_i < x_i < hi_i; the emptiness notion behind the
  // dispersion supremum (faces through a point exclude that point).
  bool interior_contains(std::span<const double> p) const;
  std::vector<double> center() const;

  friend bool operator==(const Box&, const Box&) = default;
  friend auto operator<=>(const Box& a, const Box& b) = default;

private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

class TorusInterval {
public:
  TorusInterval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  bool wrapped() const noexcept { return b_ < a_; }
  bool degenerate() const noexcept { return a_ == b_; }

  double length() const noexcept;
  bool contains(double x) const noexcept;
  // Point halfway along the arc, reduced into [0,1).
  double midpoint() const noexcept;

  friend bool operator==(const TorusInterval&, const TorusInterval&) = default;
  friend auto operator<=>(const TorusInterval&, const TorusInterval&) = default;

private:
  double a_;
  double b_;
};

class TorusBox {
public:
  explicit TorusBox(std::vector<TorusInterval> arcs);

  std::size_t dim() const noexcept { return arcs_.size(); }
  std::span<const TorusInterval> arcs() const noexcept { return arcs_; }
  const TorusInterval& operator[](std::size_t i) const { return arcs_[i]; }

  double volume() const;
  bool contains(std::span<const double> p) const;
  bool degenerate() const;
  std::vector<double> center() const;

  friend bool operator==(const TorusBox&, const TorusBox&) = default;
  friend auto operator<=>(const TorusBox&, const TorusBox&) = default;

private:
  std::vector<TorusInterval> arcs_;
};

// Product of side lengths, multiplied in ascending order so the result does
// not depend on the axis order.
double product_of_sides(std::span<const double> sides);

inline double volume(const Box& b) { return b.volume(); }
inline double volume(const TorusBox& b) { return b.volume(); }

// Throw std::invalid_argument on a dimension mismatch.
bool contains(const Box& box, std::span<const double> p);
bool contains(const TorusBox& box, std::span<const double> p);
inline bool contains(const Box& box, const Point& p) { return contains(box, p.coords()); }
inline bool contains(const TorusBox& box, const Point& p) { return contains(box, p.coords()); }

bool intersects(const Box& box, const PointSet& ps);
bool intersects(const TorusBox& box, const PointSet& ps);
// True iff some point lies in the open interior of the box.
bool interior_intersects(const Box& box, const PointSet& ps);

}  // namespace disperse
