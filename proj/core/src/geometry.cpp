#include "disperse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace disperse {
namespace {

void check_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("coordinate " + std::to_string(x) + " outside [0,1]");
  }
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                                ", got " + std::to_string(got));
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("point dimension must be >= 1");
  for (double x : coords_) check_unit(x);
}

PointSet::PointSet(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw std::invalid_argument("point set dimension must be >= 1");
}

PointSet::PointSet(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), coords_(std::move(row_major)) {
  if (dim_ == 0) throw std::invalid_argument("point set dimension must be >= 1");
  if (coords_.size() % dim_ != 0) {
    throw std::invalid_argument("coordinate count is not a multiple of the dimension");
  }
  for (double x : coords_) check_unit(x);
}

PointSet::PointSet(std::size_t dim, const std::vector<Point>& points) : PointSet(dim) {
  coords_.reserve(points.size() * dim);
  for (const auto& p : points) push_back(p.coords());
}

Point PointSet::point(std::size_t i) const {
  auto p = (*this)[i];
  return Point(std::vector<double>(p.begin(), p.end()));
}

void PointSet::push_back(std::span<const double> p) {
  check_dim(dim_, p.size());
  for (double x : p) check_unit(x);
  coords_.insert(coords_.end(), p.begin(), p.end());
}

std::size_t PointSet::distinct_count() const {
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = (*this)[i];
    seen.emplace(p.begin(), p.end());
  }
  return seen.size();
}

PointSet PointSet::deduplicated() const {
  PointSet out(dim_);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = (*this)[i];
    if (seen.emplace(p.begin(), p.end()).second) out.coords_.insert(out.coords_.end(), p.begin(), p.end());
  }
  return out;
}

double product_of_sides(std::span<const double> sides) {
  std::vector<double> s(sides.begin(), sides.end());
  std::sort(s.begin(), s.end());
  double v = 1.0;
  for (double x : s) v *= x;
  return v;
}

Box::Box(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty()) throw std::invalid_argument("box dimension must be >= 1");
  check_dim(lo_.size(), hi_.size());
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    check_unit(lo_[i]);
    check_unit(hi_[i]);
    if (lo_[i] > hi_[i]) throw std::invalid_argument("box with lo > hi");
  }
}

Box Box::unit(std::size_t dim) { return Box(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)); }

double Box::volume() const {
  std::vector<double> sides(dim());
  for (std::size_t i = 0; i < dim(); ++i) sides[i] = side(i);
  return product_of_sides(sides);
}

bool Box::contains(std::span<const double> p) const {
  check_dim(dim(), p.size());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(lo_[i] <= p[i] && p[i] < hi_[i])) return false;
  }
  return true;
}

bool Box::interior_contains(std::span<const double> p) const {
  check_dim(dim(), p.size());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!(lo_[i] < p[i] && p[i] < hi_[i])) return false;
  }
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = lo_[i] + 0.5 * (hi_[i] - lo_[i]);
  return c;
}

TorusInterval::TorusInterval(double a, double b) : a_(a == 1.0 ? 0.0 : a), b_(b == 1.0 ? 0.0 : b) {
  check_unit(a);
  check_unit(b);
}

double TorusInterval::length() const noexcept {
  if (a_ < b_) return b_ - a_;
  if (b_ < a_) return 1.0 - (a_ - b_);
  return 1.0;
}

bool TorusInterval::contains(double x) const noexcept {
  if (x == 1.0) x = 0.0;
  if (a_ < b_) return a_ < x && x < b_;
  if (b_ < a_) return x < b_ || x > a_;
  return x != a_;
}

double TorusInterval::midpoint() const noexcept {
  double m = a_ + 0.5 * length();
  if (m >= 1.0) m -= 1.0;
  return m;
}

TorusBox::TorusBox(std::vector<TorusInterval> arcs) : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw std::invalid_argument("torus box dimension must be >= 1");
}

double TorusBox::volume() const {
  std::vector<double> sides(dim());
  for (std::size_t i = 0; i < dim(); ++i) sides[i] = arcs_[i].length();
  return product_of_sides(sides);
}

bool TorusBox::contains(std::span<const double> p) const {
  check_dim(dim(), p.size());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!arcs_[i].contains(p[i])) return false;
  }
  return true;
}

bool TorusBox::degenerate() const {
  return std::any_of(arcs_.begin(), arcs_.end(), [](const auto& a) { return a.degenerate(); });
}

std::vector<double> TorusBox::center() const {
  std::vector<double> c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = arcs_[i].midpoint();
  return c;
}

bool contains(const Box& box, std::span<const double> p) { return box.contains(p); }
bool contains(const TorusBox& box, std::span<const double> p) { return box.contains(p); }

bool intersects(const Box& box, const PointSet& ps) {
  check_dim(box.dim(), ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (box.contains(ps[i])) return true;
  }
  return false;
}

bool intersects(const TorusBox& box, const PointSet& ps) {
  check_dim(box.dim(), ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (box.contains(ps[i])) return true;
  }
  return false;
}

bool interior_intersects(const Box& box, const PointSet& ps) {
  check_dim(box.dim(), ps.dim());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (box.interior_contains(ps[i])) return true;
  }
  return false;
}

}  // namespace disperse
