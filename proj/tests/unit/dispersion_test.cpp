#include "disperse/dispersion.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <utility>

#include "disperse/construct.hpp"
#include "disperse/rng.hpp"

namespace disperse {
namespace {

double norm(double x, bool torus) { return torus && x == 1.0 ? 0.0 : x; }

// Every combination of candidate faces per axis, tested point by point.
double brute_force(const PointSet& ps, bool torus) {
  const std::size_t d = ps.dim(), n = ps.size();
  std::vector<std::vector<std::pair<double, double>>> iv(d);
  for (std::size_t a = 0; a < d; ++a) {
    std::set<double> vs;
    for (std::size_t i = 0; i < n; ++i) vs.insert(norm(ps[i][a], torus));
    if (!torus) {
      vs.insert(0.0);
      vs.insert(1.0);
    } else if (vs.empty()) {
      vs.insert(0.0);
    }
    for (double x : vs)
      for (double y : vs)
        if (torus || x < y) iv[a].emplace_back(x, y);
  }
  double best = 0.0;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    bool empty = true;
    for (std::size_t i = 0; i < n && empty; ++i) {
      bool in = true;
      for (std::size_t a = 0; a < d && in; ++a) {
        const double x = norm(ps[i][a], torus);
        auto [lo, hi] = iv[a][idx[a]];
        if (lo < hi) in = lo < x && x < hi;
        else if (hi < lo) in = x > lo || x < hi;
        else in = x != lo;
      }
      empty = !in;
    }
    if (empty) {
      std::vector<double> sides;
      for (std::size_t a = 0; a < d; ++a) {
        auto [lo, hi] = iv[a][idx[a]];
        sides.push_back(lo < hi ? hi - lo : hi < lo ? 1.0 - (lo - hi) : 1.0);
      }
      best = std::max(best, product_of_sides(sides));
    }
    std::size_t a = 0;
    while (a < d && ++idx[a] == iv[a].size()) idx[a++] = 0;
    if (a == d) break;
  }
  return best;
}

PointSet random_set(Rng& rng, std::size_t d, std::size_t n, bool on_grid) {
  std::vector<double> v(n * d);
  for (auto& x : v) x = on_grid ? static_cast<double>(rng.below(5)) / 4 : rng.uniform();
  return PointSet(d, std::move(v));
}

TEST(Exact, MatchesBruteForce) {
  for (std::uint64_t t = 0; t < 800; ++t) {
    Rng rng(t);
    const std::size_t d = 1 + rng.below(3);
    const std::size_t n = rng.below(d == 3 ? 8 : 12);
    auto ps = random_set(rng, d, n, rng.below(2) == 1);
    for (auto kind : {BoxKind::cube, BoxKind::torus}) {
      auto r = exact_dispersion(ps, kind);
      ASSERT_EQ(r.value, brute_force(ps, kind == BoxKind::torus)) << "case " << t << " " << to_string(kind);
      ASSERT_TRUE(witness_is_empty(r, ps)) << "case " << t;
      ASSERT_TRUE(r.exact);
    }
  }
}

TEST(Exact, EmptySet) {
  auto r = largest_empty_box(PointSet(2));
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(std::get<Box>(r.witness), Box::unit(2));
  EXPECT_EQ(largest_empty_torus_box(PointSet(3)).value, 1.0);
}

TEST(Exact, CenterPoint) {
  PointSet ps(2, {0.5, 0.5});
  auto r = largest_empty_box(ps);
  EXPECT_EQ(r.value, 0.5);
  EXPECT_EQ(std::get<Box>(r.witness).volume(), 0.5);
}

TEST(Exact, TorusSinglePointIsDegenerate) {
  PointSet ps(3, {0.2, 0.7, 0.4});
  auto r = largest_empty_torus_box(ps);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(std::get<TorusBox>(r.witness).degenerate());
}

TEST(Exact, TorusTwoPointsOnCircle) {
  PointSet ps(1, {0.0, 0.5});
  EXPECT_EQ(largest_empty_torus_box(ps).value, 0.5);
}

TEST(Exact, WallPointsDoNotBlock) {
  PointSet ps(2, {1.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(largest_empty_box(ps).value, 1.0);
}

TEST(Exact, CapsThrow) {
  Rng rng(1);
  auto big = random_set(rng, 2, 300, false);
  EXPECT_THROW(largest_empty_box(big), ExactCapExceeded);
  auto high = random_set(rng, 4, 5, false);
  EXPECT_THROW(largest_empty_torus_box(high), ExactCapExceeded);
  EXPECT_NO_THROW(largest_empty_box(high, ExactLimits{4, 256}));
}

TEST(Exact, NotBelowOracle) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    Rng rng(100 + t);
    auto ps = random_set(rng, 2, 6, false);
    for (auto kind : {BoxKind::cube, BoxKind::torus}) {
      const double exact = exact_dispersion(ps, kind).value;
      for (std::uint32_t g : {5u, 16u, 50u}) EXPECT_LE(grid_oracle(ps, g, kind), exact);
    }
  }
}

TEST(Exact, MonotoneUnderInsertion) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng(200 + t);
    const std::size_t d = 1 + t % 3;
    auto ps = random_set(rng, d, 10, t % 2 == 0);
    auto more = ps;
    more.push_back(random_set(rng, d, 1, false)[0]);
    for (auto kind : {BoxKind::cube, BoxKind::torus})
      EXPECT_LE(exact_dispersion(more, kind).value, exact_dispersion(ps, kind).value);
  }
}

TEST(Exact, TorusAtLeastCube) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    Rng rng(300 + t);
    auto ps = random_set(rng, 1 + t % 3, 1 + t % 15, t % 3 == 0);
    EXPECT_GE(largest_empty_torus_box(ps).value, largest_empty_box(ps).value - 1e-12);
  }
}

TEST(Exact, AxisPermutationInvariance) {
  for (std::uint64_t t = 0; t < 40; ++t) {
    Rng rng(400 + t);
    auto ps = random_set(rng, 3, 12, t % 2 == 1);
    // (x, y, z) -> (z, x, y)
    PointSet rot(3);
    for (std::size_t i = 0; i < ps.size(); ++i) rot.push_back(std::vector<double>{ps[i][2], ps[i][0], ps[i][1]});
    for (auto kind : {BoxKind::cube, BoxKind::torus}) {
      auto a = exact_dispersion(ps, kind), b = exact_dispersion(rot, kind);
      EXPECT_EQ(a.value, b.value);
      EXPECT_TRUE(witness_is_empty(b, rot));
    }
  }
}

TEST(Exact, Deterministic) {
  auto ps = sample_uniform(120, 3, 8);
  auto a = largest_empty_box(ps), b = largest_empty_box(ps);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Oracle, Examples) {
  EXPECT_EQ(grid_oracle(PointSet(2), 7, BoxKind::cube), 1.0);
  EXPECT_EQ(grid_oracle(PointSet(2, {0.5, 0.5}), 4, BoxKind::cube), 0.5);
  Rng rng(5);
  auto ps = random_set(rng, 2, 8, false);
  for (auto kind : {BoxKind::cube, BoxKind::torus})
    for (std::uint32_t k : {2u, 5u, 20u}) EXPECT_GE(grid_oracle(ps, 2 * k, kind), grid_oracle(ps, k, kind));
}

TEST(Oracle, WorkCap) {
  Rng rng(6);
  auto ps = random_set(rng, 3, 20, false);
  EXPECT_THROW(grid_oracle(ps, 400, BoxKind::cube, 1000), ExactCapExceeded);
}

TEST(Estimate, EmptySetIsOne) {
  auto r = estimate_dispersion(PointSet(3), 1, 2, BoxKind::cube);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_FALSE(r.exact);
}

TEST(Estimate, LowerBoundAndRunningMax) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(500 + t);
    auto ps = random_set(rng, 2, 15, false);
    for (auto kind : {BoxKind::cube, BoxKind::torus}) {
      const double exact = exact_dispersion(ps, kind).value;
      auto few = estimate_dispersion(ps, 50, t, kind);
      auto many = estimate_dispersion(ps, 500, t, kind);
      EXPECT_LE(many.value, exact + 1e-12);
      EXPECT_GE(many.value, few.value);
      EXPECT_TRUE(witness_is_empty(many, ps));
    }
  }
}

}  // namespace
}  // namespace disperse
