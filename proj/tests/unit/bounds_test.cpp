#include "disperse/bounds.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "disperse/rng.hpp"

namespace disperse {
namespace {

using Big = boost::multiprecision::cpp_dec_float_50;
constexpr double kE = std::numbers::e;

void expect_rel(double got, double want, double tol = 1e-9) {
  EXPECT_LE(std::abs(got - want), tol * std::abs(want)) << got << " vs " << want;
}

const BoundValue& entry(const std::vector<BoundValue>& table, const std::string& name) {
  for (const auto& b : table)
    if (b.name == name) return b;
  throw std::out_of_range(name);
}

// Reference values computed with 40-digit arithmetic.
TEST(Bounds, FrozenValues) {
  expect_rel(thm_main_cube(0.5, 2).value, 177.41141496415032831);
  expect_rel(thm_main_torus(0.5, 2).value, 166.39219754538894871);
  expect_rel(lemma1_bound(1000, 0.1), 207.23265836946411156);
  expect_rel(lemma2_bound(1000, 0.1), 59.914645471079819869);
  expect_rel(entry(prior_bounds(0.3, 2), "kmk_upper").value, 11.049629462081452786);
  expect_rel(entry(prior_bounds(0.3, 17), "kmk_upper").value, 11.049629462081452786);
  const double g = 1 / std::log(2.0);
  expect_rel(prop_net_cardinality(0.5, 2, g, BoxKind::cube), 1096.9518737914301793);
  expect_rel(prop_net_cardinality(0.5, 2, g, BoxKind::torus), 2419.8440625491237986);
  expect_rel(piecewise_upper_threshold(10), 0.48322573033379508697);
}

TEST(Bounds, ClosedFormSpots) {
  const double eps_cube = 8 / std::exp(kE);
  expect_rel(thm_main_cube(eps_cube, 2).value, 16 * kE * 2 / eps_cube);
  expect_rel(thm_main_cube(eps_cube, 2).value, 164.77422269886449425);
  const double eps_torus = 1 / std::exp(kE - 1);
  expect_rel(thm_main_torus(eps_torus, 2).value, 8 * kE * 2 * (1 + std::log(4.0)) / eps_torus);
  expect_rel(thm_main_torus(eps_torus, 2).value, 578.60048854038467700);
}

TEST(Bounds, DomainErrors) {
  EXPECT_THROW(thm_main_cube(0.5, 1), std::domain_error);
  EXPECT_THROW(thm_main_cube(1.0, 2), std::domain_error);
  EXPECT_THROW(thm_main_torus(0.0, 2), std::domain_error);
  EXPECT_THROW(lemma1_bound(2, 0.1), std::domain_error);
  EXPECT_THROW(lemma2_bound(1000, 0.4), std::domain_error);
  EXPECT_THROW(lemma2_bound(27, 0.1), std::domain_error);
  EXPECT_THROW(theorem_params(1.0), std::domain_error);
  EXPECT_THROW(prop_net_cardinality(0.5, 2, 0.0, BoxKind::cube), std::domain_error);
}

TEST(Bounds, Monotonicity) {
  for (std::size_t d = 2; d <= 10; ++d) {
    double prev = INFINITY;
    for (double eps = 0.05; eps < 1; eps += 0.05) {
      const double v = thm_main_cube(eps, d).value;
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
  for (double eps : {0.01, 0.2, 0.7}) {
    for (std::size_t d = 2; d < 30; ++d) EXPECT_LT(thm_main_torus(eps, d).value, thm_main_torus(eps, d + 1).value);
  }
  for (double eps : {0.05, 0.2}) {
    const double gamma = std::min(1.0, theorem_params(eps).gamma);
    for (std::size_t d = 2; d < 12; ++d)
      for (auto kind : {BoxKind::cube, BoxKind::torus})
        EXPECT_LT(prop_net_cardinality(eps, d, gamma, kind), prop_net_cardinality(eps, d + 1, gamma, kind));
  }
}

TEST(Bounds, TorusVersusCube) {
  for (double eps = 0.02; eps < 1; eps += 0.07) {
    for (std::size_t d = 2; d <= 40; d += 3) {
      if (std::log(2.0 * d) >= std::log(std::log(8 / eps)))
        EXPECT_GE(thm_main_torus(eps, d).value, 0.5 * thm_main_cube(eps, d).value);
      const double gamma = theorem_params(eps).gamma;
      if (2.0 * d >= std::log(kE / std::pow(eps, 1 + gamma)))
        EXPECT_GE(prop_net_cardinality(eps, d, gamma, BoxKind::torus),
                  prop_net_cardinality(eps, d, gamma, BoxKind::cube));
    }
  }
}

TEST(Bounds, DispersionRate) {
  EXPECT_TRUE(thm_main_disp(8, 2).regime_ok);
  EXPECT_FALSE(thm_main_disp(7, 2).regime_ok);
  EXPECT_FALSE(thm_main_disp(8, 2).constant_free);
  EXPECT_DOUBLE_EQ(thm_main_disp(100, 3, 2.0).value, 2 * thm_main_disp(100, 3, 1.0).value);
  EXPECT_DOUBLE_EQ(thm_main_disp(100, 3, 2.0, BoxKind::torus).value,
                   2 * thm_main_disp(100, 3, 1.0, BoxKind::torus).value);
  EXPECT_LT(thm_main_disp(1'000'000'000, 3).value, 1e-7);
  EXPECT_THROW(thm_main_disp(4, 2), std::domain_error);
  EXPECT_THROW(thm_main_disp(100, 2, 0.0), std::domain_error);
}

TEST(Bounds, Lemma2Boundary) {
  const double delta = 0.25, n = kE / delta;
  EXPECT_TRUE(lemma2_hypothesis(delta, n));
  expect_rel(lemma2_bound(n, delta), std::log(4 * kE) / delta);
  EXPECT_FALSE(lemma2_hypothesis(delta, n * (1 - 1e-9)));
  EXPECT_LE(lemma2_tight_bound(1000, 0.1), lemma2_bound(1000, 0.1));
}

TEST(Bounds, Dominance) {
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const double delta = 0.25 * std::pow(0.7, i);
    for (int j = 0; j < 10; ++j) {
      const double n = std::ceil(kE / delta) * std::pow(10.0, j * 0.6);
      ASSERT_TRUE(lemma2_hypothesis(delta, n));
      EXPECT_LE(lemma2_bound(n, delta), lemma1_bound(n, delta));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 200);
}

TEST(TheoremParams, Identity) {
  auto p = theorem_params(1 / kE);
  expect_rel(p.gamma, 1.0, 1e-12);
  expect_rel(p.delta, 1 / (4 * kE * kE), 1e-12);
  Rng rng(12);
  for (int i = 0; i < 20; ++i) {
    const double eps = 0.001 + 0.998 * rng.uniform();
    auto q = theorem_params(eps);
    expect_rel(std::pow(eps, 1 + q.gamma) * kE, eps, 1e-12);
    expect_rel(q.delta, eps / (4 * kE), 1e-15);
  }
  EXPECT_GT(theorem_params(0.999999).gamma, 1e5);
}

TEST(PriorBounds, TrivialRegime) {
  auto table = prior_bounds(0.6, 3);
  const auto& t = entry(table, "trivial_upper");
  EXPECT_TRUE(t.regime_ok);
  EXPECT_EQ(t.value, 1.0);
  for (const auto& b : table) {
    if (b.quantity == Quantity::cube && b.name != "trivial_upper" && b.name != "ll_upper") {
      EXPECT_FALSE(b.regime_ok) << b.name;
    }
  }
}

TEST(PriorBounds, RegimeEdges) {
  EXPECT_TRUE(entry(prior_bounds(0.25, 4), "tvv_lower").regime_ok);
  EXPECT_TRUE(entry(prior_bounds(0.125, 4), "tvv_lower").regime_ok);
  EXPECT_FALSE(entry(prior_bounds(0.12, 4), "tvv_lower").regime_ok);
  EXPECT_FALSE(entry(prior_bounds(0.25, 4), "ahr_lower").regime_ok);
  EXPECT_TRUE(entry(prior_bounds(0.2499, 4), "ahr_lower").regime_ok);
  EXPECT_TRUE(entry(prior_bounds(1.0 / 64, 2), "bc_lower").regime_ok);
  EXPECT_FALSE(entry(prior_bounds(1.0 / 63, 2), "bc_lower").regime_ok);
  EXPECT_FALSE(entry(prior_bounds(0.25, 2), "kmk_upper").regime_ok);
  EXPECT_TRUE(entry(prior_bounds(0.5, 2), "trivial_upper").regime_ok);
  EXPECT_FALSE(entry(prior_bounds(0.5, 2), "kmk_upper").regime_ok);
  EXPECT_TRUE(entry(prior_bounds(0.01, 2), "bc_upper").regime_ok == (0.01 < std::pow(2.0, -4.0)));
}

TEST(PriorBounds, ConstantsScale) {
  ConstantMap c{{"bc_upper", 3.0}, {"random_lower", 10.0}};
  auto base = prior_bounds(0.1, 5), scaled = prior_bounds(0.1, 5, c);
  expect_rel(entry(scaled, "bc_upper").value, 3 * entry(base, "bc_upper").value);
  EXPECT_EQ(entry(scaled, "bc_upper").c_used, 3.0);
  EXPECT_FALSE(entry(scaled, "bc_upper").constant_free);
  EXPECT_TRUE(entry(scaled, "bc_lower").constant_free);
  expect_rel(entry(scaled, "random_lower").value, std::max(10 / 0.1 * std::log(10.0), 5 / 0.2));
}

TEST(Piecewise, Branches) {
  EXPECT_GT(piecewise_upper_threshold(10), 0.4);
  EXPECT_EQ(best_known_piecewise(0.4, 10).branch, 2);
  EXPECT_EQ(best_known_piecewise(0.5, 10).branch, 1);
  EXPECT_EQ(best_known_piecewise(0.02, 2).branch, 2);
  EXPECT_EQ(best_known_piecewise(0.018, 2).branch, 3);
  EXPECT_EQ(best_known_piecewise(0.018, 2).bound.name, "best_known_branch3");
  expect_rel(best_known_piecewise(0.018, 2, 2.0).bound.value, 2 * 4 * std::log(2.0) / 0.018);
}

// Every formula against 50-digit arithmetic on a 10 x 5 grid.
TEST(Bounds, MultiprecisionCrosscheck) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const Big e = boost::math::constants::e<Big>();
  const double epsilons[] = {0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.45, 0.5, 0.7, 0.95};
  const std::size_t dims[] = {2, 3, 5, 10, 64};
  int points = 0;
  for (double eps_d : epsilons) {
    for (std::size_t d_int : dims) {
      const Big eps(eps_d), d(static_cast<double>(d_int));
      const auto gamma_d = theorem_params(eps_d).gamma;
      const Big gamma = 1 / log(1 / eps);
      expect_rel(gamma_d, gamma.convert_to<double>());
      expect_rel(thm_main_cube(eps_d, d_int).value, Big(16 * e * d * log(log(8 / eps)) / eps).convert_to<double>());
      expect_rel(thm_main_torus(eps_d, d_int).value,
                 Big(8 * e * d * (log(log(e / eps)) + log(2 * d)) / eps).convert_to<double>());
      const Big scaled = pow(eps, 1 + gamma);
      const Big cube = 7 * d * log(d) * pow((1 + 1 / gamma) * log(e / scaled), d) / scaled;
      const Big torus = 7 * d * log(d) * pow((1 + 1 / gamma) * 2 * d, d) / scaled;
      expect_rel(prop_net_cardinality(eps_d, d_int, gamma_d, BoxKind::cube), cube.convert_to<double>());
      expect_rel(prop_net_cardinality(eps_d, d_int, gamma_d, BoxKind::torus), torus.convert_to<double>());
      auto table = prior_bounds(eps_d, d_int);
      const Big inv = log(1 / eps);
      expect_rel(entry(table, "bc_upper").value, Big(d * d * log(d) / eps).convert_to<double>());
      expect_rel(entry(table, "bc_lower").value, Big(d / (e * eps)).convert_to<double>());
      expect_rel(entry(table, "ael_upper").value, Big(log(d) * inv / (eps * eps)).convert_to<double>());
      expect_rel(entry(table, "tvv_lower").value, Big(log(d) / (eps * eps * inv)).convert_to<double>());
      expect_rel(entry(table, "ahr_lower").value, Big(log(d) / log(Big(2)) / (8 * eps)).convert_to<double>());
      expect_rel(entry(table, "torus_lower").value, Big(d / eps).convert_to<double>());
      expect_rel(entry(table, "ll_torus_upper").value,
                 Big((d * log(2 * d) + log(e / eps)) / eps).convert_to<double>());
      const Big ll = (d * log(inv) + inv) / eps;
      if (eps_d < 0.3) expect_rel(entry(table, "ll_upper").value, ll.convert_to<double>());
      const Big rl = inv / eps > d / (2 * eps) ? Big(inv / eps) : Big(d / (2 * eps));
      expect_rel(entry(table, "random_lower").value, rl.convert_to<double>());
      const Big n = 1000000 * d;
      const Big delta = eps / (4 * e);
      expect_rel(lemma1_bound(n.convert_to<double>(), delta.convert_to<double>()),
                 Big(3 * log(n) / delta).convert_to<double>());
      expect_rel(lemma2_bound(n.convert_to<double>(), delta.convert_to<double>()),
                 Big(log(4 * delta * n) / delta).convert_to<double>());
      ++points;
    }
  }
  EXPECT_EQ(points, 50);
}

}  // namespace
}  // namespace disperse
