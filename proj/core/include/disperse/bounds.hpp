#pragma once

// Closed-form bounds on the inverse minimal dispersion N(eps, d), its torus
// analogue, and the piercing-set bounds they come from.
//
// Absolute constants that the literature leaves unspecified (C, c) are
// parameters defaulting to 1; such values carry constant_free = false.
// Functions throw std::domain_error outside their mathematical domain; table
// entries outside their stated validity regime still evaluate but carry
// regime_ok = false.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "disperse/nets.hpp"

namespace disperse {

// Which quantity a bound speaks about.
enum class Quantity {
  cube,         // N(eps, d)
  torus,        // torus N(eps, d)
  cube_random,  // what i.i.d. uniform points can achieve on the cube
  dispersion,   // minimal dispersion as a function of n
  net_size,     // cardinality of an approximating net
};

const char* to_string(Quantity q) noexcept;

struct BoundValue {
  std::string name;
  double value = 0.0;
  bool regime_ok = false;
  bool constant_free = true;
  double c_used = 1.0;
  Quantity quantity = Quantity::cube;
};

// 16 e d ln ln(8/eps) / eps; d >= 2, eps in (0,1).
BoundValue thm_main_cube(double eps, std::size_t d);
// 8 e d (ln ln(e/eps) + ln(2d)) / eps; d >= 2, eps in (0,1).
BoundValue thm_main_torus(double eps, std::size_t d);
// C d ln ln(n/d) / n (cube) or C d (ln ln(n/d) + ln d) / n (torus).
// regime_ok iff n >= 4d. Throws when the expression is not positive.
BoundValue thm_main_disp(std::uint64_t n, std::size_t d, double C = 1.0, BoxKind kind = BoxKind::cube);

// delta * n >= e, with a few ulps of slack so the boundary itself passes.
bool lemma2_hypothesis(double delta, double net_size) noexcept;

// 3 ln N / delta; N >= 3.
double lemma1_bound(double net_size, double delta);
// ln(4 delta N) / delta; delta <= 1/3 and delta N >= e.
double lemma2_bound(double net_size, double delta);
// ln(e^{1+delta} delta N) / delta, the sharper form behind lemma2_bound.
double lemma2_tight_bound(double net_size, double delta);

struct TheoremParams {
  double gamma = 0.0;
  double delta = 0.0;
};

// gamma = 1/ln(1/eps), delta = eps/(4e); checks eps^{1+gamma} = eps/e.
TheoremParams theorem_params(double eps);

// 7 d ln d (1+1/gamma)^d L^d / eps^{1+gamma} with L = ln(e/eps^{1+gamma})
// for the cube and L = 2d for the torus.
double prop_net_cardinality(double eps, std::size_t d, double gamma, BoxKind kind);

// Unspecified constants by entry name ("bc_upper", "ael_upper", "tvv_lower",
// "ll_upper", "ll_torus_upper", "random_lower"); missing names default to 1.
using ConstantMap = std::map<std::string, double, std::less<>>;

std::vector<BoundValue> prior_bounds(double eps, std::size_t d, const ConstantMap& constants = {});

struct PiecewiseBound {
  BoundValue bound;
  int branch = 0;  // 1: large eps, 2: middle, 3: eps <= exp(-d^d)
};

// Threshold between the first and second branch: ln^2 d / (d ln ln(2d)).
double piecewise_upper_threshold(std::size_t d);

PiecewiseBound best_known_piecewise(double eps, std::size_t d, double C = 1.0);

}  // namespace disperse
