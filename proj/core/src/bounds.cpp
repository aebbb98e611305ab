#include "disperse/bounds.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace disperse {
namespace {

using std::numbers::e;

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0,1)");
}

void require_dim(std::size_t d) {
  if (d < 2) throw std::domain_error("dimension must be >= 2");
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

double constant(const ConstantMap& map, std::string_view name) {
  auto it = map.find(name);
  return it == map.end() ? 1.0 : it->second;
}

}  // namespace

const char* to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::cube: return "N";
    case Quantity::torus: return "N_torus";
    case Quantity::cube_random: return "N_random";
    case Quantity::dispersion: return "disp";
    case Quantity::net_size: return "net_size";
  }
  return "?";
}

BoundValue thm_main_cube(double eps, std::size_t d) {
  require_eps(eps);
  require_dim(d);
  const double inner = std::log(8.0 / eps);
  if (!(inner > 1.0)) throw std::logic_error("ln(8/eps) <= 1 inside (0,1)");
  const double dd = static_cast<double>(d);
  return {"thm_main_cube", 16.0 * e * dd * std::log(inner) / eps, true, true, 1.0, Quantity::cube};
}

BoundValue thm_main_torus(double eps, std::size_t d) {
  require_eps(eps);
  require_dim(d);
  const double inner = std::log(e / eps);
  if (!(inner > 1.0)) throw std::logic_error("ln(e/eps) <= 1 inside (0,1)");
  const double dd = static_cast<double>(d);
  return {"thm_main_torus", 8.0 * e * dd * (std::log(inner) + std::log(2.0 * dd)) / eps, true, true, 1.0,
          Quantity::torus};
}

BoundValue thm_main_disp(std::uint64_t n, std::size_t d, double C, BoxKind kind) {
  require_dim(d);
  if (n < 1) throw std::domain_error("n must be >= 1");
  if (!(C > 0.0)) throw std::domain_error("constant C must be positive");
  const double dd = static_cast<double>(d), nn = static_cast<double>(n);
  const double loglog = std::log(std::log(nn / dd));
  const double value = kind == BoxKind::cube ? C * dd * loglog / nn : C * dd * (loglog + std::log(dd)) / nn;
  if (!positive(value)) throw std::domain_error("dispersion bound is not positive for this (n, d)");
  return {kind == BoxKind::cube ? "thm_main_disp_cube" : "thm_main_disp_torus",
          value,
          n >= 4 * d,
          false,
          C,
          Quantity::dispersion};
}

bool lemma2_hypothesis(double delta, double net_size) noexcept {
  return delta * net_size >= e * (1.0 - 4.0 * DBL_EPSILON);
}

double lemma1_bound(double net_size, double delta) {
  if (!(net_size >= 3.0)) throw std::domain_error("random-only bound needs |N| >= 3");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
  return 3.0 * std::log(net_size) / delta;
}

double lemma2_bound(double net_size, double delta) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) throw std::domain_error("two-phase bound needs 0 < delta <= 1/3");
  if (!lemma2_hypothesis(delta, net_size)) throw std::domain_error("two-phase bound needs delta*|N| >= e");
  return std::log(4.0 * delta * net_size) / delta;
}

double lemma2_tight_bound(double net_size, double delta) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) throw std::domain_error("two-phase bound needs 0 < delta <= 1/3");
  if (!lemma2_hypothesis(delta, net_size)) throw std::domain_error("two-phase bound needs delta*|N| >= e");
  return (1.0 + delta + std::log(delta * net_size)) / delta;
}

TheoremParams theorem_params(double eps) {
  require_eps(eps);
  TheoremParams p{-1.0 / std::log(eps), eps / (4.0 * e)};
  const double lhs = std::pow(eps, 1.0 + p.gamma), rhs = eps / e;
  if (!(std::abs(lhs - rhs) <= 1e-12 * rhs)) throw std::logic_error("eps^(1+gamma) != eps/e");
  return p;
}

double prop_net_cardinality(double eps, std::size_t d, double gamma, BoxKind kind) {
  require_eps(eps);
  require_dim(d);
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const double dd = static_cast<double>(d);
  const double scaled = std::pow(eps, 1.0 + gamma);
  const double per_axis = kind == BoxKind::cube ? std::log(e / scaled) : 2.0 * dd;
  return 7.0 * dd * std::log(dd) * std::pow((1.0 + 1.0 / gamma) * per_axis, dd) / scaled;
}

std::vector<BoundValue> prior_bounds(double eps, std::size_t d, const ConstantMap& constants) {
  require_eps(eps);
  require_dim(d);
  const double dd = static_cast<double>(d);
  const double inv = std::log(1.0 / eps);
  std::vector<BoundValue> out;

  {
    const double C = constant(constants, "bc_upper");
    out.push_back({"bc_upper", C * dd * dd * std::log(dd) / eps, eps < std::pow(dd, -dd * dd), false, C,
                   Quantity::cube});
  }
  out.push_back({"bc_lower", dd / (e * eps), eps <= std::pow(4.0 * dd, -dd), true, 1.0, Quantity::cube});
  {
    // The threshold ln^2 d / (d ln ln d) is only meaningful once ln ln d > 0.
    const double C = constant(constants, "ael_upper");
    const double lld = std::log(std::log(dd));
    const bool ok = lld > 0.0 && eps > std::log(dd) * std::log(dd) / (dd * lld);
    out.push_back({"ael_upper", C * std::log(dd) * inv / (eps * eps), ok, false, C, Quantity::cube});
  }
  {
    const double C = constant(constants, "tvv_lower");
    const bool ok = eps <= 0.25 && eps >= 1.0 / (4.0 * std::sqrt(dd));
    out.push_back({"tvv_lower", C * std::log(dd) / (eps * eps * inv), ok, false, C, Quantity::cube});
  }
  out.push_back({"ahr_lower", std::log2(dd) / (8.0 * eps), eps < 0.25, true, 1.0, Quantity::cube});
  {
    const double C = constant(constants, "ll_upper");
    const double v = C * (dd * std::log(inv) + inv) / eps;
    out.push_back({"ll_upper", v, positive(v), false, C, Quantity::cube});
  }
  out.push_back({"kmk_upper", std::numbers::pi / std::sqrt(eps - 0.25) - 3.0, eps > 0.25 && eps < 0.5, true, 1.0,
                 Quantity::cube});
  out.push_back({"trivial_upper", 1.0, eps >= 0.5, true, 1.0, Quantity::cube});
  {
    const double c = constant(constants, "random_lower");
    const double v = std::max(c / eps * inv, dd / (2.0 * eps));
    out.push_back({"random_lower", v, true, false, c, Quantity::cube_random});
  }
  out.push_back({"torus_lower", dd / eps, true, true, 1.0, Quantity::torus});
  {
    const double C = constant(constants, "ll_torus_upper");
    const double v = C * (dd * std::log(2.0 * dd) + std::log(e / eps)) / eps;
    out.push_back({"ll_torus_upper", v, positive(v), false, C, Quantity::torus});
  }
  return out;
}

double piecewise_upper_threshold(std::size_t d) {
  require_dim(d);
  const double dd = static_cast<double>(d);
  return std::log(dd) * std::log(dd) / (dd * std::log(std::log(2.0 * dd)));
}

PiecewiseBound best_known_piecewise(double eps, std::size_t d, double C) {
  require_eps(eps);
  require_dim(d);
  const double dd = static_cast<double>(d);
  PiecewiseBound out;
  out.bound.constant_free = false;
  out.bound.c_used = C;
  out.bound.quantity = Quantity::cube;
  if (eps >= piecewise_upper_threshold(d)) {
    out.branch = 1;
    out.bound.value = C * std::log(dd) / (eps * eps) * std::log(1.0 / eps);
  } else if (eps >= std::exp(-std::pow(dd, dd))) {
    out.branch = 2;
    out.bound.value = C * dd / eps * std::log(std::log(1.0 / eps));
  } else {
    out.branch = 3;
    out.bound.value = C * dd * dd * std::log(dd) / eps;
  }
  out.bound.name = "best_known_branch" + std::to_string(out.branch);
  out.bound.regime_ok = positive(out.bound.value);
  return out;
}

}  // namespace disperse
