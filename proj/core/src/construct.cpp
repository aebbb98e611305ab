#include "disperse/construct.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "disperse/bounds.hpp"
#include "disperse/rng.hpp"

namespace disperse {
namespace {

template <class BoxT>
PointSet greedy_pierce_impl(std::size_t dim, std::span<const BoxT> boxes) {
  PointSet out(dim);
  const std::size_t k = boxes.size();
  if (k == 0) return out;

  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  for (const auto& b : boxes) {
    if (b.dim() != dim) throw std::invalid_argument("box dimension differs from requested dimension");
    if (!(b.volume() > 0.0)) throw std::invalid_argument("greedy_pierce needs boxes of positive volume");
    centers.push_back(b.center());
  }
  // covers[c]: boxes containing candidate c; hit_by[b]: candidates inside box b.
  std::vector<std::vector<std::uint32_t>> covers(k), hit_by(k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t b = 0; b < k; ++b) {
      if (boxes[b].contains(centers[c])) {
        covers[c].push_back(static_cast<std::uint32_t>(b));
        hit_by[b].push_back(static_cast<std::uint32_t>(c));
      }
    }
  }
  std::vector<std::size_t> count(k);
  for (std::size_t c = 0; c < k; ++c) count[c] = covers[c].size();
  std::vector<bool> done(k, false);
  std::size_t remaining = k;
  while (remaining > 0) {
    const auto best = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
    if (count[best] == 0) throw std::logic_error("greedy_pierce: a box does not contain its own center");
    out.push_back(centers[best]);
    for (auto b : covers[best]) {
      if (done[b]) continue;
      done[b] = true;
      --remaining;
      for (auto c : hit_by[b]) --count[c];
    }
  }
  return out;
}

PointSet concat(const PointSet& a, const PointSet& b) {
  std::vector<double> rows(a.data().begin(), a.data().end());
  rows.insert(rows.end(), b.data().begin(), b.data().end());
  return PointSet(a.dim(), std::move(rows));
}

PointSet repair_points(const Net& net, const std::vector<std::size_t>& missed) {
  if (net.kind() == BoxKind::cube) {
    std::vector<Box> boxes;
    boxes.reserve(missed.size());
    for (auto i : missed) boxes.push_back(net.box(i));
    return greedy_pierce(net.dim(), std::span<const Box>(boxes));
  }
  std::vector<TorusBox> boxes;
  boxes.reserve(missed.size());
  for (auto i : missed) boxes.push_back(net.torus_box(i));
  return greedy_pierce(net.dim(), std::span<const TorusBox>(boxes));
}

}  // namespace

const char* to_string(Method method) noexcept {
  return method == Method::two_phase ? "two-phase" : "random-only";
}

PointSet sample_uniform(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> rows(n * dim);
  for (auto& x : rows) x = rng.uniform();
  return PointSet(dim, std::move(rows));
}

std::uint64_t phase1_size(double delta, std::uint64_t net_size) {
  if (!(delta > 0.0 && delta < 1.0)) throw HypothesisError("delta must lie in (0,1)");
  const double n = static_cast<double>(net_size);
  if (!lemma2_hypothesis(delta, n)) {
    throw HypothesisError("two-phase construction needs delta*|N| >= e (delta*|N| = " +
                          std::to_string(delta * n) + ")");
  }
  return static_cast<std::uint64_t>(std::ceil(std::max(0.0, std::log(delta * n)) / delta));
}

std::uint64_t random_only_size(double delta, std::uint64_t net_size) {
  if (!(delta > 0.0 && delta < 1.0)) throw HypothesisError("delta must lie in (0,1)");
  if (net_size < 3) throw HypothesisError("random-only construction needs |N| >= 3");
  return static_cast<std::uint64_t>(std::floor(3.0 * std::log(static_cast<double>(net_size)) / delta));
}

double expected_misses_bound(std::uint64_t net_size, double delta, std::uint64_t M) {
  return static_cast<double>(net_size) * std::pow(1.0 - delta, static_cast<double>(M));
}

RandomPhase random_phase(const Net& net, std::uint64_t M, std::uint64_t seed) {
  RandomPhase out{sample_uniform(M, net.dim(), seed), {}};
  out.missed = net.missed_by(out.sample);
  return out;
}

Construction two_phase(const Net& net, std::uint64_t seed, std::uint32_t max_retries) {
  if (max_retries < 1) throw std::invalid_argument("max_retries must be >= 1");
  const double delta = net.params().delta;
  if (delta > 1.0 / 3.0) throw HypothesisError("two-phase construction needs delta <= 1/3");
  const std::uint64_t N = net.size();
  const std::uint64_t M = phase1_size(delta, N);
  const double threshold = expected_misses_bound(N, delta, M);

  ConstructionReport report;
  report.method = Method::two_phase;
  report.seed = seed;
  report.M = M;
  report.net_size = N;
  report.bound = lemma2_bound(static_cast<double>(N), delta);

  std::optional<RandomPhase> best;
  for (std::uint32_t attempt = 0; attempt < max_retries; ++attempt) {
    RandomPhase phase = random_phase(net, M, derive_seed(seed, attempt));
    const bool accepted = static_cast<double>(phase.missed.size()) <= threshold;
    if (!best || phase.missed.size() < best->missed.size()) best = std::move(phase);
    report.retries = attempt;
    if (accepted) {
      report.accepted = true;
      break;
    }
  }

  const PointSet repair = repair_points(net, best->missed);
  PointSet points = concat(best->sample, repair).deduplicated();
  report.bad_count = best->missed.size();
  report.repair_count = repair.size();
  report.total = points.size();

  if (report.total > report.M + report.bad_count) throw std::logic_error("repair used more than one point per miss");
  if (report.accepted) {
    const double tight = lemma2_tight_bound(static_cast<double>(N), delta);
    if (static_cast<double>(report.total) > tight || static_cast<double>(report.total) > report.bound) {
      throw std::logic_error("accepted two-phase run violates its size certificate");
    }
  }
  return {std::move(points), report};
}

Construction random_only(const Net& net, std::uint64_t seed, std::uint32_t max_retries) {
  if (max_retries < 1) throw std::invalid_argument("max_retries must be >= 1");
  const double delta = net.params().delta;
  const std::uint64_t N = net.size();
  const std::uint64_t M = random_only_size(delta, N);

  ConstructionReport report;
  report.method = Method::random_only;
  report.seed = seed;
  report.M = M;
  report.net_size = N;
  report.bound = lemma1_bound(static_cast<double>(N), delta);

  std::optional<RandomPhase> best;
  for (std::uint32_t attempt = 0; attempt < max_retries; ++attempt) {
    RandomPhase phase = random_phase(net, M, derive_seed(seed, attempt));
    if (!best || phase.missed.size() < best->missed.size()) best = std::move(phase);
    report.retries = attempt;
    if (best->missed.empty()) {
      report.accepted = true;
      break;
    }
  }
  PointSet points = best->sample.deduplicated();
  report.bad_count = best->missed.size();
  report.total = points.size();
  return {std::move(points), report};
}

Construction construct(const Net& net, Method method, std::uint64_t seed, std::uint32_t max_retries) {
  return method == Method::two_phase ? two_phase(net, seed, max_retries) : random_only(net, seed, max_retries);
}

PointSet greedy_pierce(std::size_t dim, std::span<const Box> boxes) { return greedy_pierce_impl(dim, boxes); }
PointSet greedy_pierce(std::size_t dim, std::span<const TorusBox> boxes) { return greedy_pierce_impl(dim, boxes); }

}  // namespace disperse
