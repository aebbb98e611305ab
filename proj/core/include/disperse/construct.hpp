#pragma once

// Piercing point sets for a net.
//
// two_phase: draw M = ceil(ln(delta*N)/delta) uniform points, collect the net
// elements they miss, and repair each miss with a greedily chosen box center.
// A draw is accepted when the number of misses is at most N*(1-delta)^M, the
// expectation bound; accepted runs satisfy |P| <= ln(4*delta*N)/delta.
//
// random_only: draw floor(3*ln(N)/delta) uniform points and resample until
// every element is pierced.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "disperse/geometry.hpp"
#include "disperse/nets.hpp"

namespace disperse {

enum class Method { two_phase, random_only };

const char* to_string(Method method) noexcept;

inline constexpr std::uint32_t kDefaultMaxRetries = 64;

// Raised when a construction hypothesis on (delta, |N|) fails.
class HypothesisError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct ConstructionReport {
  Method method = Method::two_phase;
  std::uint64_t seed = 0;
  std::uint64_t M = 0;             // random-phase size
  std::uint64_t net_size = 0;      // |N|
  std::uint64_t bad_count = 0;     // net elements missed by the kept random draw
  std::uint64_t repair_count = 0;  // |Q0|
  std::uint64_t total = 0;         // |P| after deduplication
  std::uint64_t retries = 0;       // draws beyond the first
  bool accepted = false;
  double bound = 0.0;  // ln(4*delta*N)/delta, or 3*ln(N)/delta for random_only

  friend bool operator==(const ConstructionReport&, const ConstructionReport&) = default;
};

struct Construction {
  PointSet points;
  ConstructionReport report;
};

// n i.i.d. uniform points in [0,1)^d.
PointSet sample_uniform(std::size_t n, std::size_t dim, std::uint64_t seed);

// ceil(ln(delta*N)/delta). Throws HypothesisError unless delta*N >= e.
std::uint64_t phase1_size(double delta, std::uint64_t net_size);

// floor(3*ln(N)/delta). Throws HypothesisError unless N >= 3.
std::uint64_t random_only_size(double delta, std::uint64_t net_size);

// N*(1-delta)^M, the bound on the expected number of missed elements.
double expected_misses_bound(std::uint64_t net_size, double delta, std::uint64_t M);

struct RandomPhase {
  PointSet sample;
  std::vector<std::size_t> missed;  // ascending net indices
};

// One random draw of M points and the net elements it misses.
RandomPhase random_phase(const Net& net, std::uint64_t M, std::uint64_t seed);

Construction two_phase(const Net& net, std::uint64_t seed, std::uint32_t max_retries = kDefaultMaxRetries);
Construction random_only(const Net& net, std::uint64_t seed, std::uint32_t max_retries = kDefaultMaxRetries);
Construction construct(const Net& net, Method method, std::uint64_t seed,
                       std::uint32_t max_retries = kDefaultMaxRetries);

// Greedy hitting set: candidates are the box centers (arc midpoints on the
// torus); repeatedly take the candidate inside the most unpierced boxes,
// lowest index on ties. Returns at most one point per box.
PointSet greedy_pierce(std::size_t dim, std::span<const Box> boxes);
PointSet greedy_pierce(std::size_t dim, std::span<const TorusBox> boxes);

}  // namespace disperse
