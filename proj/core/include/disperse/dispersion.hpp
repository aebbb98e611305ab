#pragma once

// Largest empty axis-parallel box in [0,1]^d and on the torus.
//
// Dispersion is a supremum, so the evaluators work with open boxes: a point
// on a face does not block the box. The returned cube witness is the box
// [lo, hi) whose interior is empty; a torus witness uses open arcs and may
// contain degenerate arcs (a == b, the circle minus one coordinate) when the
// supremum 1 is approached but not attained on that axis.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <variant>

#include "disperse/geometry.hpp"
#include "disperse/nets.hpp"

namespace disperse {

struct DispersionResult {
  double value = 0.0;
  std::variant<Box, TorusBox> witness = Box::unit(1);
  bool exact = false;
  bool degenerate = false;
};

// Exact evaluation is refused beyond these sizes unless the caller raises them.
struct ExactLimits {
  std::size_t max_dim = 3;
  std::size_t max_points = 256;
};

class ExactCapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Exact sup over empty boxes. Candidate faces per axis are {0, 1} and the
// point coordinates; branch and bound over the outer axes with an
// incremental gap sweep for the last two.
DispersionResult largest_empty_box(const PointSet& ps, const ExactLimits& limits = {});
// Torus analogue: candidate arcs run between point coordinates, plus the
// full circle minus one coordinate. Coordinates equal to 1 are read as 0.
DispersionResult largest_empty_torus_box(const PointSet& ps, const ExactLimits& limits = {});
DispersionResult exact_dispersion(const PointSet& ps, BoxKind kind, const ExactLimits& limits = {});

// Largest empty box with all endpoints on {j/g}. A lower bound on the exact
// value, computed without sharing code with the exact solver. Throws
// ExactCapExceeded when the enumeration would exceed `max_work` steps.
double grid_oracle(const PointSet& ps, std::uint32_t g, BoxKind kind, std::uint64_t max_work = 2'000'000'000ULL);

// Lower bound from `trials` random seed boxes, each grown axis by axis until
// blocked. Running maximum, so more trials never lower the estimate.
DispersionResult estimate_dispersion(const PointSet& ps, std::uint64_t trials, std::uint64_t seed, BoxKind kind);

// True iff no point of `ps` lies inside the witness (open semantics).
bool witness_is_empty(const DispersionResult& result, const PointSet& ps);

}  // namespace disperse
