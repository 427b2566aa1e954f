#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scpseudo/base_matrix.hpp"
#include "scpseudo/objective.hpp"
#include "scpseudo/rng.hpp"

namespace scpseudo {

struct GrowthOptions {
  int starts = 32;
  std::uint64_t seed = kDefaultSeed;
  double grid_step = 0.0005;
  double bisect_tol = 1e-4;
  double delta_max = 0.2;
  // Curves that never dip below -zero_tol before turning nonnegative report a
  // crossing at 0 (no linear-growth dip exists at this resolution).
  double zero_tol = 1e-5;
  double constraint_tol = 1e-8;
  unsigned threads = 1;
  int max_outer_rounds = 12;
  int max_spg_iters = 220;
  double grad_tol = 1e-7;
  // Neighboring grid samples differing by more than this trigger one re-solve
  // with doubled starts.
  double jump_threshold = 5e-3;
  InnerOptions inner;
};

struct DeltaSolve {
  double delta = 0;
  double r = 0;
  bool feasible = false;
  int starts_used = 0;
  TypeAssignment argmax;
};

// r(delta) = (1/b_v) max{F(tau) : pseudoweight fraction of tau equals delta},
// by multi-start projected-gradient ascent over the product of per-variable
// simplices with the coupling constraint driven in by an augmented quadratic
// penalty, then repaired exactly.
DeltaSolve growth_rate_at_delta(const BaseMatrix& B, int m, double delta,
                                const GrowthOptions& opts = {});

struct GrowthCurve {
  std::vector<DeltaSolve> samples; // in solve order: grid scan, then bisection
  std::optional<double> zero_crossing;
  double grid_step = 0;
  double bisect_tol = 0;
};

// Scans r on the grid (0, delta_max], stops at the first negative-to-
// nonnegative sign change and bisects it to bisect_tol. A curve that starts
// nonnegative (within zero_tol) yields zero_crossing = 0; a curve that stays
// negative yields no crossing and the full scanned grid.
GrowthCurve zero_crossing(const BaseMatrix& B, int m, const GrowthOptions& opts = {});

} // namespace scpseudo
