#pragma once

#include <cstddef>
#include <span>

#include "grouptraj/types.hpp"

namespace grouptraj {

/// Mean Euclidean distance over aligned steps.
double ade(const Trajectory& pred, const Trajectory& gt);

/// Euclidean distance at the final step.
double fde(const Trajectory& pred, const Trajectory& gt);

struct MinOverCandidates {
  double min_ade = 0.0;
  double min_fde = 0.0;
  std::size_t ade_index = 0;
  std::size_t fde_index = 0;
};

/// Independent minima of ADE and FDE; ties keep the earliest candidate.
MinOverCandidates min_over_candidates(std::span<const Trajectory> candidates, const Trajectory& gt);

}  // namespace grouptraj
