#include "grouptraj/metrics.hpp"

#include <string>

#include "grouptraj/errors.hpp"

namespace grouptraj {

double ade(const Trajectory& pred, const Trajectory& gt) {
  if (pred.size() != gt.size()) {
    throw LengthMismatchError("ade: prediction has " + std::to_string(pred.size()) +
                              " steps, ground truth " + std::to_string(gt.size()));
  }
  if (pred.empty()) throw LengthMismatchError("ade: empty trajectories");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred.points[i].frame != gt.points[i].frame) {
      throw LengthMismatchError("ade: frames are not aligned at step " + std::to_string(i));
    }
    sum += distance(pred.points[i].pos, gt.points[i].pos);
  }
  return sum / static_cast<double>(pred.size());
}

double fde(const Trajectory& pred, const Trajectory& gt) {
  if (pred.empty() || gt.empty()) throw LengthMismatchError("fde: empty trajectory");
  if (pred.last_frame() != gt.last_frame()) throw LengthMismatchError("fde: final frames differ");
  return distance(pred.points.back().pos, gt.points.back().pos);
}

MinOverCandidates min_over_candidates(std::span<const Trajectory> candidates, const Trajectory& gt) {
  if (candidates.empty()) throw ValidationError("min_over_candidates: no candidates");
  MinOverCandidates best;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double a = ade(candidates[c], gt);
    const double f = fde(candidates[c], gt);
    if (c == 0 || a < best.min_ade) {
      best.min_ade = a;
      best.ade_index = c;
    }
    if (c == 0 || f < best.min_fde) {
      best.min_fde = f;
      best.fde_index = c;
    }
  }
  return best;
}

}  // namespace grouptraj
