#include "grouptraj/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <ranges>
#include <span>

#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

namespace grouptraj {

ForceParams ForceParams::from_config(const Config& cfg) {
  ForceParams p;
  p.neighborhood_range = cfg.neighborhood_range;
  p.mass = cfg.person_mass;
  p.radius = cfg.person_radius;
  return p;
}

void ForceParams::validate() const {
  if (!(relaxation_time > 0.0)) throw ValidationError("relaxation_time must be > 0");
  if (!(repulsion_strength > 0.0 && repulsion_range > 0.0)) {
    throw ValidationError("repulsion strength and range must be > 0");
  }
  if (!(obstacle_strength > 0.0 && obstacle_range > 0.0)) {
    throw ValidationError("obstacle strength and range must be > 0");
  }
  if (!(max_speed_factor > 0.0)) throw ValidationError("max_speed_factor must be > 0");
  if (!(min_desired_speed > 0.0)) throw ValidationError("min_desired_speed must be > 0");
  if (!(neighborhood_range > 0.0 && mass > 0.0 && radius > 0.0)) {
    throw ValidationError("neighborhood_range, mass and radius must be > 0");
  }
  if (substeps < 1) throw ValidationError("substeps must be >= 1");
}

namespace {

constexpr double kCoincident = 1e-12;
constexpr double kNudge = 1e-6;

bool arrived(const Body& b, const ForceParams& params) { return distance(b.pos, b.dest) < params.radius; }

// Candidate neighbors per body in compressed rows, each row ascending.
// Built from a uniform grid with cells of the list radius, so every pair
// closer than the radius is listed.
struct NeighborLists {
  std::vector<std::uint32_t> start;
  std::vector<std::uint32_t> index;

  std::span<const std::uint32_t> of(std::size_t i) const {
    return {index.data() + start[i], index.data() + start[i + 1]};
  }
};

// Up to this many bodies a direct pair scan beats the grid.
constexpr std::size_t kPairScanLimit = 128;

NeighborLists build_neighbor_lists(const std::vector<Body>& bodies, double radius) {
  if (bodies.size() <= kPairScanLimit) {
    const double r_sq = radius * radius;
    NeighborLists out;
    out.start.reserve(bodies.size() + 1);
    out.start.push_back(0);
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      for (std::uint32_t j = 0; j < bodies.size(); ++j) {
        const Vec2 d = bodies[i].pos - bodies[j].pos;
        if (j != i && dot(d, d) <= r_sq) out.index.push_back(j);
      }
      out.start.push_back(static_cast<std::uint32_t>(out.index.size()));
    }
    return out;
  }
  const double inv = 1.0 / radius;
  auto cell_of = [inv](Vec2 p) {
    return std::pair{static_cast<std::int64_t>(std::floor(p.x * inv)), static_cast<std::int64_t>(std::floor(p.y * inv))};
  };
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
  };
  std::vector<std::pair<std::uint64_t, std::uint32_t>> cells;
  cells.reserve(bodies.size());
  for (std::uint32_t i = 0; i < bodies.size(); ++i) {
    const auto [cx, cy] = cell_of(bodies[i].pos);
    cells.push_back({key(cx, cy), i});
  }
  std::sort(cells.begin(), cells.end());

  NeighborLists out;
  out.start.reserve(bodies.size() + 1);
  out.start.push_back(0);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const auto row = out.index.size();
    const auto [cx, cy] = cell_of(bodies[i].pos);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const std::uint64_t k = key(cx + dx, cy + dy);
        auto it = std::lower_bound(cells.begin(), cells.end(), std::pair<std::uint64_t, std::uint32_t>{k, 0});
        for (; it != cells.end() && it->first == k; ++it) {
          if (it->second != i) out.index.push_back(it->second);
        }
      }
    }
    std::sort(out.index.begin() + static_cast<std::ptrdiff_t>(row), out.index.end());
    out.start.push_back(static_cast<std::uint32_t>(out.index.size()));
  }
  return out;
}

// Below this many bodies a plain scan is cheaper than building the grid.
constexpr std::size_t kGridThreshold = 16;

template <typename Range>
Vec2 accumulate_force(const SimState& state, std::size_t i, const Range& neighbors, const ForceParams& params,
                      double dt) {
  const Body& self = state.bodies[i];
  const Vec2 to_dest = self.dest - self.pos;
  const double dist = norm(to_dest);
  Vec2 desired;
  if (dist > kCoincident) {
    // Never ask for more speed than lands exactly on the destination.
    desired = to_dest / dist * std::min(self.desired_speed, dist / dt);
  }
  Vec2 force = (desired - self.vel) * (params.mass / params.relaxation_time);

  const double range_sq = params.neighborhood_range * params.neighborhood_range;
  for (const std::size_t j : neighbors) {
    if (j == i) continue;
    const Vec2 diff = self.pos - state.bodies[j].pos;
    const double d_sq = dot(diff, diff);
    if (d_sq > range_sq) continue;
    const double d = std::sqrt(d_sq);
    if (d < kCoincident) continue;
    force += diff / d * (params.repulsion_strength * std::exp((2.0 * params.radius - d) / params.repulsion_range));
  }

  if (state.scene) {
    if (const auto contact = nearest_obstacle(*state.scene, self.pos);
        contact && contact->signed_distance <= params.neighborhood_range) {
      force += contact->normal *
               (params.obstacle_strength * std::exp((params.radius - contact->signed_distance) / params.obstacle_range));
    }
  }
  return force;
}

}  // namespace

Vec2 body_force(const SimState& state, std::size_t i, const ForceParams& params, double dt) {
  return accumulate_force(state, i, std::views::iota(std::size_t{0}, state.bodies.size()), params, dt);
}

namespace {

SimState step_with(const SimState& state, const ForceParams& params, double dt, const NeighborLists* lists) {
  SimState next = state;
  const std::size_t n = state.bodies.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Body& cur = state.bodies[i];
    Body& out = next.bodies[i];
    if (arrived(cur, params)) {
      out.vel = {};
      continue;
    }
    const Vec2 force = lists ? accumulate_force(state, i, lists->of(i), params, dt) : body_force(state, i, params, dt);
    Vec2 v = cur.vel + force * (dt / params.mass);
    const double speed = norm(v);
    if (speed > cur.max_speed) v *= cur.max_speed / speed;
    out.vel = v;
    out.pos = cur.pos + v * dt;
  }
  // Coincident pairs have no repulsion direction; separate them along x,
  // lower id to the left.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 diff = state.bodies[i].pos - state.bodies[j].pos;
      if (dot(diff, diff) >= kCoincident * kCoincident) continue;
      const bool i_low = state.bodies[i].id < state.bodies[j].id;
      next.bodies[i].pos.x += i_low ? -kNudge : kNudge;
      next.bodies[j].pos.x += i_low ? kNudge : -kNudge;
    }
  }
  return next;
}

}  // namespace

SimState step(const SimState& state, const ForceParams& params, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (state.bodies.size() <= kGridThreshold) return step_with(state, params, dt, nullptr);
  const auto lists = build_neighbor_lists(state.bodies, params.neighborhood_range);
  return step_with(state, params, dt, &lists);
}

SimState advance(const SimState& state, const ForceParams& params, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  const double sub = dt / static_cast<double>(params.substeps);
  std::optional<NeighborLists> lists;
  if (state.bodies.size() > kGridThreshold) {
    // Pairs can close in by at most both bodies' full travel over dt, so one
    // list with that margin covers every sub-step.
    double fastest = 0.0;
    for (const auto& b : state.bodies) fastest = std::max(fastest, b.max_speed);
    const double margin = 2.0 * fastest * dt + 4.0 * kNudge * params.substeps;
    lists = build_neighbor_lists(state.bodies, params.neighborhood_range + margin);
  }
  const NeighborLists* l = lists ? &*lists : nullptr;
  SimState s = step_with(state, params, sub, l);
  for (int k = 1; k < params.substeps; ++k) s = step_with(s, params, sub, l);
  return s;
}

Body make_body(std::uint32_t id, const Trajectory& center, Vec2 dest, const ForceParams& params) {
  if (center.empty()) throw TooFewPointsError("body needs a non-empty track");
  Body b;
  b.id = id;
  b.pos = center.points.back().pos;
  b.vel = center.size() >= 2 ? velocity_at(center, center.last_frame()) : Vec2{};
  b.dest = dest;
  b.desired_speed = std::max(mean_speed(center), params.min_desired_speed);
  b.max_speed = params.max_speed_factor * b.desired_speed;
  return b;
}

Trajectory predict_group_trajectory(const Body& subject, std::span<const Body> others,
                                    std::shared_ptr<const SceneGeometry> scene, int steps,
                                    Frame last_frame, const ForceParams& params, const Config& cfg) {
  params.validate();
  if (steps < 0) throw ValidationError("steps must be >= 0");
  SimState state;
  state.scene = std::move(scene);
  state.bodies.reserve(others.size() + 1);
  state.bodies.push_back(subject);
  state.bodies.back().desired_speed = std::max(subject.desired_speed, params.min_desired_speed);
  state.bodies.insert(state.bodies.end(), others.begin(), others.end());

  Trajectory out;
  out.points.reserve(static_cast<std::size_t>(steps));
  for (int s = 1; s <= steps; ++s) {
    state = advance(state, params, cfg.step_duration);
    const Frame f = last_frame + s;
    out.points.push_back({f, static_cast<double>(f) * cfg.step_duration, state.bodies.front().pos});
  }
  return out;
}

std::vector<std::vector<Vec2>> observed_deviations(std::span<const Trajectory> members,
                                                   const Trajectory& center,
                                                   std::span<const MemberOffset> offsets) {
  if (members.size() != offsets.size()) {
    throw MemberCountMismatchError("members and offsets differ in count");
  }
  std::vector<std::vector<Vec2>> out(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    for (const auto& c : center.points) {
      const auto idx = members[m].index_of(c.frame);
      if (!idx) continue;
      out[m].push_back(members[m].points[*idx].pos - c.pos - offsets[m].offset);
    }
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller over raw mt19937_64 output; std::normal_distribution is not
// specified bit-for-bit across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    double u1 = 0.0;
    do {
      u1 = static_cast<double>(rng_() >> 11) * scale;
    } while (u1 <= 0.0);
    const double u2 = static_cast<double>(rng_() >> 11) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

std::vector<Trajectory> reconstruct_members(const Trajectory& group_traj,
                                            std::span<const MemberOffset> offsets, double emotion,
                                            const ReconstructionPolicy& policy) {
  if (!(emotion > 0.0 && emotion <= 1.0)) throw ValidationError("emotion must lie in (0, 1]");
  if (!policy.deviations.empty() && policy.deviations.size() != offsets.size()) {
    throw MemberCountMismatchError("deviation patterns and offsets differ in count");
  }
  const double weight = 1.0 - emotion;
  std::vector<Trajectory> out;
  out.reserve(offsets.size());
  for (std::size_t m = 0; m < offsets.size(); ++m) {
    Trajectory tr{offsets[m].agent_id, {}};
    tr.points.reserve(group_traj.size());
    static const std::vector<Vec2> kNone;
    const auto& pattern = policy.deviations.empty() ? kNone : policy.deviations[m];

    if (policy.mode == ReconstructionMode::rigid || pattern.empty()) {
      for (std::size_t i = 0; i < group_traj.size(); ++i) {
        const TrackPoint& g = group_traj.points[i];
        Vec2 p = g.pos + offsets[m].offset;
        if (!pattern.empty()) p += weight * pattern[i % pattern.size()];
        tr.points.push_back({g.frame, g.t, p});
      }
    } else {
      double sq = 0.0;
      for (Vec2 d : pattern) sq += dot(d, d);
      const double rms_axis = std::sqrt(sq / (2.0 * static_cast<double>(pattern.size())));
      GaussianStream noise(splitmix64(policy.seed ^ splitmix64(m)));
      for (const auto& g : group_traj.points) {
        const Vec2 d{noise.next() * rms_axis, noise.next() * rms_axis};
        tr.points.push_back({g.frame, g.t, g.pos + offsets[m].offset + weight * d});
      }
    }
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace grouptraj
