#include "grouptraj/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "grouptraj/errors.hpp"

namespace grouptraj {

std::optional<std::size_t> Trajectory::index_of(Frame frame) const {
  const auto it = std::lower_bound(points.begin(), points.end(), frame,
                                   [](const TrackPoint& p, Frame f) { return p.frame < f; });
  if (it == points.end() || it->frame != frame) return std::nullopt;
  return static_cast<std::size_t>(it - points.begin());
}

Trajectory Trajectory::slice(Frame first, Frame last) const {
  Trajectory out{agent_id, {}};
  for (const auto& p : points) {
    if (p.frame >= first && p.frame <= last) out.points.push_back(p);
  }
  return out;
}

void Config::validate() const {
  if (known_time_steps < 2) throw ValidationError("known_time_steps must be >= 2");
  if (predict_time_steps < 1) throw ValidationError("predict_time_steps must be >= 1");
  if (k_candidates < 1) throw ValidationError("k_candidates must be >= 1");
  if (!(person_radius > 0.0)) throw ValidationError("person_radius must be > 0");
  if (!(step_duration > 0.0)) throw ValidationError("step_duration must be > 0");
  if (!(neighborhood_range > 0.0)) throw ValidationError("neighborhood_range must be > 0");
  if (!(person_mass > 0.0)) throw ValidationError("person_mass must be > 0");
  if (!(t1 > 0.0 && t1 < t2)) throw ValidationError("thresholds must satisfy 0 < t1 < t2");
  if (min_overlap < 1) throw ValidationError("min_overlap must be >= 1");
  if (emotion_frames < 1) throw ValidationError("emotion_frames must be >= 1");
  if (!(direction_weight >= 0.0)) throw ValidationError("direction_weight must be >= 0");
}

std::string_view base_agent_id(std::string_view id) {
  const auto hash = id.find('#');
  return hash == std::string_view::npos ? id : id.substr(0, hash);
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Numeric strings compare by value; digits only so no overflow concerns.
int compare_numeric(std::string_view a, std::string_view b) {
  auto strip = [](std::string_view s) {
    const auto nz = s.find_first_not_of('0');
    return nz == std::string_view::npos ? std::string_view{} : s.substr(nz);
  };
  a = strip(a);
  b = strip(b);
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return a.compare(b);
}

int compare_base(std::string_view a, std::string_view b) {
  const bool na = all_digits(a);
  const bool nb = all_digits(b);
  if (na && nb) {
    const int c = compare_numeric(a, b);
    if (c != 0) return c;
  } else if (na != nb) {
    return na ? -1 : 1;
  }
  const int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

long split_index(std::string_view id) {
  const auto hash = id.find('#');
  if (hash == std::string_view::npos) return 1;
  long v = 0;
  const auto s = id.substr(hash + 1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size() ? v : 0;
}

}  // namespace

bool agent_id_less(std::string_view a, std::string_view b) {
  const int c = compare_base(base_agent_id(a), base_agent_id(b));
  if (c != 0) return c < 0;
  const long sa = split_index(a);
  const long sb = split_index(b);
  if (sa != sb) return sa < sb;
  return a < b;
}

void sort_by_agent(std::vector<Trajectory>& tracks) {
  std::stable_sort(tracks.begin(), tracks.end(), [](const Trajectory& x, const Trajectory& y) {
    return agent_id_less(x.agent_id, y.agent_id);
  });
}

}  // namespace grouptraj
