#include "grouptraj/canonical_csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <string>

#include "grouptraj/errors.hpp"

namespace grouptraj {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf.data(), ptr);
}

std::string write_canonical_csv(std::span<const Trajectory> tracks) {
  std::vector<const Trajectory*> order;
  order.reserve(tracks.size());
  for (const auto& t : tracks) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Trajectory* a, const Trajectory* b) {
    return agent_id_less(a->agent_id, b->agent_id);
  });

  std::string out(kCanonicalHeader);
  out += '\n';
  for (const Trajectory* t : order) {
    for (const auto& p : t->points) {
      out += std::to_string(p.frame);
      out += ',';
      out += t->agent_id;
      out += ',';
      out += format_double(p.pos.x);
      out += ',';
      out += format_double(p.pos.y);
      out += '\n';
    }
  }
  return out;
}

namespace {

template <typename T>
T parse_field(std::string_view s, std::size_t line, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<Trajectory> read_canonical_csv(std::string_view text, double step_duration) {
  std::map<std::string, Trajectory> by_agent;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line != kCanonicalHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kCanonicalHeader) + "'");
      }
      continue;
    }
    std::array<std::string_view, 4> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 4; ++f) {
      const std::size_t comma = line.find(',', start);
      if ((comma == std::string_view::npos) != (f == 3)) {
        throw ParseError(line_no, "expected 4 comma-separated fields");
      }
      fields[f] = trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      start = comma + 1;
    }
    const auto frame = parse_field<Frame>(fields[0], line_no, "frame");
    if (frame < 0) throw ParseError(line_no, "negative frame");
    if (fields[1].empty()) throw ParseError(line_no, "empty agent_id");
    const auto x = parse_field<double>(fields[2], line_no, "x");
    const auto y = parse_field<double>(fields[3], line_no, "y");
    auto& tr = by_agent[std::string(fields[1])];
    tr.agent_id = std::string(fields[1]);
    if (!tr.points.empty() && frame <= tr.points.back().frame) {
      throw ParseError(line_no, "frames of agent '" + tr.agent_id + "' must strictly increase");
    }
    tr.points.push_back({frame, static_cast<double>(frame) * step_duration, {x, y}});
  }
  if (!header_seen) return {};
  std::vector<Trajectory> tracks;
  tracks.reserve(by_agent.size());
  for (auto& [id, tr] : by_agent) tracks.push_back(std::move(tr));
  sort_by_agent(tracks);
  return tracks;
}

}  // namespace grouptraj
