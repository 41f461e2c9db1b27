#include "grouptraj/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "grouptraj/canonical_csv.hpp"
#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

namespace grouptraj::ingest {

int ColumnMap::required_columns() const { return std::max({frame, id, x, y}) + 1; }

ColumnMap parse_column_map(std::string_view spec) {
  ColumnMap map;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    const std::string_view item = spec.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("column map entry '" + std::string(item) + "' lacks '='");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    int col = -1;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), col);
    if (ec != std::errc{} || ptr != value.data() + value.size() || col < 0) {
      throw ValidationError("bad column index in '" + std::string(item) + "'");
    }
    if (key == "frame") {
      map.frame = col;
    } else if (key == "id") {
      map.id = col;
    } else if (key == "x") {
      map.x = col;
    } else if (key == "y") {
      map.y = col;
    } else {
      throw ValidationError("unknown column map key '" + std::string(key) + "'");
    }
  }
  return map;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_number(std::string_view tok) {
  double v = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_id(std::string_view tok) {
  if (const auto v = to_number(tok); v && *v == std::floor(*v) && std::abs(*v) < 9e15) {
    return std::to_string(static_cast<long long>(*v));
  }
  return std::string(tok);
}

}  // namespace

std::vector<RawAnnotationRow> parse_obsmat(std::string_view text, std::optional<ColumnMap> columns) {
  std::vector<RawAnnotationRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_data = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (first_data && fields.front() == "frame") continue;

    if (!columns) {
      if (fields.size() >= 8) {
        columns = ColumnMap::obsmat();
      } else if (fields.size() == 4) {
        columns = ColumnMap::canonical();
      } else {
        throw ParseError(line_no, "cannot detect layout from " + std::to_string(fields.size()) +
                                      " columns (expected 4 or >= 8)");
      }
    }
    first_data = false;
    if (static_cast<int>(fields.size()) < columns->required_columns()) {
      throw ParseError(line_no, "expected at least " + std::to_string(columns->required_columns()) +
                                    " columns, got " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (static_cast<int>(c) == columns->id) continue;
      if (!to_number(fields[c])) {
        throw ParseError(line_no, "non-numeric token '" + std::string(fields[c]) + "' in column " +
                                      std::to_string(c + 1));
      }
    }
    const double frame = *to_number(fields[columns->frame]);
    if (frame < 0.0 || frame != std::floor(frame)) {
      throw ParseError(line_no, "frame must be a non-negative integer");
    }
    rows.push_back({static_cast<Frame>(frame), format_id(fields[columns->id]),
                    *to_number(fields[columns->x]), *to_number(fields[columns->y])});
  }
  return rows;
}

Homography::Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography::Homography(const std::array<double, 9>& m) : m_(m) {
  if (!(std::abs(determinant()) > 1e-12)) throw ValidationError("homography is not invertible");
}

Homography Homography::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::array<double, 9> m{};
  for (auto& v : m) {
    if (!(in >> v)) throw ValidationError("homography file must hold 9 numbers");
  }
  double extra = 0.0;
  if (in >> extra) throw ValidationError("homography file must hold exactly 9 numbers");
  return Homography(m);
}

double Homography::determinant() const noexcept {
  const auto& a = m_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Homography Homography::inverse() const {
  const auto& a = m_;
  const double det = determinant();
  std::array<double, 9> inv{
      (a[4] * a[8] - a[5] * a[7]) / det, (a[2] * a[7] - a[1] * a[8]) / det,
      (a[1] * a[5] - a[2] * a[4]) / det, (a[5] * a[6] - a[3] * a[8]) / det,
      (a[0] * a[8] - a[2] * a[6]) / det, (a[2] * a[3] - a[0] * a[5]) / det,
      (a[3] * a[7] - a[4] * a[6]) / det, (a[1] * a[6] - a[0] * a[7]) / det,
      (a[0] * a[4] - a[1] * a[3]) / det,
  };
  return Homography(inv);
}

Vec2 apply_homography(const Homography& h, Vec2 p) {
  const auto& m = h.matrix();
  const double u = m[0] * p.x + m[1] * p.y + m[2];
  const double v = m[3] * p.x + m[4] * p.y + m[5];
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (std::abs(w) < 1e-12) throw DegeneratePointError("point maps to infinity under homography");
  return {u / w, v / w};
}

CanonicalData to_canonical_tracks(const std::vector<RawAnnotationRow>& rows,
                                  const std::optional<Homography>& homography, double source_fps,
                                  const Config& cfg) {
  if (!(source_fps > 0.0)) throw ValidationError("source fps must be > 0");
  cfg.validate();

  std::map<std::string, std::vector<const RawAnnotationRow*>> by_agent;
  for (const auto& r : rows) by_agent[r.agent_id].push_back(&r);

  CanonicalData data;
  data.summary.rows = rows.size();
  data.summary.source_agents = by_agent.size();
  const double dt = cfg.step_duration;

  for (auto& [id, agent_rows] : by_agent) {
    std::stable_sort(agent_rows.begin(), agent_rows.end(),
                     [](const RawAnnotationRow* a, const RawAnnotationRow* b) { return a->frame < b->frame; });
    std::vector<Trajectory> pieces(1);
    for (std::size_t i = 0; i < agent_rows.size(); ++i) {
      const RawAnnotationRow& r = *agent_rows[i];
      if (i > 0 && r.frame == agent_rows[i - 1]->frame) {
        throw DataError("agent '" + id + "' has duplicate frame " + std::to_string(r.frame));
      }
      const double t = static_cast<double>(r.frame) / source_fps;
      Vec2 p{r.raw_x, r.raw_y};
      if (homography) p = apply_homography(*homography, p);
      if (!pieces.back().empty()) {
        const double gap = t - pieces.back().points.back().t;
        const auto missing = static_cast<long long>(std::ceil(gap / dt - 1e-9)) - 1;
        if (missing > 2) pieces.emplace_back();
      }
      pieces.back().points.push_back({r.frame, t, p});
    }
    data.summary.split_tracks += pieces.size() - 1;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      Trajectory& piece = pieces[k];
      piece.agent_id = k == 0 ? id : id + "#" + std::to_string(k + 1);
      if (piece.size() < 2) {
        ++data.summary.dropped_tracks;
        continue;
      }
      Trajectory resampled = resample_trajectory(piece, dt);
      if (resampled.size() < 2) {
        ++data.summary.dropped_tracks;
        continue;
      }
      data.tracks.push_back(std::move(resampled));
    }
  }
  sort_by_agent(data.tracks);
  data.summary.tracks_written = data.tracks.size();
  return data;
}

CanonicalOutput to_canonical(const std::vector<RawAnnotationRow>& rows,
                             const std::optional<Homography>& homography, double source_fps,
                             const Config& cfg) {
  auto data = to_canonical_tracks(rows, homography, source_fps, cfg);
  return {write_canonical_csv(data.tracks), data.summary};
}

}  // namespace grouptraj::ingest
