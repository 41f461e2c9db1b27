#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grouptraj/types.hpp"

namespace grouptraj::ingest {

struct RawAnnotationRow {
  Frame frame = 0;
  std::string agent_id;
  double raw_x = 0.0;
  double raw_y = 0.0;

  friend bool operator==(const RawAnnotationRow&, const RawAnnotationRow&) = default;
};

/// Zero-based column indices of the fields we keep.
struct ColumnMap {
  int frame = 0;
  int id = 1;
  int x = 2;
  int y = 4;

  /// obsmat layout: frame, id, x, z, y, vx, vz, vy
  static constexpr ColumnMap obsmat() { return {0, 1, 2, 4}; }
  /// frame, id, x, y
  static constexpr ColumnMap canonical() { return {0, 1, 2, 3}; }

  int required_columns() const;
};

/// Parses "frame=0,id=1,x=2,y=4". Unnamed keys keep their defaults.
ColumnMap parse_column_map(std::string_view spec);

/// Parses whitespace- or comma-separated numeric rows. Without an explicit
/// column map the layout is detected from the first data row: >= 8 columns
/// is obsmat, exactly 4 is canonical. A leading `frame,...` header and '#'
/// comments are skipped.
std::vector<RawAnnotationRow> parse_obsmat(std::string_view text,
                                           std::optional<ColumnMap> columns = std::nullopt);

/// Planar perspective transform, row-major 3x3.
class Homography {
 public:
  Homography();  // identity
  explicit Homography(const std::array<double, 9>& m);

  /// Nine whitespace-separated numbers, row-major.
  static Homography parse(std::string_view text);

  double determinant() const noexcept;
  Homography inverse() const;
  const std::array<double, 9>& matrix() const noexcept { return m_; }

 private:
  std::array<double, 9> m_;
};

/// (u, v, w) = H (x, y, 1); returns (u/w, v/w).
Vec2 apply_homography(const Homography& h, Vec2 p);

struct IngestSummary {
  std::size_t rows = 0;
  std::size_t source_agents = 0;
  std::size_t tracks_written = 0;
  std::size_t dropped_tracks = 0;
  /// Extra tracks created by splitting on long gaps.
  std::size_t split_tracks = 0;
};

struct CanonicalData {
  std::vector<Trajectory> tracks;
  IngestSummary summary;
};

/// Groups rows per agent, maps to meters, splits on gaps longer than two
/// steps (`id#2`, `id#3`, ...), resamples to cfg.step_duration and drops
/// tracks left with fewer than two points.
CanonicalData to_canonical_tracks(const std::vector<RawAnnotationRow>& rows,
                                  const std::optional<Homography>& homography, double source_fps,
                                  const Config& cfg);

struct CanonicalOutput {
  std::string csv;
  IngestSummary summary;
};

CanonicalOutput to_canonical(const std::vector<RawAnnotationRow>& rows,
                             const std::optional<Homography>& homography, double source_fps,
                             const Config& cfg);

}  // namespace grouptraj::ingest
