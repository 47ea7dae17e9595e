// Lattice-point classification for integer-sided squares.
//
// A square of side z has vertices (0,0), (0,z), (z,z), (z,0). For a lattice
// point (x,y) the four squared vertex distances are
//   x^2 + y^2,  x^2 + (z-y)^2,  (z-x)^2 + (z-y)^2,  (z-x)^2 + y^2
// in that fixed order. A distance is "rational" in the scaled-down unit
// square exactly when the squared distance here is a perfect square.
// This module classifies points, scans squares and z-ranges for points with
// many rational distances, and builds the classical three-distance family
// from Pythagorean triples.
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqrd/int128.hpp"
#include "sqrd/triples.hpp"

namespace sqrd {

/// A square of side z together with the rectangle of lattice points to scan.
/// Bounds are absolute coordinates. The default region is the closed square
/// [0,z]x[0,z]; extended(z,k) widens it to [-kz, (k+1)z] on both axes.
struct SquareInstance {
  std::int64_t z = 1;
  std::int64_t x_min = 0, x_max = 1;
  std::int64_t y_min = 0, y_max = 1;

  static SquareInstance closed(std::int64_t z);
  static SquareInstance extended(std::int64_t z, std::int64_t k);

  bool is_closed_square() const;
  Int128 point_count() const;

  friend bool operator==(const SquareInstance&, const SquareInstance&) = default;
};

/// Geometric markers for a classified point. n_times is 0 when the side is
/// not an integer multiple of the point's distance to its nearest side,
/// otherwise the multiplier n >= 2 with z = n * d.
struct Tags {
  bool on_edge = false;
  bool on_midline = false;
  bool on_diagonal = false;
  std::int64_t n_times = 0;

  std::vector<std::string> names() const;

  friend bool operator==(const Tags&, const Tags&) = default;
};

struct PointProfile {
  std::int64_t z = 1;
  std::int64_t x = 0, y = 0;
  std::array<Int128, 4> sq_dists{};
  std::array<std::optional<Int128>, 4> roots{};
  int rational_count = 0;
  bool primitive = false;  // gcd(x, y, z) == 1
  Tags tags;

  friend bool operator==(const PointProfile&, const PointProfile&) = default;
};

enum class TagKind { OnEdge, OnMidline, OnDiagonal, NTimesDistance };

/// A tag predicate for restricting hit reports. Non-edge filters exclude
/// points that also lie on an edge, so on_midline and on_diagonal select the
/// interior part of their locus; corners never satisfy them.
struct Filter {
  TagKind kind = TagKind::OnEdge;
  std::int64_t n = 0;  // NTimesDistance only; 0 accepts every n >= 2

  static Filter parse(const std::string& text);
  bool matches(const PointProfile& p) const;
  std::string str() const;

  friend bool operator==(const Filter&, const Filter&) = default;
};

struct SearchOptions {
  std::optional<Filter> filter;
  int min_count = 3;  // 1..4
  int workers = 1;
  bool use_symmetry = false;  // scan the wedge 0 <= y <= x <= z/2, expand orbits
  Int128 point_budget = Int128(std::int64_t{1} << 34);
};

/// hits3 holds primitive, filter-matching points with
/// min_count <= rational_count < 4. hits4 holds every point with all four
/// distances rational, unconditionally: such a point contradicts the
/// emptiness conjecture and must never be filtered away.
struct SearchReport {
  std::int64_t z_lo = 0, z_hi = 0;
  std::optional<Filter> filter;
  int min_count = 3;
  std::vector<PointProfile> hits3;
  std::vector<PointProfile> hits4;
  Int128 points_scanned = 0;
  double elapsed_seconds = 0.0;
};

/// Exact classification of one point. Pure; total for z >= 1.
PointProfile classify_point(std::int64_t z, std::int64_t x, std::int64_t y);

/// Exhaustive scan of the instance region. Refuses regions whose point count
/// exceeds options.point_budget. Deterministic for every worker count.
SearchReport search_square(const SquareInstance& inst, const SearchOptions& options);

/// For each primitive triple with legs u < v <= hypotenuse bound, the square
/// of side v with the point (u, 0), which has at least three rational vertex
/// distances. Every emission is re-checked through classify_point.
std::vector<std::pair<SquareInstance, PointProfile>> three_distance_family(
    std::int64_t max_hyp);

/// Carried-over accumulator state for resuming a sweep after z = resume_after_z.
struct SweepSeed {
  std::int64_t resume_after_z = 0;
  std::vector<PointProfile> hits3;
  std::vector<PointProfile> hits4;
  Int128 points_scanned = 0;
};

struct SweepHooks {
  /// Called after each completed z with that z's hits and scan count.
  std::function<void(std::int64_t z, const std::vector<PointProfile>& hits3,
                     const std::vector<PointProfile>& hits4, Int128 scanned)>
      on_z_done;
  /// Cooperative stop, polled between z values.
  const std::atomic<bool>* stop = nullptr;
  /// Deterministic stop point for interrupt/resume testing.
  std::optional<std::int64_t> stop_after_z;
};

struct SweepResult {
  SearchReport report;
  bool completed = true;
  std::int64_t last_z_done = 0;
};

/// Scans z = z_lo..z_hi (closed squares, or extended regions when
/// region_extension > 0), aggregating per-z reports in (z, x, y) order.
/// A resumed sweep produces the same report as an uninterrupted one.
SweepResult sweep(std::int64_t z_lo, std::int64_t z_hi, const SearchOptions& options,
                  std::int64_t region_extension, const SweepHooks& hooks = {},
                  const SweepSeed& seed = {});

}  // namespace sqrd
