#include "sqrd/lattice.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

#include "sqrd/kernel.hpp"
#include "sqrd/parallel.hpp"

namespace sqrd {

namespace {

void validate_instance(const SquareInstance& inst) {
  if (inst.z < 1) throw DomainError("square instance: side must be >= 1");
  if (inst.x_min > inst.x_max || inst.y_min > inst.y_max)
    throw DomainError("square instance: empty region");
}

bool hit_order(const PointProfile& lhs, const PointProfile& rhs) {
  if (lhs.z != rhs.z) return lhs.z < rhs.z;
  if (lhs.x != rhs.x) return lhs.x < rhs.x;
  return lhs.y < rhs.y;
}

// Points visited by the symmetry-reduced scan: one representative per orbit
// of the square's 8 symmetries, the wedge 0 <= y <= x <= z/2.
Int128 wedge_count(std::int64_t z) {
  Int128 h = z / 2;
  return (h + 1) * (h + 2) / 2;
}

struct RowHits {
  std::vector<PointProfile> h3;
  std::vector<PointProfile> h4;
};

bool report_hit(const PointProfile& p, const SearchOptions& opt, RowHits& out) {
  if (p.rational_count == 4) {
    out.h4.push_back(p);
    return true;
  }
  if (p.rational_count >= opt.min_count && p.primitive &&
      (!opt.filter || opt.filter->matches(p))) {
    out.h3.push_back(p);
    return true;
  }
  return false;
}

// Hot path: tests distances in order and bails as soon as the point can no
// longer reach min_count, which also rules out a four-rational point. Only
// surviving points pay for a full classification.
void scan_point(std::int64_t z, std::int64_t x, std::int64_t y,
                const SearchOptions& opt, RowHits& out) {
  Int128 xx = sq(Int128(x)), yy = sq(Int128(y));
  Int128 cx = sq(Int128(z) - x), cy = sq(Int128(z) - y);
  Int128 d[4] = {xx + yy, xx + cy, cx + cy, cx + yy};
  int fails = 0;
  for (int i = 0; i < 4; ++i) {
    if (!is_perfect_square(d[i])) {
      ++fails;
      if (4 - fails < opt.min_count) return;
    }
  }
  PointProfile p = classify_point(z, x, y);
  if (p.rational_count != 4 - fails)
    throw std::logic_error("search: scan and classification disagree");
  report_hit(p, opt, out);
}

}  // namespace

SquareInstance SquareInstance::closed(std::int64_t z) {
  if (z < 1) throw DomainError("square instance: side must be >= 1");
  return SquareInstance{z, 0, z, 0, z};
}

SquareInstance SquareInstance::extended(std::int64_t z, std::int64_t k) {
  if (z < 1) throw DomainError("square instance: side must be >= 1");
  if (k < 0) throw DomainError("square instance: extension factor must be >= 0");
  Int128 lo = Int128(-k) * z, hi = (Int128(k) + 1) * z;
  return SquareInstance{z, lo.to_int64(), hi.to_int64(), lo.to_int64(),
                        hi.to_int64()};
}

bool SquareInstance::is_closed_square() const {
  return x_min == 0 && y_min == 0 && x_max == z && y_max == z;
}

Int128 SquareInstance::point_count() const {
  return (Int128(x_max) - x_min + 1) * (Int128(y_max) - y_min + 1);
}

std::vector<std::string> Tags::names() const {
  std::vector<std::string> out;
  if (on_edge) out.push_back("on_edge");
  if (on_midline) out.push_back("on_midline");
  if (on_diagonal) out.push_back("on_diagonal");
  if (n_times != 0)
    out.push_back("n_times_distance(" + std::to_string(n_times) + ")");
  return out;
}

Filter Filter::parse(const std::string& text) {
  if (text == "on_edge") return Filter{TagKind::OnEdge, 0};
  if (text == "on_midline") return Filter{TagKind::OnMidline, 0};
  if (text == "on_diagonal") return Filter{TagKind::OnDiagonal, 0};
  if (text == "n_times_distance") return Filter{TagKind::NTimesDistance, 0};
  if (text.rfind("n_times_distance(", 0) == 0 && text.back() == ')') {
    std::string body = text.substr(17, text.size() - 18);
    std::size_t used = 0;
    std::int64_t n = 0;
    try {
      n = std::stoll(body, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == body.size() && n >= 2) return Filter{TagKind::NTimesDistance, n};
  }
  throw DomainError(
      "filter: expected one of on_edge, on_midline, on_diagonal, "
      "n_times_distance, n_times_distance(N) with N >= 2; got \"" +
      text + "\"");
}

bool Filter::matches(const PointProfile& p) const {
  bool tagged = false;
  switch (kind) {
    case TagKind::OnEdge: tagged = p.tags.on_edge; break;
    case TagKind::OnMidline: tagged = p.tags.on_midline; break;
    case TagKind::OnDiagonal: tagged = p.tags.on_diagonal; break;
    case TagKind::NTimesDistance:
      tagged = p.tags.n_times >= 2 && (n == 0 || p.tags.n_times == n);
      break;
  }
  // Non-edge filters select the interior part of their locus.
  return tagged && (kind == TagKind::OnEdge || !p.tags.on_edge);
}

std::string Filter::str() const {
  switch (kind) {
    case TagKind::OnEdge: return "on_edge";
    case TagKind::OnMidline: return "on_midline";
    case TagKind::OnDiagonal: return "on_diagonal";
    case TagKind::NTimesDistance:
      return n == 0 ? "n_times_distance"
                    : "n_times_distance(" + std::to_string(n) + ")";
  }
  throw std::logic_error("filter: bad kind");
}

PointProfile classify_point(std::int64_t z, std::int64_t x, std::int64_t y) {
  if (z < 1) throw DomainError("classify_point: side must be >= 1");
  PointProfile p;
  p.z = z;
  p.x = x;
  p.y = y;
  Int128 xx = sq(Int128(x)), yy = sq(Int128(y));
  Int128 cx = sq(Int128(z) - x), cy = sq(Int128(z) - y);
  p.sq_dists = {xx + yy, xx + cy, cx + cy, cx + yy};
  p.rational_count = 0;
  for (int i = 0; i < 4; ++i) {
    p.roots[i] = is_perfect_square(p.sq_dists[i]);
    if (p.roots[i]) ++p.rational_count;
  }
  p.primitive = gcd(Int128(x), Int128(y), Int128(z)) == 1;
  p.tags.on_edge = x == 0 || x == z || y == 0 || y == z;
  p.tags.on_midline = 2 * Int128(x) == Int128(z) || 2 * Int128(y) == Int128(z);
  p.tags.on_diagonal = x == y || Int128(x) + y == Int128(z);
  Int128 d = Int128(x).abs();
  d = std::min(d, (Int128(z) - x).abs());
  d = std::min(d, Int128(y).abs());
  d = std::min(d, (Int128(z) - y).abs());
  if (d >= 1 && Int128(z) % d == 0) {
    Int128 n = Int128(z) / d;
    if (n >= 2) p.tags.n_times = n.to_int64();
  }
  return p;
}

SearchReport search_square(const SquareInstance& inst, const SearchOptions& opt) {
  validate_instance(inst);
  if (opt.min_count < 1 || opt.min_count > 4)
    throw DomainError("search: min_count must be in 1..4");
  if (opt.workers < 1) throw DomainError("search: workers must be >= 1");
  if (opt.use_symmetry && !inst.is_closed_square())
    throw DomainError("search: symmetry reduction needs the closed square region");

  Int128 cost = opt.use_symmetry ? wedge_count(inst.z) : inst.point_count();
  if (cost > opt.point_budget)
    throw RangeError("search: region has " + cost.str() +
                     " points, over the budget of " + opt.point_budget.str());

  auto started = std::chrono::steady_clock::now();
  SearchReport rep;
  rep.z_lo = rep.z_hi = inst.z;
  rep.filter = opt.filter;
  rep.min_count = opt.min_count;
  rep.points_scanned = cost;

  std::vector<RowHits> rows;
  if (!opt.use_symmetry) {
    std::size_t width = static_cast<std::size_t>(inst.x_max - inst.x_min + 1);
    rows = parallel_map_ordered<RowHits>(width, opt.workers, [&](std::size_t i) {
      std::int64_t x = inst.x_min + static_cast<std::int64_t>(i);
      RowHits out;
      for (std::int64_t y = inst.y_min; y <= inst.y_max; ++y)
        scan_point(inst.z, x, y, opt, out);
      return out;
    });
  } else {
    std::int64_t h = inst.z / 2;
    rows = parallel_map_ordered<RowHits>(
        static_cast<std::size_t>(h + 1), opt.workers, [&](std::size_t i) {
          std::int64_t x = static_cast<std::int64_t>(i);
          RowHits out;
          for (std::int64_t y = 0; y <= x; ++y)
            scan_point(inst.z, x, y, opt, out);
          return out;
        });
  }

  for (const RowHits& row : rows) {
    if (!opt.use_symmetry) {
      rep.hits3.insert(rep.hits3.end(), row.h3.begin(), row.h3.end());
      rep.hits4.insert(rep.hits4.end(), row.h4.begin(), row.h4.end());
      continue;
    }
    // Expand each wedge representative to its orbit; counts, primitivity,
    // tags and therefore hit status are invariant under the 8 symmetries.
    for (const std::vector<PointProfile>* list : {&row.h3, &row.h4}) {
      for (const PointProfile& p : *list) {
        std::set<std::pair<std::int64_t, std::int64_t>> orbit;
        std::int64_t z = inst.z;
        for (auto [u, v] : std::initializer_list<std::pair<std::int64_t, std::int64_t>>{
                 {p.x, p.y}, {z - p.x, p.y}, {p.x, z - p.y}, {z - p.x, z - p.y}}) {
          orbit.emplace(u, v);
          orbit.emplace(v, u);
        }
        for (auto [u, v] : orbit) {
          PointProfile image = classify_point(z, u, v);
          if (image.rational_count != p.rational_count)
            throw std::logic_error("search: symmetry image changed the count");
          RowHits routed;
          report_hit(image, opt, routed);
          rep.hits3.insert(rep.hits3.end(), routed.h3.begin(), routed.h3.end());
          rep.hits4.insert(rep.hits4.end(), routed.h4.begin(), routed.h4.end());
        }
      }
    }
  }

  std::sort(rep.hits3.begin(), rep.hits3.end(), hit_order);
  std::sort(rep.hits4.begin(), rep.hits4.end(), hit_order);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return rep;
}

std::vector<std::pair<SquareInstance, PointProfile>> three_distance_family(
    std::int64_t max_hyp) {
  std::vector<std::pair<SquareInstance, PointProfile>> out;
  for (const PythTriple& t : primitive_triples(max_hyp)) {
    std::int64_t u = std::min(t.even_leg, t.odd_leg);
    std::int64_t v = std::max(t.even_leg, t.odd_leg);
    PointProfile p = classify_point(v, u, 0);
    if (p.rational_count < 3)
      throw std::logic_error("three-distance family: emission fails its own check");
    out.emplace_back(SquareInstance::closed(v), p);
  }
  return out;
}

SweepResult sweep(std::int64_t z_lo, std::int64_t z_hi, const SearchOptions& opt,
                  std::int64_t region_extension, const SweepHooks& hooks,
                  const SweepSeed& seed) {
  if (z_lo < 1 || z_lo > z_hi) throw DomainError("sweep: needs 1 <= z_lo <= z_hi");
  if (region_extension < 0)
    throw DomainError("sweep: region extension must be >= 0");

  std::int64_t start = std::max(z_lo, seed.resume_after_z + 1);
  Int128 cost = 0;
  for (std::int64_t z = start; z <= z_hi; ++z) {
    SquareInstance inst = region_extension == 0
                              ? SquareInstance::closed(z)
                              : SquareInstance::extended(z, region_extension);
    cost += opt.use_symmetry ? wedge_count(z) : inst.point_count();
  }
  if (cost > opt.point_budget)
    throw RangeError("sweep: range has " + cost.str() +
                     " points, over the budget of " + opt.point_budget.str());

  auto started = std::chrono::steady_clock::now();
  SweepResult result;
  result.last_z_done = seed.resume_after_z;
  SearchReport& rep = result.report;
  rep.z_lo = z_lo;
  rep.z_hi = z_hi;
  rep.filter = opt.filter;
  rep.min_count = opt.min_count;
  rep.hits3 = seed.hits3;
  rep.hits4 = seed.hits4;
  rep.points_scanned = seed.points_scanned;

  for (std::int64_t z = start; z <= z_hi; ++z) {
    SquareInstance inst = region_extension == 0
                              ? SquareInstance::closed(z)
                              : SquareInstance::extended(z, region_extension);
    SearchReport one = search_square(inst, opt);
    rep.hits3.insert(rep.hits3.end(), one.hits3.begin(), one.hits3.end());
    rep.hits4.insert(rep.hits4.end(), one.hits4.begin(), one.hits4.end());
    rep.points_scanned += one.points_scanned;
    result.last_z_done = z;
    if (hooks.on_z_done) hooks.on_z_done(z, one.hits3, one.hits4, one.points_scanned);
    if (hooks.stop_after_z && z >= *hooks.stop_after_z && z < z_hi) {
      result.completed = false;
      break;
    }
    if (hooks.stop && hooks.stop->load(std::memory_order_relaxed) && z < z_hi) {
      result.completed = false;
      break;
    }
  }

  std::sort(rep.hits3.begin(), rep.hits3.end(), hit_order);
  std::sort(rep.hits4.begin(), rep.hits4.end(), hit_order);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

}  // namespace sqrd
