#include <algorithm>
#include <atomic>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "sqrd/kernel.hpp"
#include "sqrd/lattice.hpp"

using namespace sqrd;

namespace {

// The eight symmetry images of (x,y) in the square of side z.
std::vector<std::pair<std::int64_t, std::int64_t>> orbit(std::int64_t z,
                                                         std::int64_t x,
                                                         std::int64_t y) {
  return {{x, y},         {z - x, y},     {x, z - y},     {z - x, z - y},
          {y, x},         {z - y, x},     {y, z - x},     {z - y, z - x}};
}

std::tuple<std::int64_t, std::int64_t, std::int64_t> key(const PointProfile& p) {
  return {p.z, p.x, p.y};
}

// Reference predicate for what search_square must report as a hits3 entry.
bool reportable(const PointProfile& p, const SearchOptions& opt) {
  if (p.rational_count < opt.min_count || p.rational_count == 4) return false;
  if (!p.primitive) return false;
  return !opt.filter || opt.filter->matches(p);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("classification of pinned points") {
  PointProfile corner = classify_point(1, 0, 0);
  CHECK(corner.sq_dists == std::array<Int128, 4>{0, 1, 2, 1});
  CHECK(corner.roots[0] == Int128(0));
  CHECK(corner.roots[1] == Int128(1));
  CHECK(!corner.roots[2].has_value());
  CHECK(corner.roots[3] == Int128(1));
  CHECK(corner.rational_count == 3);
  CHECK(corner.primitive);
  CHECK(corner.tags.on_edge);
  CHECK(corner.tags.on_diagonal);
  CHECK(corner.tags.n_times == 0);

  PointProfile edge = classify_point(4, 3, 0);
  CHECK(edge.sq_dists == std::array<Int128, 4>{9, 25, 17, 1});
  CHECK(edge.roots[0] == Int128(3));
  CHECK(edge.roots[1] == Int128(5));
  CHECK(!edge.roots[2].has_value());
  CHECK(edge.roots[3] == Int128(1));
  CHECK(edge.rational_count == 3);
  CHECK(edge.primitive);
  CHECK(edge.tags.on_edge);
  CHECK(!edge.tags.on_diagonal);

  PointProfile diag = classify_point(7, 3, 3);
  CHECK(diag.sq_dists == std::array<Int128, 4>{18, 25, 32, 25});
  CHECK(diag.rational_count == 2);
  CHECK(diag.tags.on_diagonal);
  CHECK(!diag.tags.on_edge);
  CHECK(diag.tags.n_times == 0);  // 7 is not a multiple of 3

  PointProfile center = classify_point(2, 1, 1);
  CHECK(center.rational_count == 0);
  CHECK(center.tags.on_midline);
  CHECK(center.tags.on_diagonal);
  CHECK(center.tags.n_times == 2);

  CHECK_THROWS_AS(classify_point(0, 0, 0), DomainError);
}

TEST_CASE("multiplier tag needs the side to be an exact multiple") {
  CHECK(classify_point(6, 1, 1).tags.n_times == 6);
  CHECK(classify_point(6, 2, 2).tags.n_times == 3);
  CHECK(classify_point(6, 3, 1).tags.n_times == 6);  // nearest side distance 1
  CHECK(classify_point(7, 3, 3).tags.n_times == 0);
  CHECK(classify_point(6, 0, 2).tags.n_times == 0);  // on the edge: d = 0
  CHECK(classify_point(6, 3, 3).tags.n_times == 2);
  CHECK(classify_point(6, -2, 3).tags.n_times == 3);  // outside: |x| = 2
}

TEST_CASE("classification is invariant under the square's symmetries") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> zd(1, 300);
  int failures = 0;
  for (int i = 0; i < 3000; ++i) {
    std::int64_t z = zd(rng);
    std::uniform_int_distribution<std::int64_t> pd(-2 * z, 3 * z);
    std::int64_t x = pd(rng), y = pd(rng);
    PointProfile base = classify_point(z, x, y);
    for (auto [ix, iy] : orbit(z, x, y)) {
      PointProfile img = classify_point(z, ix, iy);
      if (img.rational_count != base.rational_count) ++failures;
      if (img.primitive != base.primitive) ++failures;
      if (img.tags != base.tags) ++failures;
      // The four squared distances permute but never change as a multiset.
      auto a = base.sq_dists, b = img.sq_dists;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("scaling multiplies every distance and preserves the profile") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::int64_t> zd(1, 200), ld(2, 10);
  int failures = 0;
  for (int i = 0; i < 2000; ++i) {
    std::int64_t z = zd(rng);
    std::uniform_int_distribution<std::int64_t> pd(0, z);
    std::int64_t x = pd(rng), y = pd(rng), lam = ld(rng);
    PointProfile base = classify_point(z, x, y);
    PointProfile scaled = classify_point(lam * z, lam * x, lam * y);
    if (scaled.rational_count != base.rational_count) ++failures;
    if (scaled.tags != base.tags) ++failures;
    if (base.primitive && scaled.primitive) ++failures;  // gcd gained lam
    for (int j = 0; j < 4; ++j) {
      if (scaled.sq_dists[j] != sq(Int128(lam)) * base.sq_dists[j]) ++failures;
      if (base.roots[j].has_value() != scaled.roots[j].has_value()) ++failures;
      if (base.roots[j] && *scaled.roots[j] != Int128(lam) * *base.roots[j])
        ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("all-odd coordinates never reach four rational distances") {
  // x, y, z all odd forces x^2 + y^2 = 2 (mod 8), which is never a square.
  int failures = 0;
  for (std::int64_t z = 1; z <= 99; z += 2)
    for (std::int64_t x = 1; x <= z; x += 2)
      for (std::int64_t y = 1; y <= z; y += 2) {
        PointProfile p = classify_point(z, x, y);
        if (p.roots[0].has_value()) ++failures;
        if (p.rational_count > 3) ++failures;
      }
  CHECK(failures == 0);
}

TEST_CASE("open-diagonal points have at most two rational distances") {
  int failures = 0;
  for (std::int64_t z = 1; z <= 300; ++z)
    for (std::int64_t x = 1; x < z; ++x) {
      if (classify_point(z, x, x).rational_count > 2) ++failures;
      if (classify_point(z, x, z - x).rational_count > 2) ++failures;
    }
  CHECK(failures == 0);
}

TEST_CASE("filter parsing and interior-of-locus matching") {
  CHECK(Filter::parse("on_edge").kind == TagKind::OnEdge);
  CHECK(Filter::parse("on_midline").kind == TagKind::OnMidline);
  CHECK(Filter::parse("on_diagonal").kind == TagKind::OnDiagonal);
  Filter any_n = Filter::parse("n_times_distance");
  CHECK(any_n.kind == TagKind::NTimesDistance);
  CHECK(any_n.n == 0);
  Filter n5 = Filter::parse("n_times_distance(5)");
  CHECK(n5.n == 5);
  CHECK(n5.str() == "n_times_distance(5)");
  CHECK_THROWS_AS(Filter::parse("nonsense"), DomainError);
  CHECK_THROWS_AS(Filter::parse("n_times_distance(1)"), DomainError);
  CHECK_THROWS_AS(Filter::parse("n_times_distance(x)"), DomainError);
  CHECK_THROWS_AS(Filter::parse(""), DomainError);

  // A corner lies on edge and diagonal at once; only the edge filter takes it.
  PointProfile corner = classify_point(1, 0, 0);
  CHECK(Filter::parse("on_edge").matches(corner));
  CHECK(!Filter::parse("on_diagonal").matches(corner));

  PointProfile diag = classify_point(7, 3, 3);
  CHECK(Filter::parse("on_diagonal").matches(diag));
  CHECK(!Filter::parse("on_edge").matches(diag));

  // (0,1) in the side-2 square sits on an edge and on a midline.
  PointProfile border_mid = classify_point(2, 0, 1);
  CHECK(border_mid.tags.on_midline);
  CHECK(border_mid.tags.on_edge);
  CHECK(!Filter::parse("on_midline").matches(border_mid));
  CHECK(Filter::parse("on_midline").matches(classify_point(2, 1, 1)));

  CHECK(Filter::parse("n_times_distance").matches(classify_point(2, 1, 1)));
  CHECK(Filter::parse("n_times_distance(2)").matches(classify_point(2, 1, 1)));
  CHECK(!Filter::parse("n_times_distance(3)").matches(classify_point(2, 1, 1)));
  CHECK(Filter::parse("n_times_distance(3)").matches(classify_point(6, 2, 2)));
}

TEST_CASE("square instances and region geometry") {
  SquareInstance c = SquareInstance::closed(4);
  CHECK(c.is_closed_square());
  CHECK(c.point_count() == Int128(25));

  SquareInstance e = SquareInstance::extended(3, 1);
  CHECK(!e.is_closed_square());
  CHECK(e.x_min == -3);
  CHECK(e.x_max == 6);
  CHECK(e.point_count() == Int128(100));

  CHECK_THROWS_AS(SquareInstance::closed(0), DomainError);
  CHECK_THROWS_AS(SquareInstance::extended(3, -1), DomainError);
}

TEST_CASE("edge search of the side-4 square finds the eight off-corner hits") {
  SearchOptions opt;
  opt.filter = Filter::parse("on_edge");
  opt.min_count = 3;
  SearchReport rep = search_square(SquareInstance::closed(4), opt);
  CHECK(rep.hits4.empty());
  CHECK(rep.points_scanned == Int128(25));

  std::set<std::pair<std::int64_t, std::int64_t>> got;
  for (const PointProfile& p : rep.hits3) got.insert({p.x, p.y});
  std::set<std::pair<std::int64_t, std::int64_t>> expected = {
      {0, 1}, {0, 3}, {1, 0}, {3, 0}, {1, 4}, {3, 4}, {4, 1}, {4, 3}};
  CHECK(got == expected);
  // Corners of the side-4 square have three rational distances but gcd 4.
  CHECK(classify_point(4, 0, 0).rational_count == 3);
  CHECK(!classify_point(4, 0, 0).primitive);
}

TEST_CASE("search agrees with a naive rescan at every min_count") {
  for (int min_count : {1, 2, 3, 4}) {
    SearchOptions opt;
    opt.min_count = min_count;
    for (std::int64_t z = 1; z <= 40; ++z) {
      SearchReport rep = search_square(SquareInstance::closed(z), opt);
      std::vector<PointProfile> expect3, expect4;
      for (std::int64_t x = 0; x <= z; ++x)
        for (std::int64_t y = 0; y <= z; ++y) {
          PointProfile p = classify_point(z, x, y);
          if (p.rational_count == 4) expect4.push_back(p);
          else if (reportable(p, opt)) expect3.push_back(p);
        }
      CHECK(rep.hits3 == expect3);
      CHECK(rep.hits4 == expect4);
    }
  }
}

TEST_CASE("worker count never changes a search report") {
  SearchOptions one, many;
  one.min_count = many.min_count = 2;
  one.workers = 1;
  many.workers = 5;
  for (std::int64_t z : {17, 48, 97}) {
    SearchReport a = search_square(SquareInstance::closed(z), one);
    SearchReport b = search_square(SquareInstance::closed(z), many);
    CHECK(a.hits3 == b.hits3);
    CHECK(a.hits4 == b.hits4);
    CHECK(a.points_scanned == b.points_scanned);
  }
}

TEST_CASE("symmetry-reduced search reports the same hits as the full scan") {
  SearchOptions full, wedge;
  full.min_count = wedge.min_count = 3;
  wedge.use_symmetry = true;
  for (std::int64_t z = 1; z <= 100; ++z) {
    SearchReport a = search_square(SquareInstance::closed(z), full);
    SearchReport b = search_square(SquareInstance::closed(z), wedge);
    CHECK(a.hits3 == b.hits3);
    CHECK(a.hits4 == b.hits4);
    // The wedge 0 <= y <= x <= z/2 has (h+1)(h+2)/2 points, h = floor(z/2).
    std::int64_t h = z / 2;
    CHECK(b.points_scanned == Int128((h + 1) * (h + 2) / 2));
  }
}

TEST_CASE("symmetry is defined only on the closed square") {
  SearchOptions opt;
  opt.use_symmetry = true;
  CHECK_THROWS_AS(search_square(SquareInstance::extended(5, 1), opt),
                  DomainError);
}

TEST_CASE("searches refuse to start past the point budget") {
  SearchOptions opt;
  opt.point_budget = 50;
  CHECK_THROWS_AS(search_square(SquareInstance::closed(100), opt), RangeError);
  try {
    search_square(SquareInstance::closed(100), opt);
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}

TEST_CASE("search options are validated") {
  SearchOptions opt;
  opt.min_count = 0;
  CHECK_THROWS_AS(search_square(SquareInstance::closed(3), opt), DomainError);
  opt.min_count = 5;
  CHECK_THROWS_AS(search_square(SquareInstance::closed(3), opt), DomainError);
  opt.min_count = 3;
  opt.workers = 0;
  CHECK_THROWS_AS(search_square(SquareInstance::closed(3), opt), DomainError);
}

TEST_CASE("three-distance family construction") {
  auto family = three_distance_family(5);
  REQUIRE(family.size() == 1);
  CHECK(family[0].first == SquareInstance::closed(4));
  CHECK(family[0].second == classify_point(4, 3, 0));
  CHECK(family[0].second.rational_count == 3);

  CHECK(three_distance_family(4).empty());

  auto larger = three_distance_family(100);
  CHECK(larger.size() == 16);  // one placement per primitive triple
  for (const auto& [inst, profile] : larger) {
    CHECK(profile.rational_count >= 3);
    CHECK(profile == classify_point(profile.z, profile.x, profile.y));
    CHECK(inst.is_closed_square());
    CHECK(profile.y == 0);
    CHECK(profile.x < inst.z);  // shorter leg against the longer side
  }
}

TEST_CASE("sweep aggregates per-z searches in order") {
  SearchOptions opt;
  opt.min_count = 3;
  std::vector<std::int64_t> seen;
  SweepHooks hooks;
  hooks.on_z_done = [&](std::int64_t z, const std::vector<PointProfile>&,
                        const std::vector<PointProfile>&, Int128) {
    seen.push_back(z);
  };
  SweepResult res = sweep(1, 50, opt, 0, hooks);
  CHECK(res.completed);
  CHECK(res.last_z_done == 50);
  CHECK(res.report.points_scanned == Int128(45525));  // sum of (z+1)^2
  CHECK(seen.size() == 50);
  CHECK(std::is_sorted(seen.begin(), seen.end()));

  // Hits arrive sorted by (z, x, y) and match the per-square searches.
  std::vector<PointProfile> expect;
  for (std::int64_t z = 1; z <= 50; ++z) {
    SearchReport rep = search_square(SquareInstance::closed(z), opt);
    expect.insert(expect.end(), rep.hits3.begin(), rep.hits3.end());
  }
  CHECK(res.report.hits3 == expect);
  CHECK(res.report.hits4.empty());
  for (std::size_t i = 1; i < res.report.hits3.size(); ++i)
    CHECK(key(res.report.hits3[i - 1]) < key(res.report.hits3[i]));
}

TEST_CASE("an interrupted sweep resumes into the uninterrupted report") {
  SearchOptions opt;
  opt.min_count = 3;
  opt.filter = Filter::parse("on_edge");

  SweepResult oneshot = sweep(1, 60, opt, 0);

  SweepHooks stop_hooks;
  stop_hooks.stop_after_z = 25;
  SweepResult first = sweep(1, 60, opt, 0, stop_hooks);
  CHECK(!first.completed);
  CHECK(first.last_z_done == 25);

  SweepSeed seed;
  seed.resume_after_z = first.last_z_done;
  seed.hits3 = first.report.hits3;
  seed.hits4 = first.report.hits4;
  seed.points_scanned = first.report.points_scanned;
  SweepResult second = sweep(1, 60, opt, 0, {}, seed);
  CHECK(second.completed);
  CHECK(second.report.hits3 == oneshot.report.hits3);
  CHECK(second.report.hits4 == oneshot.report.hits4);
  CHECK(second.report.points_scanned == oneshot.report.points_scanned);
}

TEST_CASE("the cooperative stop flag halts a sweep between z values") {
  SearchOptions opt;
  std::atomic<bool> stop{false};
  SweepHooks hooks;
  hooks.stop = &stop;
  hooks.on_z_done = [&](std::int64_t z, const std::vector<PointProfile>&,
                        const std::vector<PointProfile>&, Int128) {
    if (z == 10) stop.store(true);
  };
  SweepResult res = sweep(1, 50, opt, 0, hooks);
  CHECK(!res.completed);
  CHECK(res.last_z_done == 10);
}

TEST_CASE("region extension widens every scanned square") {
  SearchOptions opt;
  SweepResult res = sweep(1, 3, opt, 1);
  // Sides 1..3 extended once: (3z+1)^2 points each.
  CHECK(res.report.points_scanned == Int128(16 + 49 + 100));
  CHECK_THROWS_AS(sweep(3, 1, opt, 0), DomainError);
  CHECK_THROWS_AS(sweep(1, 3, opt, -1), DomainError);
}

}  // TEST_SUITE
