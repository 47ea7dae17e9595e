// Microbenchmarks for the hot paths: the exact kernel, point
// classification, square scanning and the equation scan. Inputs come from
// fixed-seed generators so runs are comparable.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "sqrd/descent.hpp"
#include "sqrd/kernel.hpp"
#include "sqrd/lattice.hpp"
#include "sqrd/triples.hpp"

namespace {

std::vector<sqrd::Int128> fixture_values(int bits, std::size_t count) {
  std::mt19937_64 rng(99);
  std::vector<sqrd::Int128> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned __int128 v =
        (static_cast<unsigned __int128>(rng()) << 64) | rng();
    v &= (static_cast<unsigned __int128>(1) << bits) - 1;
    out.push_back(sqrd::Int128(static_cast<__int128>(v)));
  }
  return out;
}

void BM_isqrt(benchmark::State& state) {
  auto values = fixture_values(static_cast<int>(state.range(0)), 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrd::isqrt(values[i]));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_isqrt)->Arg(48)->Arg(63)->Arg(100)->Arg(124);

void BM_is_perfect_square_miss(benchmark::State& state) {
  auto values = fixture_values(static_cast<int>(state.range(0)), 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrd::is_perfect_square(values[i]));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_is_perfect_square_miss)->Arg(48)->Arg(100);

void BM_is_perfect_square_hit(benchmark::State& state) {
  auto roots = fixture_values(static_cast<int>(state.range(0)), 4096);
  std::vector<sqrd::Int128> squares;
  squares.reserve(roots.size());
  for (const sqrd::Int128& r : roots) squares.push_back(sqrd::sq(r));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrd::is_perfect_square(squares[i]));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_is_perfect_square_hit)->Arg(30)->Arg(60);

void BM_is_prime(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<sqrd::Int128> values;
  for (int i = 0; i < 4096; ++i)
    values.push_back(sqrd::Int128(std::uint64_t{rng()}));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrd::is_prime(values[i]));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_is_prime);

void BM_classify_point(benchmark::State& state) {
  std::mt19937_64 rng(13);
  const std::int64_t z = 997;
  std::uniform_int_distribution<std::int64_t> pd(0, z);
  std::vector<std::pair<std::int64_t, std::int64_t>> points;
  for (int i = 0; i < 4096; ++i) points.push_back({pd(rng), pd(rng)});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sqrd::classify_point(z, points[i].first, points[i].second));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_classify_point);

void BM_search_square(benchmark::State& state) {
  const std::int64_t z = state.range(0);
  sqrd::SearchOptions opt;
  opt.min_count = 4;
  for (auto _ : state) {
    sqrd::SearchReport rep =
        sqrd::search_square(sqrd::SquareInstance::closed(z), opt);
    benchmark::DoNotOptimize(rep);
  }
  state.SetItemsProcessed(state.iterations() * (z + 1) * (z + 1));
}
BENCHMARK(BM_search_square)->Arg(100)->Arg(400);

void BM_equation_scan(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqrd::search_equation(1, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_equation_scan)->Arg(200)->Arg(500);

void BM_primitive_triples(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sqrd::primitive_triples(state.range(0)));
}
BENCHMARK(BM_primitive_triples)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
