#include "sqrd/heuristic.hpp"

#include <cmath>
#include <random>

#include "sqrd/int128.hpp"
#include "sqrd/kernel.hpp"
#include "sqrd/parallel.hpp"

namespace sqrd {

namespace {

constexpr std::int64_t kExhaustiveCap = 4096;

}  // namespace

Rat tail_integral(std::int64_t a0) {
  if (a0 < 1) throw DomainError("tail_integral: a0 must be >= 1");
  Int128 denom = 4 * sq(sq(Int128(a0)));
  if (!denom.fits_int64())
    throw RangeError("tail_integral: 4*a0^4 exceeds the exact rational range");
  return Rat(1, denom.to_int64());
}

Rat square_hit_rate(std::int64_t m, RateMode mode, std::int64_t trials,
                    std::uint64_t seed, int workers) {
  if (m < 1) throw DomainError("square_hit_rate: scale must be >= 1");
  if (mode == RateMode::Exhaustive) {
    if (m > kExhaustiveCap)
      throw RangeError("square_hit_rate: exhaustive scan of " +
                       (Int128(m) * m).str() + " pairs is over the " +
                       (Int128(kExhaustiveCap) * kExhaustiveCap).str() +
                       "-pair budget; use sampled mode");
    auto rows = parallel_map_ordered<std::int64_t>(
        static_cast<std::size_t>(m), workers, [&](std::size_t i) {
          std::int64_t u = static_cast<std::int64_t>(i) + 1;
          Int128 uu = sq(Int128(u));
          std::int64_t hits = 0;
          for (std::int64_t v = 1; v <= m; ++v)
            if (is_perfect_square(uu + sq(Int128(v)))) ++hits;
          return hits;
        });
    std::int64_t hits = 0;
    for (std::int64_t h : rows) hits += h;
    return Rat(hits, m * m);
  }

  if (trials < 1) throw DomainError("square_hit_rate: trials must be >= 1");
  (void)workers;  // sampled mode is single-threaded by design
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> pick(1, m);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    Int128 u = pick(gen), v = pick(gen);
    if (is_perfect_square(sq(u) + sq(v))) ++hits;
  }
  return Rat(hits, trials);
}

FitResult fit_exponent(const std::vector<std::int64_t>& magnitudes,
                       const std::vector<Rat>& rates) {
  if (magnitudes.size() != rates.size())
    throw DomainError("fit_exponent: magnitudes and rates differ in length");
  if (magnitudes.size() < 3)
    throw DomainError("fit_exponent: needs at least 3 points");
  FitResult fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (magnitudes[i] < 1)
      throw DomainError("fit_exponent: magnitudes must be >= 1");
    if (rates[i].numerator() == 0) {
      fit.excluded.push_back(i);
      continue;
    }
    xs.push_back(std::log(static_cast<double>(magnitudes[i])));
    ys.push_back(std::log(boost::rational_cast<double>(rates[i])));
  }
  if (xs.size() < 2)
    throw DomainError("fit_exponent: fewer than 2 nonzero rates");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den == 0) throw DomainError("fit_exponent: all magnitudes equal");
  fit.slope = num / den;
  return fit;
}

DensityEstimate estimate_density(std::int64_t a0,
                                 const std::vector<std::int64_t>& magnitudes,
                                 RateMode mode, std::int64_t trials,
                                 std::uint64_t seed, int workers) {
  DensityEstimate est;
  est.a0 = a0;
  est.tail = tail_integral(a0);
  est.magnitudes = magnitudes;
  for (std::int64_t m : magnitudes)
    est.rates.push_back(square_hit_rate(m, mode, trials, seed, workers));
  FitResult fit = fit_exponent(est.magnitudes, est.rates);
  est.excluded = fit.excluded;
  est.fitted_exponent = fit.slope;
  return est;
}

}  // namespace sqrd
