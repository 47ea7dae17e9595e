// Density heuristic for the four-rational-distance question: the closed-form
// tail of the a^3 * a^-8 density integral, empirical perfect-square hit
// rates for u^2 + v^2 at a given scale, and a log-log slope fit relating the
// two. Rates stay exact rationals; only the fit enters floating point.
#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <vector>

namespace sqrd {

using Rat = boost::rational<std::int64_t>;

/// Default generator seed for sampled rates; fixed so reports reproduce.
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Exactly 1/(4 a0^4), the tail of the density integral from a0 upward.
Rat tail_integral(std::int64_t a0);

enum class RateMode { Exhaustive, Sampled };

/// Fraction of pairs (u, v) in [1, m]^2 with u^2 + v^2 a perfect square.
/// Exhaustive mode enumerates all m^2 pairs and refuses m > 4096; sampled
/// mode draws `trials` seeded pairs and runs single-threaded so the result
/// never depends on worker count.
Rat square_hit_rate(std::int64_t m, RateMode mode, std::int64_t trials = 100000,
                    std::uint64_t seed = kDefaultSeed, int workers = 1);

struct FitResult {
  double slope = 0.0;
  std::vector<std::size_t> excluded;  // indices of zero rates left out of the fit
};

/// Least-squares slope of log(rate) against log(magnitude).
FitResult fit_exponent(const std::vector<std::int64_t>& magnitudes,
                       const std::vector<Rat>& rates);

struct DensityEstimate {
  std::int64_t a0 = 1;
  Rat tail;
  std::vector<std::int64_t> magnitudes;
  std::vector<Rat> rates;
  std::vector<std::size_t> excluded;
  double fitted_exponent = 0.0;
};

DensityEstimate estimate_density(std::int64_t a0,
                                 const std::vector<std::int64_t>& magnitudes,
                                 RateMode mode, std::int64_t trials = 100000,
                                 std::uint64_t seed = kDefaultSeed,
                                 int workers = 1);

}  // namespace sqrd
