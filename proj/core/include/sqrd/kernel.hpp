#pragma once

// Exact integer primitives: integer square root, perfect-square testing,
// gcd and deterministic 64-bit primality. Everything else in the project
// is built on these four operations. All of them are pure.

#include <cstdint>
#include <optional>

#include "sqrd/int128.hpp"

namespace sqrd {

/// Largest r with r*r <= n. Throws DomainError for n < 0.
///
/// Values that fit in 64 bits go through hardware sqrt with an exact
/// fixup; wider values use a Newton iteration. Either way the result is
/// post-verified (r^2 <= n < (r+1)^2) before it is returned.
Int128 isqrt(Int128 n);

/// The nonnegative root when n is a perfect square, nullopt otherwise.
/// Negative n is never a square. No errors.
std::optional<Int128> is_perfect_square(Int128 n);

/// Greatest common divisor of |a| and |b|; gcd(0,0) = 0.
Int128 gcd(Int128 a, Int128 b);

inline Int128 gcd(Int128 a, Int128 b, Int128 c) { return gcd(gcd(a, b), c); }

/// Deterministic primality for 0 <= n < 2^64 (Miller-Rabin over the fixed
/// witness set that is exact in that range, trial division first).
/// Larger n throws RangeError, negative n throws DomainError: the contract
/// is a deterministic answer or a refusal, never a probabilistic answer.
bool is_prime(Int128 n);

}  // namespace sqrd
