#pragma once

// Pythagorean triple enumeration through the (s,t) generator pair:
// even leg 2st, odd leg s^2 - t^2, hypotenuse s^2 + t^2. Legs are kept in
// even/odd order rather than by size because every parity argument
// downstream keys on which leg is even.

#include <cstdint>
#include <vector>

#include "sqrd/int128.hpp"

namespace sqrd {

struct PythTriple {
  std::int64_t s = 0;
  std::int64_t t = 0;
  std::int64_t even_leg = 0;  // 2st
  std::int64_t odd_leg = 0;   // s^2 - t^2 (odd only when the triple is primitive)
  std::int64_t hyp = 0;       // s^2 + t^2
  bool primitive = false;     // gcd(s,t) = 1 and s,t of opposite parity

  friend bool operator==(const PythTriple&, const PythTriple&) = default;
};

/// Builds the triple generated by (s,t). Requires s > t >= 1, else
/// DomainError. The primitivity flag follows the gcd/parity test.
PythTriple triple_from_params(std::int64_t s, std::int64_t t);

/// All primitive triples with hypotenuse <= max_hyp, each exactly once,
/// sorted by (hyp, odd_leg). Empty for max_hyp < 5.
std::vector<PythTriple> primitive_triples(std::int64_t max_hyp);

}  // namespace sqrd
