#include "sqrd/triples.hpp"

#include <algorithm>

#include "sqrd/kernel.hpp"

namespace sqrd {

PythTriple triple_from_params(std::int64_t s, std::int64_t t) {
  if (t < 1 || s <= t) throw DomainError("triple_from_params: requires s > t >= 1");
  PythTriple tr;
  tr.s = s;
  tr.t = t;
  tr.even_leg = (Int128(2) * s * t).to_int64();
  tr.odd_leg = (Int128(s) * s - Int128(t) * t).to_int64();
  tr.hyp = (Int128(s) * s + Int128(t) * t).to_int64();
  tr.primitive = gcd(s, t) == 1 && (s + t) % 2 == 1;
  return tr;
}

std::vector<PythTriple> primitive_triples(std::int64_t max_hyp) {
  std::vector<PythTriple> out;
  // s^2 + 1 <= max_hyp bounds the generator scan.
  for (std::int64_t s = 2; Int128(s) * s + 1 <= Int128(max_hyp); ++s) {
    for (std::int64_t t = 1 + (s % 2); t < s; t += 2) {  // opposite parity only
      if (Int128(s) * s + Int128(t) * t > Int128(max_hyp)) break;
      if (gcd(s, t) != 1) continue;
      out.push_back(triple_from_params(s, t));
    }
  }
  std::sort(out.begin(), out.end(), [](const PythTriple& a, const PythTriple& b) {
    if (a.hyp != b.hyp) return a.hyp < b.hyp;
    return a.odd_leg < b.odd_leg;
  });
  return out;
}

}  // namespace sqrd
