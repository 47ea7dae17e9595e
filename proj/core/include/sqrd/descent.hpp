#pragma once

// The Diophantine machinery behind the edge, midline and multiplier cases
// of the square rational-distance problem. One equation family covers all
// three:
//
//   E_c :  (a^2 + b^2)^2 + (c*a*b)^2 = e^2
//
// with c = 1 for points on an edge, c = 2 for points on a midline, and
// c = n for squares whose side is n times the point's distance to a side
// (n and n^2 + 4 both prime). Nontrivial solutions are not expected to
// exist; this module searches for them exhaustively, realizes the descent
// that would shrink any solution found, and probes the forced-k and
// substitution identities the descent relies on.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqrd/int128.hpp"

namespace sqrd {

struct EquationInstance {
  std::int64_t c = 1;  // family multiplier
  std::int64_t a = 0;
  std::int64_t b = 0;
  Int128 lhs;                    // (a^2+b^2)^2 + (c*a*b)^2
  std::optional<Int128> root;    // e, present iff lhs is a perfect square

  bool has_solution() const { return root.has_value(); }
  /// a,b >= 1 and coprime: the solutions the emptiness claims concern.
  bool nontrivial() const;

  friend bool operator==(const EquationInstance&, const EquationInstance&) = default;
};

/// n with both n and n^2 + 4 prime: the side condition of the multiplier
/// case.
struct MultiplierPair {
  std::int64_t n = 0;
  Int128 partner = 0;  // n^2 + 4, can exceed 64 signed bits near the range limit

  friend bool operator==(const MultiplierPair&, const MultiplierPair&) = default;
};

/// The two-adic factor split of a solution candidate:
/// (e - a^2 - b^2)(e + a^2 + b^2) = (c*a*b)^2 with claimed shape
/// e - a^2 - b^2 = 2*(odd square), e + a^2 + b^2 = 2^(2k-1)*(odd square).
struct FactorSplit {
  Int128 low;         // e - a^2 - b^2
  Int128 high;        // e + a^2 + b^2
  std::int64_t k = 0;  // split exponent: v2(high) = 2k - 1
  Int128 a1, b1;      // sqrt(low / 2) = a1*b1, factored through a and b
  Int128 a2, b2;      // sqrt(high / 2^(2k-1)) = a2*b2; for odd multipliers
                      // a = 2^k*a1*a2 and b = b1*b2, all four odd
};

/// Names the first proof step whose claimed shape fails on an input, with
/// enough context to reproduce.
struct StructureViolation {
  std::string step;
  std::string detail;
};

using DescentOutcome = std::variant<EquationInstance, StructureViolation>;

/// Evaluates E_c at (a,b) exactly and attaches the square witness when the
/// left side is a perfect square. RangeError if the value leaves the
/// 128-bit exact range.
EquationInstance equation_residual(std::int64_t c, std::int64_t a, std::int64_t b);

/// Exhaustive scan of E_c over coprime 1 <= a,b <= bound, in (a,b) order.
/// Any returned instance is a counterexample to the family's emptiness
/// claim; the expected result is an empty list.
std::vector<EquationInstance> search_equation(std::int64_t c, std::int64_t bound,
                                              int workers = 1);

/// Checks (u^2 - v^2)^2 + (2uv)^2 == (u^2 + v^2)^2 by evaluating both
/// sides exactly (arbitrary precision: operands up to 60 bits produce
/// ~242-bit intermediates). Always true; exercised as a verification
/// instrument, not assumed.
bool pythagorean_identity(Int128 u, Int128 v);

/// Verifies the implication used to force k: whenever
///   k*a^2 = c^2 - d^2   and   k*b^2 = 4c^2 + n^2*d^2
/// hold, then
///   (n^2+4)*c^2 = k*(n^2*a^2 + b^2)   and   (n^2+4)*d^2 = k*(b^2 - 4a^2)
/// must hold as well. Returns whether the implication held (vacuously true
/// when the antecedent fails). Exact at any magnitude.
bool ratio_identities(Int128 n, Int128 k, Int128 a, Int128 b, Int128 c, Int128 d);

enum class AscentMode { Edge, Midline, Multiplier };

struct ForcedKTuple {
  std::int64_t k = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
};

/// Enumerates coprime (a,b) and coprime (c,d), c > d >= 1, up to bound
/// that satisfy the mode's ratio equation
///   edge:        b^2 (c^2 - d^2) = a^2 (4c^2 +     d^2)
///   midline:     b^2 (c^2 - d^2) = a^2 ( c^2 +     d^2)
///   multiplier:  b^2 (c^2 - d^2) = a^2 (4c^2 + n^2 d^2)
/// and reports every realized k = (c^2 - d^2) / a^2. The claim under probe
/// is that only k = 5 (edge), k = 2 (midline), k = n^2 + 4 (multiplier)
/// can occur; deviations are returned, never suppressed.
std::vector<ForcedKTuple> forced_k_probe(AscentMode mode, std::int64_t n,
                                         std::int64_t bound, int workers = 1);

/// Expected k value for a mode: 5, 2, or n^2 + 4.
std::int64_t forced_k_expected(AscentMode mode, std::int64_t n);

struct AscentResult {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t d = 0;
  bool witness = false;          // the mode's identity equation, must hold
  EquationInstance transfer;     // the equation the substitution lands on
};

/// Runs the substitution that closes the descent loop. For m > n >= 1:
///   edge:        d = m^2-n^2, a = mn,  b = m^2+n^2; witness d^2+4a^2 = b^2
///   midline:     d = m^2-n^2, a = 2mn, b = m^2+n^2; witness d^2+ a^2 = b^2
///   multiplier:  d = m^2-n^2, a = mn,  b = m^2+n^2; witness d^2+4a^2 = b^2
/// The witness must always hold (it is an identity under the substitution);
/// transfer is E_c evaluated at (m, n) with c = 1, 2 or c_mult.
AscentResult ascend(AscentMode mode, std::int64_t m, std::int64_t n,
                    std::int64_t c_mult = 1);

/// Executes the descent on a nontrivial solution of E_c, literally step by
/// step: parity, factor split, two-adic shape, square shapes, hypotenuse
/// recombination, Pythagorean orientation, and the (m,n) recovery. Either
/// the strictly smaller solution comes back, or the first step whose
/// claimed shape fails on this input is reported. Non-solutions are a
/// DomainError.
DescentOutcome descent_step(std::int64_t c, const EquationInstance& inst);

/// All n <= limit with n and n^2+4 prime, ascending. DomainError for
/// limit < 2; RangeError when limit^2+4 leaves the 64-bit primality
/// contract.
std::vector<MultiplierPair> multiplier_primes(std::int64_t limit);

}  // namespace sqrd
