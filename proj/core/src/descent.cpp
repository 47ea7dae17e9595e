#include "sqrd/descent.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <sstream>

#include "sqrd/kernel.hpp"
#include "sqrd/parallel.hpp"

namespace sqrd {

namespace {

mpz_class to_mpz(Int128 x) {
  bool neg = x.is_negative();
  auto u = static_cast<unsigned __int128>(neg ? (-x).value() : x.value());
  mpz_class m = static_cast<unsigned long>(u >> 64);
  m <<= 64;
  m += static_cast<unsigned long>(u & UINT64_MAX);
  if (neg) m = -m;
  return m;
}

// 2-adic valuation; v must be positive.
int v2(Int128 v) {
  int k = 0;
  while (v.is_even()) {
    v = v / 2;
    ++k;
  }
  return k;
}

Int128 pow2(int k) {
  Int128 r = 1;
  for (int i = 0; i < k; ++i) r *= 2;
  return r;
}

StructureViolation violation(const char* step, const std::string& detail) {
  return StructureViolation{step, detail};
}

}  // namespace

bool EquationInstance::nontrivial() const {
  return a >= 1 && b >= 1 && gcd(a, b) == 1;
}

EquationInstance equation_residual(std::int64_t c, std::int64_t a, std::int64_t b) {
  if (c < 1) throw DomainError("equation_residual: multiplier c must be >= 1");
  EquationInstance inst;
  inst.c = c;
  inst.a = a;
  inst.b = b;
  Int128 aa = Int128(a) * a;
  Int128 bb = Int128(b) * b;
  inst.lhs = sq(aa + bb) + sq(Int128(c) * a * b);
  inst.root = is_perfect_square(inst.lhs);
  return inst;
}

std::vector<EquationInstance> search_equation(std::int64_t c, std::int64_t bound,
                                              int workers) {
  if (c < 1) throw DomainError("search_equation: multiplier c must be >= 1");
  if (bound < 1) throw DomainError("search_equation: bound must be >= 1");
  auto rows = parallel_map_ordered<std::vector<EquationInstance>>(
      static_cast<std::size_t>(bound), workers, [&](std::size_t i) {
        std::int64_t a = static_cast<std::int64_t>(i) + 1;
        std::vector<EquationInstance> hits;
        for (std::int64_t b = 1; b <= bound; ++b) {
          if (gcd(a, b) != 1) continue;
          EquationInstance inst = equation_residual(c, a, b);
          if (inst.has_solution()) hits.push_back(inst);
        }
        return hits;
      });
  std::vector<EquationInstance> out;
  for (auto& row : rows)
    out.insert(out.end(), row.begin(), row.end());
  return out;
}

bool pythagorean_identity(Int128 u, Int128 v) {
  mpz_class mu = to_mpz(u), mv = to_mpz(v);
  mpz_class u2 = mu * mu, v2m = mv * mv;
  mpz_class lhs = (u2 - v2m) * (u2 - v2m) + (2 * mu * mv) * (2 * mu * mv);
  mpz_class rhs = (u2 + v2m) * (u2 + v2m);
  return lhs == rhs;
}

bool ratio_identities(Int128 n, Int128 k, Int128 a, Int128 b, Int128 c, Int128 d) {
  mpz_class mn = to_mpz(n), mk = to_mpz(k), ma = to_mpz(a), mb = to_mpz(b),
            mc = to_mpz(c), md = to_mpz(d);
  mpz_class n2 = mn * mn;
  bool antecedent = mk * ma * ma == mc * mc - md * md &&
                    mk * mb * mb == 4 * mc * mc + n2 * md * md;
  if (!antecedent) return true;
  bool consequent =
      (n2 + 4) * mc * mc == mk * (n2 * ma * ma + mb * mb) &&
      (n2 + 4) * md * md == mk * (mb * mb - 4 * ma * ma);
  return consequent;
}

std::int64_t forced_k_expected(AscentMode mode, std::int64_t n) {
  switch (mode) {
    case AscentMode::Edge: return 5;
    case AscentMode::Midline: return 2;
    case AscentMode::Multiplier: return (Int128(n) * n + 4).to_int64();
  }
  throw DomainError("forced_k_expected: bad mode");
}

std::vector<ForcedKTuple> forced_k_probe(AscentMode mode, std::int64_t n,
                                         std::int64_t bound, int workers) {
  if (bound < 1) throw DomainError("forced_k_probe: bound must be >= 1");
  if (mode == AscentMode::Multiplier && n < 1)
    throw DomainError("forced_k_probe: multiplier mode needs n >= 1");
  // Ratio coefficients: b^2 (c^2 - d^2) = a^2 (alpha*c^2 + beta*d^2).
  Int128 alpha = mode == AscentMode::Midline ? 1 : 4;
  Int128 beta = mode == AscentMode::Multiplier ? Int128(n) * n : Int128(1);

  auto rows = parallel_map_ordered<std::vector<ForcedKTuple>>(
      static_cast<std::size_t>(bound), workers, [&](std::size_t idx) {
        std::int64_t c = static_cast<std::int64_t>(idx) + 1;
        std::vector<ForcedKTuple> found;
        for (std::int64_t d = 1; d < c; ++d) {
          if (gcd(c, d) != 1) continue;
          Int128 diff = Int128(c) * c - Int128(d) * d;
          Int128 rhs = alpha * c * c + beta * d * d;
          for (std::int64_t a = 1; a <= bound; ++a) {
            Int128 a2 = Int128(a) * a;
            if (a2 > diff) break;
            if (diff % a2 != 0) continue;
            Int128 k = diff / a2;
            if (rhs % k != 0) continue;
            auto b_root = is_perfect_square(rhs / k);
            if (!b_root) continue;
            std::int64_t b = b_root->to_int64();
            if (b < 1 || b > bound || gcd(a, b) != 1) continue;
            found.push_back(ForcedKTuple{k.to_int64(), a, b, c, d});
          }
        }
        return found;
      });
  std::vector<ForcedKTuple> out;
  for (auto& row : rows)
    out.insert(out.end(), row.begin(), row.end());
  return out;
}

AscentResult ascend(AscentMode mode, std::int64_t m, std::int64_t n,
                    std::int64_t c_mult) {
  if (n < 1 || m <= n) throw DomainError("ascend: requires m > n >= 1");
  if (mode == AscentMode::Multiplier && c_mult < 1)
    throw DomainError("ascend: multiplier mode needs c_mult >= 1");
  Int128 mm = Int128(m) * m, nn = Int128(n) * n;
  AscentResult r;
  r.d = (mm - nn).to_int64();
  r.b = (mm + nn).to_int64();
  std::int64_t family = 1;
  switch (mode) {
    case AscentMode::Edge:
      r.a = (Int128(m) * n).to_int64();
      family = 1;
      break;
    case AscentMode::Midline:
      r.a = (Int128(2) * m * n).to_int64();
      family = 2;
      break;
    case AscentMode::Multiplier:
      r.a = (Int128(m) * n).to_int64();
      family = c_mult;
      break;
  }
  // The mode's second equation must hold identically under the substitution.
  Int128 legs = mode == AscentMode::Midline
                    ? sq(Int128(r.d)) + sq(Int128(r.a))
                    : sq(Int128(r.d)) + 4 * sq(Int128(r.a));
  r.witness = legs == sq(Int128(r.b));
  r.transfer = equation_residual(family, m, n);
  return r;
}

DescentOutcome descent_step(std::int64_t c, const EquationInstance& inst) {
  if (c < 1 || inst.c != c)
    throw DomainError("descent_step: family mismatch");
  if (inst.a < 1 || inst.b < 1)
    throw DomainError("descent_step: trivial solution (a or b below 1)");
  if (gcd(inst.a, inst.b) != 1)
    throw DomainError("descent_step: a and b must be coprime");
  EquationInstance checked = equation_residual(c, inst.a, inst.b);
  if (!checked.has_solution() || !inst.root || *inst.root != *checked.root)
    throw DomainError("descent_step: input is not a solution of E_c");

  // Step "parity": one of a,b even, the other odd. Both even is impossible
  // for coprime a,b; both odd is a shape the proof never handles.
  std::int64_t a = inst.a, b = inst.b;
  if (a % 2 != 0 && b % 2 != 0)
    return violation("parity", "a and b are both odd");
  if (a % 2 != 0) std::swap(a, b);  // E_c is symmetric in a,b

  Int128 e = *checked.root;
  Int128 x = Int128(a) * a + Int128(b) * b;
  FactorSplit split;
  split.low = e - x;
  split.high = e + x;
  // (e-x)(e+x) = (cab)^2 is algebra once e is a verified root.
  if (split.low * split.high != sq(Int128(c) * a * b))
    throw std::logic_error("descent_step: factor split algebra failed");

  // Step "two-adic-split": the claimed shape puts the single factor 2 on
  // the e - (a^2+b^2) part and valuation 2k-1 on the other.
  int v_low = v2(split.low);
  int v_high = v2(split.high);
  if (v_low != 1) {
    std::ostringstream os;
    os << "e - a^2 - b^2 = " << split.low << " has 2-adic valuation " << v_low
       << " (claimed 1); e + a^2 + b^2 = " << split.high << " has valuation "
       << v_high;
    return violation("two-adic-split", os.str());
  }
  if (v_high % 2 == 0) {
    std::ostringstream os;
    os << "e + a^2 + b^2 = " << split.high << " has even 2-adic valuation "
       << v_high << " (claimed odd, 2k-1)";
    return violation("two-adic-split", os.str());
  }
  split.k = (v_high + 1) / 2;

  // Step "low-square": (e - a^2 - b^2)/2 must be a perfect square.
  auto low_root = is_perfect_square(split.low / 2);
  if (!low_root)
    return violation("low-square",
                     "(e - a^2 - b^2)/2 = " + (split.low / 2).str() +
                         " is not a perfect square");

  // Step "high-square": (e + a^2 + b^2)/2^(2k-1) must be a perfect square.
  auto high_root = is_perfect_square(split.high / pow2(2 * static_cast<int>(split.k) - 1));
  if (!high_root)
    return violation("high-square",
                     "(e + a^2 + b^2)/2^(2k-1) is not a perfect square, k = " +
                         std::to_string(split.k));

  Int128 p = *low_root;                                       // "a1*b1"
  Int128 v = pow2(static_cast<int>(split.k) - 1) * *high_root;  // "2^(k-1)*a2*b2"

  // Hypotenuse recombination e = p^2 + v^2 is forced by the two shapes.
  if (e != sq(p) + sq(v))
    throw std::logic_error("descent_step: hypotenuse recombination failed");

  // Step "pythagorean-orientation": the proof's substitution needs
  // a^2 + b^2 = p^2 - v^2 (it cancels the triple identity against the
  // starting equation with that sign).
  if (x != sq(p) - sq(v)) {
    std::ostringstream os;
    os << "a^2 + b^2 = " << x << " but p^2 - v^2 = " << sq(p) - sq(v)
       << " (p = " << p << ", v = " << v << ")";
    return violation("pythagorean-orientation", os.str());
  }

  // Step "factor-extraction": split p = a1*b1 and q = a2*b2 back into the
  // factors of a and b. gcd does it because a and b are coprime.
  Int128 q = *high_root;
  Int128 a_odd = Int128(a) / pow2(v2(a));
  split.a1 = gcd(p, a_odd);
  split.b1 = gcd(p, b);
  split.a2 = gcd(q, a_odd);
  split.b2 = gcd(q, b);
  if (split.a1 * split.b1 != p || split.a2 * split.b2 != q ||
      split.a1 * split.a2 != a_odd || split.b1 * split.b2 != b) {
    return violation("factor-extraction",
                     "p, q do not factor through a and b (extra factors of c "
                     "in the split)");
  }

  // Renaming per the proof: A = 2^(k-1)*a2, B = b1, C = a1, D = b2.
  Int128 ren_a = pow2(static_cast<int>(split.k) - 1) * split.a2;
  Int128 ren_b = split.b1, ren_c = split.a1, ren_d = split.b2;

  // Step "k-forcing": the renamed ratio equation fixes kappa; the proof
  // claims kappa = c^2 + 4 (5 for the edge family, 2 for the midline
  // family via its own ratio form).
  Int128 diff = sq(ren_c) - sq(ren_d);
  Int128 rhs = c == 2 ? sq(ren_c) + sq(ren_d)
                      : 4 * sq(ren_c) + Int128(c) * c * sq(ren_d);
  if (diff <= 0 || diff % sq(ren_a) != 0 || rhs % (diff / sq(ren_a)) != 0)
    return violation("k-forcing", "renamed ratio equation has no integral k");
  Int128 kappa = diff / sq(ren_a);
  if (rhs / kappa != sq(ren_b))
    return violation("k-forcing", "renamed ratio equation does not balance");
  Int128 expected = c == 2 ? Int128(2) : Int128(c) * c + 4;
  if (kappa != expected) {
    return violation("k-forcing", "realized k = " + kappa.str() +
                                      ", claimed " + expected.str());
  }

  // Step "parametrization": recover (m,n) from the forced system; the
  // proof writes it forward as b = m^2+n^2, d = m^2-n^2.
  Int128 sum = ren_b + ren_d, dif = ren_b - ren_d;
  if (sum.is_odd() || dif.is_odd())
    return violation("parametrization", "b + d or b - d is odd");
  auto m_root = is_perfect_square(sum / 2);
  auto n_root = is_perfect_square(dif / 2);
  if (!m_root || !n_root)
    return violation("parametrization",
                     "(b+d)/2 or (b-d)/2 is not a perfect square");
  Int128 prod = *m_root * *n_root;
  Int128 claimed_a = c == 2 ? ren_a / 2 : ren_a;
  if (c == 2 && ren_a.is_odd())
    return violation("parametrization", "midline form needs a even");
  if (prod != claimed_a)
    return violation("parametrization", "m*n does not reproduce a");
  if (*n_root < 1 || *m_root <= *n_root)
    return violation("parametrization", "recovered m,n violate m > n >= 1");

  EquationInstance smaller =
      equation_residual(c, m_root->to_int64(), n_root->to_int64());
  if (!smaller.has_solution())
    throw std::logic_error("descent_step: descended instance lost its witness");
  if (std::max(smaller.a, smaller.b) >= std::max(inst.a, inst.b))
    throw std::logic_error("descent_step: measure did not decrease");
  return smaller;
}

std::vector<MultiplierPair> multiplier_primes(std::int64_t limit) {
  if (limit < 2) throw DomainError("multiplier_primes: limit must be >= 2");
  if (Int128(limit) * limit + 4 > Int128(std::uint64_t{UINT64_MAX}))
    throw RangeError("multiplier_primes: limit^2 + 4 exceeds the 64-bit primality contract");
  std::vector<MultiplierPair> out;
  for (std::int64_t n = 2; n <= limit; ++n) {
    Int128 partner = Int128(n) * n + 4;
    if (is_prime(n) && is_prime(partner))
      out.push_back(MultiplierPair{n, partner});
  }
  return out;
}

}  // namespace sqrd
