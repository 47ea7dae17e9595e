#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "doctest.h"
#include "sqrd/descent.hpp"
#include "sqrd/kernel.hpp"

using namespace sqrd;

namespace {

bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

const StructureViolation* violation(const DescentOutcome& out) {
  return std::get_if<StructureViolation>(&out);
}

}  // namespace

TEST_SUITE("descent") {

TEST_CASE("equation residual on pinned values") {
  EquationInstance z = equation_residual(1, 0, 5);
  CHECK(z.lhs == Int128(625));
  CHECK(z.root == Int128(25));
  CHECK(z.has_solution());
  CHECK(!z.nontrivial());  // a = 0

  EquationInstance e1 = equation_residual(1, 2, 1);
  CHECK(e1.lhs == Int128(29));
  CHECK(!e1.has_solution());

  EquationInstance e2 = equation_residual(2, 2, 1);
  CHECK(e2.lhs == Int128(41));
  CHECK(!e2.has_solution());

  EquationInstance e6 = equation_residual(6, 2, 1);
  CHECK(e6.lhs == Int128(169));
  CHECK(e6.root == Int128(13));
  CHECK(e6.nontrivial());

  EquationInstance e5 = equation_residual(5, 3, 4);
  CHECK(e5.lhs == Int128(4225));
  CHECK(e5.root == Int128(65));
  CHECK(e5.nontrivial());

  CHECK_THROWS_AS(equation_residual(0, 1, 1), DomainError);
  std::int64_t huge = std::int64_t{1} << 33;
  CHECK_THROWS_AS(equation_residual(1, huge, huge), RangeError);
}

TEST_CASE("equation scan is empty for the proven families at small bounds") {
  CHECK(search_equation(1, 150).empty());
  CHECK(search_equation(2, 150).empty());
  CHECK(search_equation(3, 150).empty());
  CHECK(search_equation(7, 150).empty());
  CHECK_THROWS_AS(search_equation(0, 10), DomainError);
  CHECK_THROWS_AS(search_equation(1, 0), DomainError);
}

TEST_CASE("equation scan finds the known solutions of unproven families") {
  // Nontrivial solutions exist for several multipliers, including prime n
  // with n^2+4 prime (n = 5, 13): the emptiness claim fails there and the
  // scan must keep surfacing these.
  auto five = search_equation(5, 320);
  std::vector<std::pair<std::int64_t, std::int64_t>> got;
  for (const EquationInstance& inst : five) got.push_back({inst.a, inst.b});
  std::vector<std::pair<std::int64_t, std::int64_t>> expected = {
      {3, 4}, {4, 3}, {35, 312}, {312, 35}};
  CHECK(got == expected);
  CHECK(five[0].root == Int128(65));
  CHECK(five[2].root == Int128(112681));

  auto thirteen = search_equation(13, 100);
  REQUIRE(thirteen.size() == 2);
  CHECK(thirteen[0].a == 4);
  CHECK(thirteen[0].b == 33);
  CHECK(thirteen[0].root == Int128(2041));

  auto six = search_equation(6, 60);
  REQUIRE(six.size() == 4);
  CHECK(six[0].a == 1);
  CHECK(six[0].b == 2);
  CHECK(six[3].a == 52);
  CHECK(six[3].b == 15);
}

TEST_CASE("equation scan output is coprime, sorted and worker-independent") {
  auto hits = search_equation(5, 320, 3);
  CHECK(hits == search_equation(5, 320, 1));
  for (std::size_t i = 0; i < hits.size(); ++i) {
    CHECK(std::gcd(hits[i].a, hits[i].b) == 1);
    CHECK(hits[i].nontrivial());
    CHECK(sq(sq(Int128(hits[i].a)) + sq(Int128(hits[i].b))) +
              sq(Int128(5) * hits[i].a * hits[i].b) ==
          sq(*hits[i].root));
    if (i > 0)
      CHECK(std::pair(hits[i - 1].a, hits[i - 1].b) <
            std::pair(hits[i].a, hits[i].b));
  }
}

TEST_CASE("the Pythagorean identity holds at every magnitude") {
  std::mt19937_64 rng(23);
  int failures = 0;
  for (int i = 0; i < 20000; ++i) {
    Int128 u(static_cast<std::int64_t>(rng() >> 4));  // 60-bit operands
    Int128 v(static_cast<std::int64_t>(rng() >> 4));
    if (!pythagorean_identity(u, v)) ++failures;
  }
  CHECK(failures == 0);
  CHECK(pythagorean_identity(0, 0));
  CHECK(pythagorean_identity(2, 1));
  CHECK(pythagorean_identity(Int128(-3), Int128(7)));
}

TEST_CASE("ratio implication verifies on antecedent-true tuples") {
  // Family with d = 0: k = mu^2, a = lam, b = 2 lam, c = lam mu.
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::int64_t> small(1, 100000);
  int failures = 0;
  for (int i = 0; i < 4000; ++i) {
    std::int64_t lam = small(rng), mu = small(rng), n = small(rng) % 50 + 1;
    if (!ratio_identities(n, Int128(mu) * mu, lam, 2 * lam,
                          Int128(lam) * mu, 0))
      ++failures;
  }
  // Family with c = d: k = (n^2+4) mu^2, a = 0, b free, c = d = b mu.
  for (int i = 0; i < 4000; ++i) {
    std::int64_t b = small(rng), mu = small(rng), n = small(rng) % 50 + 1;
    Int128 k = (Int128(n) * n + 4) * mu * mu;
    if (!ratio_identities(n, k, 0, b, Int128(b) * mu, Int128(b) * mu))
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("ratio implication verifies on realized probe witnesses") {
  // Both witnesses the bound-200 multiplier probe turns up for n = 5,
  // and their lambda-scalings.
  CHECK(ratio_identities(5, 29, 12, 25, 65, 7));
  CHECK(ratio_identities(5, 1, 7, 130, 25, 24));
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> ld(1, 1000000);
  int failures = 0;
  for (int i = 0; i < 2000; ++i) {
    Int128 lam = ld(rng);
    if (!ratio_identities(5, 29, lam * 12, lam * 25, lam * 65, lam * 7))
      ++failures;
    if (!ratio_identities(5, 1, lam * 7, lam * 130, lam * 25, lam * 24))
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("ratio implication is vacuously true off the antecedent") {
  CHECK(ratio_identities(1, 5, 1, 3, 3, 2));
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::int64_t> d(0, 1000);
  int failures = 0;
  for (int i = 0; i < 10000; ++i)
    if (!ratio_identities(d(rng) % 50 + 1, d(rng), d(rng), d(rng), d(rng),
                          d(rng)))
      ++failures;
  CHECK(failures == 0);
}

TEST_CASE("substitution ascent on pinned values") {
  AscentResult edge = ascend(AscentMode::Edge, 2, 1);
  CHECK(edge.d == 3);
  CHECK(edge.a == 2);
  CHECK(edge.b == 5);
  CHECK(edge.witness);
  CHECK(edge.transfer.c == 1);
  CHECK(edge.transfer.lhs == Int128(29));
  CHECK(!edge.transfer.has_solution());

  AscentResult mid = ascend(AscentMode::Midline, 2, 1);
  CHECK(mid.d == 3);
  CHECK(mid.a == 4);
  CHECK(mid.b == 5);
  CHECK(mid.witness);
  CHECK(mid.transfer.c == 2);
  CHECK(mid.transfer.lhs == Int128(41));

  AscentResult mult = ascend(AscentMode::Multiplier, 2, 1, 5);
  CHECK(mult.d == 3);
  CHECK(mult.a == 2);
  CHECK(mult.b == 5);
  CHECK(mult.witness);
  CHECK(mult.transfer.c == 5);
  CHECK(mult.transfer.lhs == Int128(125));

  CHECK_THROWS_AS(ascend(AscentMode::Edge, 1, 1), DomainError);
  CHECK_THROWS_AS(ascend(AscentMode::Edge, 2, 0), DomainError);
}

TEST_CASE("the ascent witness identity holds for every parameter pair") {
  int failures = 0;
  for (std::int64_t m = 2; m <= 120; ++m)
    for (std::int64_t n = 1; n < m; ++n)
      for (AscentMode mode :
           {AscentMode::Edge, AscentMode::Midline, AscentMode::Multiplier}) {
        AscentResult r = ascend(mode, m, n, 5);
        if (!r.witness) ++failures;
        Int128 lhs = sq(Int128(r.d)) +
                     (mode == AscentMode::Midline ? sq(Int128(r.a))
                                                  : 4 * sq(Int128(r.a)));
        if (lhs != sq(Int128(r.b))) ++failures;
      }
  CHECK(failures == 0);
}

TEST_CASE("expected forced k per mode") {
  CHECK(forced_k_expected(AscentMode::Edge, 0) == 5);
  CHECK(forced_k_expected(AscentMode::Midline, 0) == 2);
  CHECK(forced_k_expected(AscentMode::Multiplier, 3) == 13);
  CHECK(forced_k_expected(AscentMode::Multiplier, 5) == 29);
  CHECK(forced_k_expected(AscentMode::Multiplier, 7) == 53);
}

TEST_CASE("forced-k probe finds nothing for edge and midline at bound 200") {
  CHECK(forced_k_probe(AscentMode::Edge, 0, 200).empty());
  CHECK(forced_k_probe(AscentMode::Midline, 0, 200).empty());
  CHECK(forced_k_probe(AscentMode::Multiplier, 3, 200).empty());
  CHECK(forced_k_probe(AscentMode::Multiplier, 7, 200).empty());
  CHECK_THROWS_AS(forced_k_probe(AscentMode::Edge, 0, 0), DomainError);
  CHECK_THROWS_AS(forced_k_probe(AscentMode::Multiplier, 0, 10), DomainError);
}

TEST_CASE("forced-k probe surfaces the n=5 deviation") {
  // The claim under probe says only k = 29 can occur for n = 5; the probe
  // also finds k = 1, through a tuple with even d. Both witnesses satisfy
  // the ratio equation exactly and must never be suppressed.
  auto tuples = forced_k_probe(AscentMode::Multiplier, 5, 200);
  REQUIRE(tuples.size() == 2);
  std::set<std::int64_t> realized;
  for (const ForcedKTuple& t : tuples) {
    realized.insert(t.k);
    CHECK(t.c > t.d);
    CHECK(t.d >= 1);
    CHECK(std::gcd(t.a, t.b) == 1);
    CHECK(std::gcd(t.c, t.d) == 1);
    CHECK(Int128(t.k) * t.a * t.a == Int128(t.c) * t.c - Int128(t.d) * t.d);
    CHECK(Int128(t.k) * t.b * t.b ==
          4 * Int128(t.c) * t.c + 25 * Int128(t.d) * t.d);
  }
  CHECK(realized == std::set<std::int64_t>{1, 29});

  const ForcedKTuple& dev = tuples[0].k == 1 ? tuples[0] : tuples[1];
  CHECK(dev.a == 7);
  CHECK(dev.b == 130);
  CHECK(dev.c == 25);
  CHECK(dev.d == 24);
  const ForcedKTuple& claimed = tuples[0].k == 29 ? tuples[0] : tuples[1];
  CHECK(claimed.a == 12);
  CHECK(claimed.b == 25);
  CHECK(claimed.c == 65);
  CHECK(claimed.d == 7);

  auto parallel = forced_k_probe(AscentMode::Multiplier, 5, 200, 4);
  REQUIRE(parallel.size() == tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    CHECK(parallel[i].k == tuples[i].k);
    CHECK(parallel[i].a == tuples[i].a);
    CHECK(parallel[i].b == tuples[i].b);
    CHECK(parallel[i].c == tuples[i].c);
    CHECK(parallel[i].d == tuples[i].d);
  }
}

TEST_CASE("descent rejects inputs outside its contract") {
  CHECK_THROWS_AS(descent_step(1, equation_residual(1, 2, 1)), DomainError);
  CHECK_THROWS_AS(descent_step(2, equation_residual(6, 2, 1)), DomainError);
  CHECK_THROWS_AS(descent_step(1, equation_residual(1, 0, 5)), DomainError);
  // Scaled solution (6,8) of the n=5 family: a genuine solution, not coprime.
  EquationInstance scaled = equation_residual(5, 6, 8);
  REQUIRE(scaled.root == Int128(260));
  CHECK_THROWS_AS(descent_step(5, scaled), DomainError);
}

TEST_CASE("descent reports the parity violation on all-odd solutions") {
  EquationInstance inst = equation_residual(8, 3, 1);
  REQUIRE(inst.root == Int128(26));
  DescentOutcome out = descent_step(8, inst);
  const StructureViolation* v = violation(out);
  REQUIRE(v != nullptr);
  CHECK(v->step == "parity");
}

TEST_CASE("descent reports the two-adic split violation on real solutions") {
  // For a even, b odd and gcd(a,b)=1 every solution has e = 1 (mod 4), so
  // the claimed valuation v2(e - a^2 - b^2) = 1 can never hold; the reported
  // valuation is always odd and >= 3.
  struct Vector {
    std::int64_t c, a, b, val;
  };
  for (const Vector& w : {Vector{6, 2, 1, 3}, Vector{6, 1, 2, 3},
                          Vector{5, 3, 4, 3}, Vector{36, 1, 4, 7},
                          Vector{13, 4, 33, 3}, Vector{8, 20, 39, 9}}) {
    EquationInstance inst = equation_residual(w.c, w.a, w.b);
    REQUIRE(inst.has_solution());
    DescentOutcome out = descent_step(w.c, inst);
    const StructureViolation* v = violation(out);
    REQUIRE(v != nullptr);
    CHECK(v->step == "two-adic-split");
    CHECK(v->detail.find("valuation " + std::to_string(w.val)) !=
          std::string::npos);
    CHECK(v->detail.find("claimed 1") != std::string::npos);
  }
}

TEST_CASE("every real solution up to bound 60 lands on a named violation") {
  int descended = 0, violations = 0;
  for (std::int64_t c = 1; c <= 60; ++c)
    for (const EquationInstance& inst : search_equation(c, 60)) {
      DescentOutcome out = descent_step(c, inst);
      if (violation(out)) ++violations;
      else ++descended;
    }
  CHECK(descended == 0);
  CHECK(violations > 0);
}

TEST_CASE("multiplier prime pairs at small limits") {
  auto pairs = multiplier_primes(20);
  REQUIRE(pairs.size() == 5);
  std::vector<std::int64_t> ns;
  for (const MultiplierPair& p : pairs) {
    ns.push_back(p.n);
    CHECK(p.partner == Int128(p.n) * p.n + 4);
  }
  CHECK(ns == std::vector<std::int64_t>{3, 5, 7, 13, 17});
  CHECK(pairs[0].partner == Int128(13));
  CHECK(pairs[4].partner == Int128(293));

  CHECK(multiplier_primes(2).empty());
  CHECK(multiplier_primes(7).size() == 3);
  CHECK_THROWS_AS(multiplier_primes(1), DomainError);
  CHECK_THROWS_AS(multiplier_primes(std::int64_t{1} << 32), RangeError);
}

TEST_CASE("multiplier sieve matches trial division up to two thousand") {
  std::vector<std::int64_t> expected;
  for (std::int64_t n = 2; n <= 2000; ++n)
    if (trial_division_prime(n) && trial_division_prime(n * n + 4))
      expected.push_back(n);
  std::vector<std::int64_t> got;
  for (const MultiplierPair& p : multiplier_primes(2000)) got.push_back(p.n);
  CHECK(got == expected);
}

}  // TEST_SUITE
