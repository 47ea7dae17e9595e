#include "sqrd/kernel.hpp"

#include <array>
#include <cmath>
#include <ostream>

namespace sqrd {

void Int128::throw_overflow(const char* op) {
  throw RangeError(std::string("Int128: ") + op +
                   " overflows the 128-bit exact range");
}

std::string Int128::str() const {
  if (v_ == 0) return "0";
  unsigned __int128 u =
      v_ < 0 ? -static_cast<unsigned __int128>(v_) : static_cast<unsigned __int128>(v_);
  char buf[48];
  int pos = 48;
  while (u != 0) {
    buf[--pos] = static_cast<char>('0' + static_cast<int>(u % 10));
    u /= 10;
  }
  std::string out;
  if (v_ < 0) out.push_back('-');
  out.append(buf + pos, 48 - pos);
  return out;
}

std::ostream& operator<<(std::ostream& os, Int128 v) { return os << v.str(); }

namespace {

using u128 = unsigned __int128;

std::uint64_t isqrt_u64(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  // sqrtl lands within +-1 of the true root; fix up exactly in 128 bits.
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u128 isqrt_u128(u128 n) {
  if (n <= UINT64_MAX) return isqrt_u64(static_cast<std::uint64_t>(n));
  // Newton iteration seeded from the 64-bit root of the top bits.
  int shift = 0;
  u128 top = n;
  while (top > UINT64_MAX) {
    top >>= 2;
    shift += 1;
  }
  u128 x = (static_cast<u128>(isqrt_u64(static_cast<std::uint64_t>(top))) + 1) << shift;
  for (;;) {
    u128 y = (x + n / x) >> 1;
    if (y >= x) break;
    x = y;
  }
  return x;
}

// Squares mod 64: only 12 residues occur, so this rejects 81% of
// non-squares with one mask and one load.
constexpr std::array<bool, 64> square_residues_mod64() {
  std::array<bool, 64> t{};
  for (int i = 0; i < 64; ++i) t[(i * i) & 63] = true;
  return t;
}
constexpr auto kSquareMod64 = square_residues_mod64();

constexpr std::array<bool, 63> square_residues_mod63() {
  std::array<bool, 63> t{};
  for (int i = 0; i < 63; ++i) t[(i * i) % 63] = true;
  return t;
}
constexpr auto kSquareMod63 = square_residues_mod63();

constexpr std::array<bool, 65> square_residues_mod65() {
  std::array<bool, 65> t{};
  for (int i = 0; i < 65; ++i) t[(i * i) % 65] = true;
  return t;
}
constexpr auto kSquareMod65 = square_residues_mod65();

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

// One Miller-Rabin round; returns false when a proves n composite.
bool miller_rabin_round(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  int s = 0;
  std::uint64_t d = n - 1;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for every n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (!miller_rabin_round(n, a, d, s)) return false;
  }
  return true;
}

}  // namespace

Int128 isqrt(Int128 n) {
  if (n.is_negative()) throw DomainError("isqrt: negative input");
  u128 u = static_cast<u128>(n.value());
  u128 r = isqrt_u128(u);
  // Self-check: the iteration above converges, but the contract is cheap
  // to assert outright. (r+1)^2 cannot wrap: r < 2^63.5 since n < 2^127.
  if (r * r > u || (r + 1) * (r + 1) <= u)
    throw std::logic_error("isqrt: post-verification failed");
  return static_cast<__int128>(r);
}

std::optional<Int128> is_perfect_square(Int128 n) {
  if (n.is_negative()) return std::nullopt;
  u128 u = static_cast<u128>(n.value());
  if (!kSquareMod64[static_cast<std::size_t>(u & 63)]) return std::nullopt;
  if (u <= UINT64_MAX) {
    auto v = static_cast<std::uint64_t>(u);
    if (!kSquareMod63[v % 63] || !kSquareMod65[v % 65]) return std::nullopt;
  }
  u128 r = isqrt_u128(u);
  if (r * r != u) return std::nullopt;
  return Int128(static_cast<__int128>(r));
}

Int128 gcd(Int128 a, Int128 b) {
  u128 x = static_cast<u128>(a.abs().value());
  u128 y = static_cast<u128>(b.abs().value());
  while (y != 0) {
    u128 t = x % y;
    x = y;
    y = t;
  }
  return static_cast<__int128>(x);
}

bool is_prime(Int128 n) {
  if (n.is_negative()) throw DomainError("is_prime: negative input");
  if (static_cast<u128>(n.value()) > UINT64_MAX)
    throw RangeError("is_prime: deterministic contract covers n < 2^64 only");
  return is_prime_u64(static_cast<std::uint64_t>(n.value()));
}

}  // namespace sqrd
