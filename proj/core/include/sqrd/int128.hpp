#pragma once

// Checked 128-bit signed integers. Every arithmetic operator traps overflow
// and throws RangeError instead of wrapping; all search and verification
// code in this project runs on top of this type, so a result that comes
// back is exact or it does not come back at all.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace sqrd {

/// Result magnitude left the supported exact range (|v| >= 2^127, or an
/// operation-specific bound such as the 64-bit primality contract).
class RangeError : public std::runtime_error {
 public:
  explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

/// An argument violated an operation's stated precondition.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class Int128 {
 public:
  constexpr Int128() = default;
  constexpr Int128(__int128 v) : v_(v) {}  // NOLINT: implicit by design
  constexpr Int128(std::int64_t v) : v_(v) {}
  constexpr Int128(int v) : v_(v) {}
  constexpr Int128(unsigned v) : v_(v) {}
  constexpr Int128(std::uint64_t v) : v_(static_cast<__int128>(v)) {}

  constexpr __int128 value() const { return v_; }

  friend Int128 operator+(Int128 a, Int128 b) {
    __int128 r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw_overflow("add");
    return r;
  }
  friend Int128 operator-(Int128 a, Int128 b) {
    __int128 r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw_overflow("subtract");
    return r;
  }
  friend Int128 operator*(Int128 a, Int128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw_overflow("multiply");
    return r;
  }
  friend Int128 operator/(Int128 a, Int128 b) {
    if (b.v_ == 0) throw DomainError("Int128: division by zero");
    if (a.v_ == kMin && b.v_ == -1) throw_overflow("divide");
    return a.v_ / b.v_;
  }
  friend Int128 operator%(Int128 a, Int128 b) {
    if (b.v_ == 0) throw DomainError("Int128: remainder by zero");
    if (a.v_ == kMin && b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  Int128 operator-() const {
    if (v_ == kMin) throw_overflow("negate");
    return -v_;
  }

  Int128& operator+=(Int128 b) { return *this = *this + b; }
  Int128& operator-=(Int128 b) { return *this = *this - b; }
  Int128& operator*=(Int128 b) { return *this = *this * b; }

  friend constexpr bool operator==(Int128 a, Int128 b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(Int128 a, Int128 b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  constexpr bool is_negative() const { return v_ < 0; }
  constexpr bool is_odd() const { return (v_ & 1) != 0; }
  constexpr bool is_even() const { return (v_ & 1) == 0; }

  Int128 abs() const { return v_ < 0 ? -*this : *this; }

  constexpr bool fits_int64() const {
    return v_ >= INT64_MIN && v_ <= INT64_MAX;
  }
  std::int64_t to_int64() const {
    if (!fits_int64()) throw RangeError("Int128: value does not fit int64");
    return static_cast<std::int64_t>(v_);
  }

  std::string str() const;

 private:
  static constexpr __int128 kMin = static_cast<__int128>(1) << 127;

  [[noreturn]] static void throw_overflow(const char* op);

  __int128 v_ = 0;
};

std::ostream& operator<<(std::ostream& os, Int128 v);

/// Checked square, the single most common operation in the code base.
inline Int128 sq(Int128 x) { return x * x; }

}  // namespace sqrd
