#pragma once

#include <gmp.h>

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace annihilate {

// Arbitrary-precision rational in canonical form (reduced, denominator > 0).
// Thin value-type wrapper over GMP's mpq_t; all operators return plain
// Rationals so the type composes with templated numeric code.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  template <std::integral T>
  Rational(T n) {
    mpq_init(q_);
    set_int(static_cast<long long>(n));
  }
  Rational(long long num, long long den);

  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  // Accepts "p/q", integers, and decimal literals ("-3", "3/2", "0.3325").
  static std::optional<Rational> parse(std::string_view text);

  // "p/q", or just "p" when the denominator is 1.
  std::string str() const;

  double to_double() const { return mpq_get_d(q_); }
  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }

  // Largest integer <= *this. Throws std::overflow_error if outside int64.
  long long floor_int64() const;
  // Numerator/denominator when they fit an int64.
  std::optional<long long> num_int64() const;
  std::optional<long long> den_int64() const;

  Rational& operator+=(const Rational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    mpq_neg(r.q_, a.q_);
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.q_, b.q_) < 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  void set_int(long long n);
  mpq_t q_;
};

Rational abs(const Rational& r);
// r^e for e >= 0.
Rational pow(const Rational& r, unsigned long e);
// Least common multiple of two positive rationals' denominators is handled by
// callers; this is lcm on int64 with overflow check.
long long lcm_checked(long long a, long long b);

}  // namespace annihilate
