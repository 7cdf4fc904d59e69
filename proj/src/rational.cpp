#include "annihilate/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace annihilate {

void Rational::set_int(long long n) {
  mpz_set_si(mpq_numref(q_), static_cast<long>(n));
  mpz_set_ui(mpq_denref(q_), 1);
}

Rational::Rational(long long num, long long den) {
  mpq_init(q_);
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  mpz_set_si(mpq_numref(q_), static_cast<long>(num));
  mpz_set_si(mpq_denref(q_), static_cast<long>(den));
  mpq_canonicalize(q_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
  mpq_div(q_, q_, o.q_);
  return *this;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string s(text);
  const auto digits_only = [](std::string_view v) {
    if (v.empty()) return false;
    for (char c : v)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  bool neg = false;
  std::string_view body = s;
  if (body.front() == '-' || body.front() == '+') {
    neg = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational r;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den)) return std::nullopt;
    std::string canon = std::string(num) + "/" + std::string(den);
    if (mpq_set_str(r.q_, canon.c_str(), 10) != 0) return std::nullopt;
    if (mpz_sgn(mpq_denref(r.q_)) == 0) return std::nullopt;
    mpq_canonicalize(r.q_);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot);
    auto fp = body.substr(dot + 1);
    if (ip.empty() && fp.empty()) return std::nullopt;
    if ((!ip.empty() && !digits_only(ip)) || (!fp.empty() && !digits_only(fp)))
      return std::nullopt;
    std::string digits = std::string(ip) + std::string(fp);
    if (digits.empty()) return std::nullopt;
    mpz_set_str(mpq_numref(r.q_), digits.c_str(), 10);
    mpz_ui_pow_ui(mpq_denref(r.q_), 10, fp.size());
    mpq_canonicalize(r.q_);
  } else {
    if (!digits_only(body)) return std::nullopt;
    if (mpz_set_str(mpq_numref(r.q_), std::string(body).c_str(), 10) != 0)
      return std::nullopt;
    mpz_set_ui(mpq_denref(r.q_), 1);
  }
  if (neg) mpq_neg(r.q_, r.q_);
  return r;
}

std::string Rational::str() const {
  char* ptr = mpq_get_str(nullptr, 10, q_);
  std::string out(ptr);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(ptr, out.size() + 1);
  return out;
}

long long Rational::floor_int64() const {
  mpz_t f;
  mpz_init(f);
  mpz_fdiv_q(f, mpq_numref(q_), mpq_denref(q_));
  if (!mpz_fits_slong_p(f)) {
    mpz_clear(f);
    throw std::overflow_error("Rational::floor_int64: out of range");
  }
  long long v = mpz_get_si(f);
  mpz_clear(f);
  return v;
}

std::optional<long long> Rational::num_int64() const {
  if (!mpz_fits_slong_p(mpq_numref(q_))) return std::nullopt;
  return mpz_get_si(mpq_numref(q_));
}

std::optional<long long> Rational::den_int64() const {
  if (!mpz_fits_slong_p(mpq_denref(q_))) return std::nullopt;
  return mpz_get_si(mpq_denref(q_));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& r, unsigned long e) {
  Rational acc(1), base = r;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

long long lcm_checked(long long a, long long b) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("lcm_checked: nonpositive");
  long long g = std::gcd(a, b);
  __int128 l = static_cast<__int128>(a / g) * b;
  if (l > static_cast<__int128>(1) << 62)
    throw std::overflow_error("lcm_checked: result too large");
  return static_cast<long long>(l);
}

}  // namespace annihilate
