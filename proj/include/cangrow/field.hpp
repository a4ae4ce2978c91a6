#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "cangrow/errors.hpp"

namespace cangrow {

/// Which ground field a computation runs over.
struct FieldSpec {
  enum class Kind { prime, rational };

  Kind kind = Kind::prime;
  std::uint32_t p = 32003;

  static FieldSpec prime_field(std::uint32_t p) {
    if (!is_prime(p)) throw InvalidArgument("field characteristic " + std::to_string(p) + " is not prime");
    if (p >= (1u << 31)) throw InvalidArgument("field characteristic must be below 2^31");
    return FieldSpec{Kind::prime, p};
  }
  static FieldSpec rationals() { return FieldSpec{Kind::rational, 0}; }

  bool is_rational() const { return kind == Kind::rational; }

  std::string name() const { return is_rational() ? "Q" : "F" + std::to_string(p); }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }
};

/// Arithmetic in Z/p for a runtime prime p < 2^31.
class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p = 32003) : p_(p) {}
  explicit PrimeField(const FieldSpec& spec) : p_(spec.p) {}

  std::uint32_t characteristic() const { return p_; }
  FieldSpec spec() const { return FieldSpec{FieldSpec::Kind::prime, p_}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }

  value_type add(value_type a, value_type b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p_);
  }
  /// a - c*b, the elimination kernel.
  value_type sub_mul(value_type a, value_type c, value_type b) const { return sub(a, mul(c, b)); }

  value_type inv(value_type a) const {
    if (a == 0) throw InvalidArgument("division by zero in F_p");
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<value_type>(t);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  value_type from_int(std::int64_t v) const {
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0) m += p_;
    return static_cast<value_type>(m);
  }
  value_type from_mpz(const mpz_class& v) const {
    mpz_class m = v % p_;
    if (m < 0) m += p_;
    return static_cast<value_type>(m.get_ui());
  }

  /// Symmetric representative, so -1 prints as -1 rather than p-1.
  std::string to_string(value_type a) const {
    if (a > p_ / 2) return "-" + std::to_string(p_ - a);
    return std::to_string(a);
  }

 private:
  std::uint32_t p_;
};

/// Exact arithmetic in Q on GMP rationals.
class RationalField {
 public:
  using value_type = mpq_class;

  RationalField() = default;
  explicit RationalField(const FieldSpec&) {}

  std::uint32_t characteristic() const { return 0; }
  FieldSpec spec() const { return FieldSpec::rationals(); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type sub_mul(const value_type& a, const value_type& c, const value_type& b) const {
    return a - c * b;
  }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw InvalidArgument("division by zero in Q");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return a / b; }
  value_type from_int(std::int64_t v) const { return mpq_class(mpz_class(static_cast<long>(v))); }
  value_type from_mpz(const mpz_class& v) const { return mpq_class(v); }
  std::string to_string(const value_type& a) const { return a.get_str(); }
};

template <class F>
concept Field = requires(const F& f, const typename F::value_type& a) {
  { f.zero() } -> std::convertible_to<typename F::value_type>;
  { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.inv(a) } -> std::convertible_to<typename F::value_type>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
};

}  // namespace cangrow
