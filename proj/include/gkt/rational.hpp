#pragma once

#include <gmpxx.h>

#include <string>

#include "gkt/poly.hpp"

namespace gkt {

// Element of k = F_q(theta): num/den with den monic and gcd(num, den) = 1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.field())) {}
  RatFunc(Poly num, Poly den);

  static RatFunc zero(const FqRef& F) { return RatFunc(Poly::zero(F)); }
  static RatFunc one(const FqRef& F) { return RatFunc(Poly::one(F)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FqRef& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integral() const { return den_.is_one(); }
  // log_q of the infinite absolute value; kNegInfDeg for 0.
  int abs_degree() const {
    return num_.is_zero() ? Poly::kNegInfDeg : num_.degree() - den_.degree();
  }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inverse() const;
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  // <x>: the unique element with |<x>| < 1 and x - <x> in A.
  RatFunc frac_part() const;

  std::string to_string() const;  // "num" or "num/(den)" in human form
  static RatFunc parse(const FqRef& F, const std::string& text);

 private:
  void normalize();
  Poly num_, den_;
};

// Fractional part of a rational: the representative in [0, 1).
mpq_class frac_part(const mpq_class& x);

std::string mpq_to_string(const mpq_class& x);
mpq_class mpq_parse(const std::string& text);

}  // namespace gkt
