#pragma once

#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "gkt/fq.hpp"

namespace gkt {

// Dense polynomial over F_q, little-endian coefficients, always trimmed.
// This is the ring A = F_q[theta]; |f| = q^deg f is the normalized absolute
// value at the infinite place.
class Poly {
 public:
  static constexpr int kNegInfDeg = std::numeric_limits<int>::min() / 2;

  Poly() = default;  // invalid placeholder; all real values carry a field
  explicit Poly(FqRef F) : F_(std::move(F)) {}
  Poly(FqRef F, std::vector<code_t> coeffs);

  static Poly zero(FqRef F) { return Poly(std::move(F)); }
  static Poly one(FqRef F) { return constant(std::move(F), 1); }
  static Poly constant(FqRef F, code_t c);
  static Poly theta(FqRef F);
  // c * theta^k
  static Poly monomial(FqRef F, code_t c, int k);

  const FqRef& field() const { return F_; }
  const std::vector<code_t>& coeffs() const { return c_; }
  int degree() const { return c_.empty() ? kNegInfDeg : int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  code_t coeff(int i) const { return (i >= 0 && i < int(c_.size())) ? c_[size_t(i)] : 0; }
  code_t leading_coeff() const { return c_.empty() ? 0 : c_.back(); }

  Poly operator+(const Poly& g) const;
  Poly operator-(const Poly& g) const;
  Poly operator-() const;
  Poly operator*(const Poly& g) const;
  Poly scaled(code_t c) const;
  bool operator==(const Poly& g) const;
  bool operator!=(const Poly& g) const { return !(*this == g); }

  // f = s*g + r with deg r < deg g; throws on zero divisor.
  std::pair<Poly, Poly> divmod(const Poly& g) const;
  Poly operator/(const Poly& g) const { return divmod(g).first; }
  Poly operator%(const Poly& g) const { return divmod(g).second; }

  Poly monic() const;  // unit-normalized; zero stays zero
  code_t eval(code_t x) const;
  Poly derivative() const;
  Poly pow(long n) const;

  std::string to_coeff_string() const;  // "c0,c1,...,ck"
  std::string to_human_string() const;  // "theta^2+theta+1"
  // Accepts either text form.
  static Poly parse(FqRef F, const std::string& text);

 private:
  void trim();
  FqRef F_;
  std::vector<code_t> c_;
};

Poly gcd(const Poly& a, const Poly& b);  // monic
// g = s*a + t*b with g monic (or zero).
std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& a, long n, const Poly& m);

// All q^i monic polynomials of degree i, lexicographic in the coefficient
// vector with the constant term varying fastest.  The order is part of the
// contract: products over A_{+,i} are reproducible bit for bit.
std::vector<Poly> enumerate_monic(const FqRef& F, int i);
// All q^n polynomials of degree < n (zero included), same ordering.
std::vector<Poly> enumerate_below_degree(const FqRef& F, int n);

// Distinct-degree irreducibility test; requires deg f >= 1.
bool is_irreducible(const Poly& f);

// Exact valuation ord_f(g) by trial division; f non-constant, g nonzero.
int poly_valuation(const Poly& g, const Poly& f);

}  // namespace gkt
