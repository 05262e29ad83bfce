#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace gkt {

using code_t = std::uint32_t;

class Fq;
using FqRef = std::shared_ptr<const Fq>;

// The coefficient field F_q, q = p^e.  Elements are addressed by integer
// codes in [0, q): a code is the base-p expansion of the coefficient vector
// of the element in the power basis of F_p[x]/(modulus), constant term in
// the lowest digit.  Multiplication and inversion go through exp/log tables
// built once at construction, so q is capped at 2^16.
class Fq {
 public:
  // Modulus (for e > 1) is the lexicographically first monic irreducible of
  // degree e over F_p, constant term varying fastest.
  static FqRef make(long p, int e = 1);

  long p() const { return p_; }
  int e() const { return e_; }
  long q() const { return q_; }
  bool is_prime_field() const { return e_ == 1; }
  // Modulus coefficient vector over F_p (little-endian, length e+1); empty
  // when e == 1.
  const std::vector<code_t>& modulus() const { return mod_; }

  code_t zero() const { return 0; }
  code_t one() const { return 1; }
  code_t add(code_t a, code_t b) const;
  code_t sub(code_t a, code_t b) const;
  code_t neg(code_t a) const;
  code_t mul(code_t a, code_t b) const;
  code_t inv(code_t a) const;  // throws std::domain_error on zero
  code_t pow(code_t a, long n) const;
  // Image of an integer under Z -> F_p -> F_q.
  code_t from_int(long n) const;

 private:
  Fq() = default;

  long p_ = 0;
  int e_ = 1;
  long q_ = 0;
  std::vector<code_t> mod_;
  // exp_[k] = g^k for a fixed generator g, k in [0, q-1); log_[exp_[k]] = k.
  std::vector<code_t> exp_;
  std::vector<code_t> log_;
};

// Structural equality of field descriptors; elements of structurally equal
// fields may be mixed freely.
bool same_field(const FqRef& a, const FqRef& b);

}  // namespace gkt
