#pragma once

#include <memory>
#include <vector>

#include "gkt/poly.hpp"

namespace gkt {

class ExtField;
using ExtFieldRef = std::shared_ptr<const ExtField>;

// F_{q^m} = F_q[X]/(modulus), modulus monic irreducible of degree m over the
// base field.  Elements are packed codes in [0, q^m): mixed-radix-q digit
// vectors, constant coefficient in the lowest digit, so base-field constants
// keep their codes.  Fields with at most 2^16 elements get exp/log tables;
// larger ones fall back to polynomial arithmetic on unpacked vectors.
class ExtField : public std::enable_shared_from_this<ExtField> {
 public:
  static ExtFieldRef make(FqRef base, Poly modulus);
  // Modulus is the first irreducible in monic enumeration order.
  static ExtFieldRef make_default(FqRef base, int m);

  const FqRef& base() const { return base_; }
  const Poly& modulus() const { return mod_; }
  int m() const { return m_; }
  long order() const { return order_; }
  long q() const { return base_->q(); }
  bool has_tables() const { return !exp_.empty(); }

  code_t add(code_t a, code_t b) const;
  code_t sub(code_t a, code_t b) const;
  code_t neg(code_t a) const;
  code_t mul(code_t a, code_t b) const;
  code_t inv(code_t a) const;  // throws std::domain_error on zero
  code_t pow(code_t a, long n) const;
  code_t frobenius(code_t a) const { return pow(a, q()); }  // z -> z^q
  code_t frobenius_iter(code_t a, int s) const;             // z -> z^{q^s}

  code_t from_base(code_t c) const;  // constants F_q -> F_{q^m}
  code_t from_poly(const Poly& f) const;
  Poly to_poly(code_t a) const;  // canonical representative, deg < m

  // Roots of a polynomial over F_q inside this field, ascending by code.
  std::vector<code_t> roots_of(const Poly& f) const;
  code_t eval_poly(const Poly& f, code_t z) const;

 private:
  ExtField() = default;
  std::vector<code_t> unpack(code_t a) const;
  code_t pack(const std::vector<code_t>& v) const;
  code_t mul_poly_path(code_t a, code_t b) const;

  FqRef base_;
  Poly mod_;
  int m_ = 0;
  long order_ = 0;
  std::vector<code_t> exp_;
  std::vector<code_t> log_;
};

bool same_field(const ExtFieldRef& a, const ExtFieldRef& b);

// Element of F_{q^m} bundled with its field descriptor.
struct FieldElem {
  ExtFieldRef F;
  code_t code = 0;

  FieldElem() = default;
  FieldElem(ExtFieldRef f, code_t c) : F(std::move(f)), code(c) {}

  bool is_zero() const { return code == 0; }
  std::vector<code_t> coeff_vector() const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend bool operator==(const FieldElem& a, const FieldElem& b);
  FieldElem inverse() const;
  FieldElem frobenius() const { return FieldElem(F, F->frobenius(code)); }
  FieldElem pow(long n) const { return FieldElem(F, F->pow(code, n)); }
};

}  // namespace gkt
