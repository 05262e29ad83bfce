#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gkt/rational.hpp"

namespace gkt {

class Component;
using ComponentRef = std::shared_ptr<const Component>;

// One completion component: Z_p with pi = p^e, or A_v with pi = v^e.
// The digit set is canonical ({0..pi-1}, resp. polynomials of degree
// < e*deg v) unless a custom complete set of representatives of O/(pi) is
// installed; custom sets drive the generalized digit-shift pipeline.
class Component : public std::enable_shared_from_this<Component> {
 public:
  enum class Kind { Integer, Polynomial };

  static ComponentRef integer(long p, int e = 1);
  static ComponentRef polynomial(FqRef F, Poly v, int e = 1);
  ComponentRef with_digit_set(std::vector<mpz_class> reps) const;
  ComponentRef with_digit_set(std::vector<Poly> reps) const;

  Kind kind() const { return kind_; }
  bool is_integer() const { return kind_ == Kind::Integer; }
  long p() const { return p_; }
  int e() const { return e_; }
  const FqRef& fq() const { return fq_; }
  const Poly& v() const { return v_; }
  int d() const { return v_.degree(); }  // polynomial kind only
  const mpz_class& pi_z() const { return pi_z_; }
  const Poly& pi_a() const { return pi_a_; }
  long residue_count() const { return residues_; }
  bool canonical_digits() const { return canonical_; }

  // Digit-set representative of the canonical residue with the given index.
  mpz_class zrep(long idx) const;
  Poly arep(long idx) const;
  long zindex(const mpz_class& value) const;  // canonical residue of value mod pi
  long aindex(const Poly& value) const;

  // pi^k, memoized per component
  mpz_class pi_z_pow(int k) const;
  Poly pi_a_pow(int k) const;

  std::string id() const;  // "Zp:<p>[:e]" | "Av:<q>:<v>[:e]"
  static ComponentRef parse(const std::string& text);

 private:
  Component() = default;

  struct PowCache {
    std::mutex mu;
    std::vector<mpz_class> z;
    std::vector<Poly> a;
    PowCache() = default;
    PowCache(const PowCache&) {}  // copies start empty
    PowCache& operator=(const PowCache&) { return *this; }
  };

  Kind kind_ = Kind::Integer;
  long p_ = 0;
  int e_ = 1;
  FqRef fq_;
  Poly v_;
  mpz_class pi_z_;
  Poly pi_a_;
  long residues_ = 0;
  bool canonical_ = true;
  std::vector<mpz_class> zreps_;
  std::vector<Poly> areps_;
  mutable PowCache pows_;
};

bool same_component(const ComponentRef& a, const ComponentRef& b);

// Truncated element of one completion: the canonical value mod pi^N plus the
// precision N.  Digits against the component's digit set are derived views.
class LocalElem {
 public:
  LocalElem() = default;
  static LocalElem zero(ComponentRef c, int prec);
  static LocalElem one(ComponentRef c, int prec);
  static LocalElem from_value(ComponentRef c, mpz_class value, int prec);
  static LocalElem from_value(ComponentRef c, Poly value, int prec);
  static LocalElem from_int(ComponentRef c, long value, int prec);

  const ComponentRef& component() const { return comp_; }
  int precision() const { return prec_; }
  const mpz_class& zvalue() const { return zval_; }
  const Poly& avalue() const { return aval_; }

  std::vector<mpz_class> zdigits() const;
  std::vector<Poly> adigits() const;
  long digit_index(int i) const;  // canonical residue index of digit i

  LocalElem operator+(const LocalElem& o) const;
  LocalElem operator-(const LocalElem& o) const;
  LocalElem operator*(const LocalElem& o) const;
  LocalElem operator-() const;
  LocalElem inverse() const;  // unit only
  LocalElem mul_by_pi(int k = 1) const;
  LocalElem shifted_down(int k) const;  // divide by pi^k; requires divisibility
  LocalElem truncated(int prec) const;

  bool is_unit() const;  // requires precision >= 1
  bool is_zero_at_precision() const;
  // min(ord_pi, precision)
  int valuation_capped() const;
  bool congruent_mod(const LocalElem& o, int k) const;
  bool operator==(const LocalElem& o) const;
  bool operator!=(const LocalElem& o) const { return !(*this == o); }

  // Digit left shift: x -> (x - rep(x mod pi)) / pi, precision drops by one.
  LocalElem phi() const;

  std::string to_string() const;  // "component-id:d0,d1,...:N"
  static LocalElem parse(const std::string& text);
  static LocalElem parse(const ComponentRef& c, const std::string& text);

 private:
  ComponentRef comp_;
  mpz_class zval_;
  Poly aval_;
  int prec_ = 0;
};

// Element of the component's fraction field (Q resp. k), exact.
class FracElem {
 public:
  FracElem() = default;
  static FracElem make(ComponentRef c, mpq_class x);
  static FracElem make(ComponentRef c, RatFunc x);
  static FracElem zero(ComponentRef c);

  const ComponentRef& component() const { return comp_; }
  const mpq_class& zq() const { return zq_; }
  const RatFunc& af() const { return af_; }
  bool is_zero() const;

  FracElem operator+(const FracElem& o) const;
  FracElem operator-(const FracElem& o) const;
  FracElem operator*(const FracElem& o) const;
  FracElem operator-() const;
  FracElem mul_pi(int k) const;  // multiply by pi^k, k >= 0
  bool operator==(const FracElem& o) const;
  bool operator!=(const FracElem& o) const { return !(*this == o); }

  // Componentwise fractional part: [0,1) for Z, |.| < 1 for A.
  FracElem frac_part() const;
  bool is_integral() const;          // in Z resp. A
  bool is_pi_integral() const;       // denominator a unit at the place
  LocalElem digits_of(int N) const;  // throws "not integral at the place"

  std::string to_string() const;
  static FracElem parse(const ComponentRef& c, const std::string& text);

 private:
  ComponentRef comp_;
  mpq_class zq_;
  RatFunc af_;
};

class ProductSpace;
using ProductSpaceRef = std::shared_ptr<const ProductSpace>;

class ProductSpace : public std::enable_shared_from_this<ProductSpace> {
 public:
  static ProductSpaceRef make(std::vector<ComponentRef> comps);
  size_t arity() const { return comps_.size(); }
  const ComponentRef& component(size_t t) const { return comps_[t]; }
  const std::vector<ComponentRef>& components() const { return comps_; }
  bool all_canonical() const;
  std::string id() const;  // comma-joined component ids
  static ProductSpaceRef parse(const std::string& text);

 private:
  explicit ProductSpace(std::vector<ComponentRef> c) : comps_(std::move(c)) {}
  std::vector<ComponentRef> comps_;
};

bool same_space(const ProductSpaceRef& a, const ProductSpaceRef& b);

// Tuple of truncated component elements.
class ProdElem {
 public:
  ProdElem() = default;
  ProdElem(ProductSpaceRef S, std::vector<LocalElem> parts);
  static ProdElem zero(ProductSpaceRef S, int prec);

  const ProductSpaceRef& space() const { return S_; }
  const LocalElem& part(size_t t) const { return parts_[t]; }
  size_t arity() const { return parts_.size(); }
  int precision() const;  // minimum across components

  ProdElem phi() const;
  ProdElem neg_phi_neg() const;  // -phi(-x)
  ProdElem operator-() const;
  ProdElem truncated(int prec) const;
  bool operator==(const ProdElem& o) const;

  // Index of the residue class mod pi^level (digit indices, mixed radix,
  // component 0's constant digit fastest).
  long residue_key(int level) const;
  static ProdElem from_residue_key(const ProductSpaceRef& S, int level, long key);
  static long residue_class_count(const ProductSpaceRef& S, int level);  // -1 on overflow

  std::string to_string() const;

 private:
  ProductSpaceRef S_;
  std::vector<LocalElem> parts_;
};

// Tuple over the product of fraction fields.
class FracTuple {
 public:
  FracTuple() = default;
  FracTuple(ProductSpaceRef S, std::vector<FracElem> parts);
  static FracTuple zero(ProductSpaceRef S);

  const ProductSpaceRef& space() const { return S_; }
  const FracElem& part(size_t t) const { return parts_[t]; }
  size_t arity() const { return parts_.size(); }

  FracTuple operator-() const;
  FracTuple mul_pi(int k) const;
  FracTuple frac_part() const;
  bool operator==(const FracTuple& o) const;
  bool operator!=(const FracTuple& o) const { return !(*this == o); }

  ProdElem digits_of(int N) const;
  std::string to_string() const;

 private:
  ProductSpaceRef S_;
  std::vector<FracElem> parts_;
};

// Which fixed-point equation the enumeration solves.
enum class PeriodicForm {
  MinusFixed,  // phi^(n)(-x) = -x; points x = w/(pi^n - 1)
  PlainFixed,  // phi^(n)(x)  = x;  points x = -w/(pi^n - 1)
};

struct PeriodicOptions {
  PeriodicForm form = PeriodicForm::MinusFixed;
  // Side condition of the ungeneralized setting: drop the all-top digit
  // block in canonical integer components (|x_t| < 1).  Generalized digit
  // sets enumerate every block.
  bool restrict_abs = true;
  std::uint64_t cap = 1000000;
};

std::vector<FracTuple> periodic_points(const ProductSpaceRef& S, int n,
                                       const PeriodicOptions& opt = {});

// Orbit [z, phi(z), ..., phi^(n-1)(z)] of a phi^n-periodic element, exactly:
// left rotations of the digit block over pi^n - 1.
std::vector<FracTuple> phi_orbit(const FracTuple& z, int n);

// Exact check of {<pi^j x>} = {-phi^(j)(-x)} for a point of period n.
bool orbit_sets_equal(const FracTuple& x, int n);

}  // namespace gkt
