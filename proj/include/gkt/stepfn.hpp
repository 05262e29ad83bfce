#pragma once

#include <optional>

#include "gkt/local.hpp"
#include "gkt/rng.hpp"

namespace gkt {

// Value field K for the classification theorems: a completion component
// reused as a complete non-Archimedean field, with a fixed relative working
// precision for units.
struct ValuedField {
  ComponentRef K;
  int rel_prec = 24;
};

bool same_valued_field(const ValuedField& a, const ValuedField& b);

// Element of K^x (or zero-at-precision): t^ord * unit with the unit carried
// to rel_prec digits.  Multiplicative operations are exact on valuations;
// subtraction renormalizes and can lose relative digits to cancellation.
class KValue {
 public:
  KValue() = default;
  static KValue one(const ValuedField& K);
  static KValue from_unit(const ValuedField& K, long ord, LocalElem unit);
  static KValue zero_at(const ValuedField& K, long bound);

  const ValuedField& field() const { return K_; }
  bool is_zero_at_precision() const { return zero_; }
  // valuation; nullopt for zero-at-precision (ord >= zero bound)
  std::optional<long> ord() const;
  long ord_or(long dflt) const { return zero_ ? dflt : ord_; }
  long zero_bound() const { return bound_; }
  const LocalElem& unit() const { return unit_; }

  KValue operator*(const KValue& o) const;
  KValue operator/(const KValue& o) const;
  KValue inverse() const;
  KValue operator+(const KValue& o) const;
  KValue operator-(const KValue& o) const;
  KValue pow(long n) const;
  bool operator==(const KValue& o) const;  // exact at working precision
  bool operator!=(const KValue& o) const { return !(*this == o); }

  // ord(x - 1) >= r
  bool congruent_one_mod(long r) const;

  std::string to_string() const;  // "t^<ord>*(digits):R" / "O(t^<bound>)"
  static KValue parse(const ValuedField& K, const std::string& text);

 private:
  ValuedField K_;
  bool zero_ = true;
  long ord_ = 0;
  long bound_ = 0;
  LocalElem unit_;
};

// Locally constant non-vanishing function on a product space: a value table
// over the residues mod pi^level.  Dense model of the continuous functions
// in the classification theorems.
class StepFn {
 public:
  StepFn() = default;
  StepFn(ProductSpaceRef dom, int level, ValuedField K, std::vector<KValue> table);
  static StepFn constant(ProductSpaceRef dom, const ValuedField& K, const KValue& value);
  // Seeded random table: ord uniform in [delta1, delta2], unit digits
  // uniform with nonzero constant digit.
  static StepFn random(ProductSpaceRef dom, int level, const ValuedField& K,
                       std::uint64_t seed, int delta1, int delta2);

  const ProductSpaceRef& domain() const { return dom_; }
  int level() const { return level_; }
  const ValuedField& K() const { return K_; }
  long table_size() const { return long(tab_.size()); }
  const KValue& value_at(long key) const { return tab_.at(size_t(key)); }

  KValue eval(const ProdElem& x) const;
  KValue eval(const FracTuple& x) const;

  // ord bounds over the table (delta_1, delta_2); throws if any entry is
  // zero-at-precision (the model requires non-vanishing)
  std::pair<long, long> ord_bounds() const;

  StepFn negated_arg() const;  // x -> f(-x)
  StepFn with_value(long key, KValue v) const;

  std::string to_json() const;
  static StepFn from_json(const std::string& text);

 private:
  ProductSpaceRef dom_;
  int level_ = 0;
  ValuedField K_;
  std::vector<KValue> tab_;
};

}  // namespace gkt
