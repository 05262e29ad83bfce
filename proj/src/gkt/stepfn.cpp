#include "gkt/stepfn.hpp"

#include <json.hpp>

#include <stdexcept>

namespace gkt {

bool same_valued_field(const ValuedField& a, const ValuedField& b) {
  return same_component(a.K, b.K) && a.rel_prec == b.rel_prec;
}

KValue KValue::one(const ValuedField& K) {
  return from_unit(K, 0, LocalElem::one(K.K, K.rel_prec));
}

KValue KValue::from_unit(const ValuedField& K, long ord, LocalElem unit) {
  if (!same_component(unit.component(), K.K))
    throw std::invalid_argument("KValue: unit lives in the wrong completion");
  if (unit.precision() > K.rel_prec) unit = unit.truncated(K.rel_prec);
  if (unit.precision() < 1 || !unit.is_unit())
    throw std::invalid_argument("KValue: unit part must be a unit");
  KValue v;
  v.K_ = K;
  v.zero_ = false;
  v.ord_ = ord;
  v.unit_ = std::move(unit);
  return v;
}

KValue KValue::zero_at(const ValuedField& K, long bound) {
  KValue v;
  v.K_ = K;
  v.zero_ = true;
  v.bound_ = bound;
  return v;
}

std::optional<long> KValue::ord() const {
  if (zero_) return std::nullopt;
  return ord_;
}

KValue KValue::operator*(const KValue& o) const {
  if (!same_valued_field(K_, o.K_)) throw std::invalid_argument("KValue: mixed fields");
  if (zero_ || o.zero_)
    return zero_at(K_, (zero_ ? bound_ : ord_) + (o.zero_ ? o.bound_ : o.ord_));
  return from_unit(K_, ord_ + o.ord_, unit_ * o.unit_);
}

KValue KValue::inverse() const {
  if (zero_) throw std::domain_error("KValue: inverse of zero-at-precision");
  return from_unit(K_, -ord_, unit_.inverse());
}

KValue KValue::operator/(const KValue& o) const { return *this * o.inverse(); }

KValue KValue::operator+(const KValue& o) const {
  if (!same_valued_field(K_, o.K_)) throw std::invalid_argument("KValue: mixed fields");
  if (zero_ && o.zero_) return zero_at(K_, std::min(bound_, o.bound_));
  if (zero_ || o.zero_) {
    const KValue& z = zero_ ? *this : o;
    const KValue& n = zero_ ? o : *this;
    // n + O(t^bound): digits of n below the bound survive
    if (n.ord_ >= z.bound_) return zero_at(K_, z.bound_);
    long rel = std::min(long(n.unit_.precision()), z.bound_ - n.ord_);
    return from_unit(K_, n.ord_, n.unit_.truncated(int(rel)));
  }
  long o0 = std::min(ord_, o.ord_);
  LocalElem ua = unit_.mul_by_pi(int(ord_ - o0));
  LocalElem ub = o.unit_.mul_by_pi(int(o.ord_ - o0));
  LocalElem sum = ua + ub;
  if (sum.is_zero_at_precision()) return zero_at(K_, o0 + sum.precision());
  int val = sum.valuation_capped();
  return from_unit(K_, o0 + val, sum.shifted_down(val));
}

KValue KValue::operator-(const KValue& o) const {
  if (o.zero_) return *this + o;
  KValue neg = from_unit(o.K_, o.ord_, -o.unit_);
  return *this + neg;
}

KValue KValue::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  KValue r = one(K_);
  KValue b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

bool KValue::operator==(const KValue& o) const {
  if (!same_valued_field(K_, o.K_)) return false;
  if (zero_ != o.zero_) return false;
  if (zero_) return true;
  if (ord_ != o.ord_) return false;
  int k = std::min(unit_.precision(), o.unit_.precision());
  return unit_.congruent_mod(o.unit_, k);
}

bool KValue::congruent_one_mod(long r) const {
  KValue diff = *this - one(K_);
  return diff.ord_or(diff.zero_bound()) >= r;
}

std::string KValue::to_string() const {
  if (zero_) return "O(t^" + std::to_string(bound_) + ")";
  std::string s = "t^" + std::to_string(ord_) + "*(";
  if (K_.K->is_integer()) {
    auto d = unit_.zdigits();
    for (size_t i = 0; i < d.size(); ++i) {
      if (i) s += ',';
      s += d[i].get_str();
    }
  } else {
    auto d = unit_.adigits();
    for (size_t i = 0; i < d.size(); ++i) {
      if (i) s += ',';
      s += d[i].to_human_string();
    }
  }
  return s + "):" + std::to_string(unit_.precision());
}

KValue KValue::parse(const ValuedField& K, const std::string& text) {
  if (text.rfind("O(t^", 0) == 0) {
    long bound = std::stol(text.substr(4, text.size() - 5));
    return zero_at(K, bound);
  }
  if (text.rfind("t^", 0) != 0) throw std::invalid_argument("bad KValue text");
  size_t star = text.find("*(");
  long ord = std::stol(text.substr(2, star - 2));
  size_t close = text.rfind("):");
  std::string digits = text.substr(star + 2, close - star - 2);
  int prec = std::stoi(text.substr(close + 2));
  LocalElem unit = LocalElem::parse(K.K, digits + ":" + std::to_string(prec));
  return from_unit(K, ord, unit);
}

// ---------------------------------------------------------------------------

StepFn::StepFn(ProductSpaceRef dom, int level, ValuedField K, std::vector<KValue> table)
    : dom_(std::move(dom)), level_(level), K_(std::move(K)), tab_(std::move(table)) {
  long want = ProdElem::residue_class_count(dom_, level_);
  if (want < 0 || long(tab_.size()) != want)
    throw std::invalid_argument("StepFn: table size does not match the level");
  for (const KValue& v : tab_)
    if (v.is_zero_at_precision())
      throw std::invalid_argument("StepFn: table entries must be non-vanishing");
}

StepFn StepFn::constant(ProductSpaceRef dom, const ValuedField& K, const KValue& value) {
  return StepFn(std::move(dom), 0, K, {value});
}

StepFn StepFn::random(ProductSpaceRef dom, int level, const ValuedField& K, std::uint64_t seed,
                      int delta1, int delta2) {
  if (delta1 > delta2) throw std::invalid_argument("StepFn: empty ord range");
  long n = ProdElem::residue_class_count(dom, level);
  if (n < 0) throw std::invalid_argument("StepFn: level too large");
  Rng rng(seed);
  long radix = K.K->residue_count();
  std::vector<KValue> tab;
  tab.reserve(size_t(n));
  for (long k = 0; k < n; ++k) {
    long ord = rng.range(delta1, delta2);
    if (K.K->is_integer()) {
      mpz_class value = 0, place = 1;
      for (int i = 0; i < K.rel_prec; ++i) {
        long idx = i == 0 ? 1 + long(rng.bounded(std::uint64_t(radix - 1)))
                          : long(rng.bounded(std::uint64_t(radix)));
        value += K.K->zrep(idx) * place;
        place *= K.K->pi_z();
      }
      tab.push_back(KValue::from_unit(K, ord, LocalElem::from_value(K.K, value, K.rel_prec)));
    } else {
      Poly value = Poly::zero(K.K->fq());
      Poly place = Poly::one(K.K->fq());
      for (int i = 0; i < K.rel_prec; ++i) {
        long idx = i == 0 ? 1 + long(rng.bounded(std::uint64_t(radix - 1)))
                          : long(rng.bounded(std::uint64_t(radix)));
        value = value + K.K->arep(idx) * place;
        place = place * K.K->pi_a();
      }
      tab.push_back(KValue::from_unit(K, ord, LocalElem::from_value(K.K, value, K.rel_prec)));
    }
  }
  return StepFn(std::move(dom), level, K, std::move(tab));
}

KValue StepFn::eval(const ProdElem& x) const {
  if (!same_space(x.space(), dom_)) throw std::invalid_argument("StepFn: wrong domain");
  return tab_[size_t(x.residue_key(level_))];
}

KValue StepFn::eval(const FracTuple& x) const { return eval(x.digits_of(level_)); }

std::pair<long, long> StepFn::ord_bounds() const {
  long lo = 0, hi = 0;
  bool first = true;
  for (const KValue& v : tab_) {
    long o = *v.ord();
    if (first || o < lo) lo = o;
    if (first || o > hi) hi = o;
    first = false;
  }
  return {lo, hi};
}

StepFn StepFn::negated_arg() const {
  std::vector<KValue> tab(tab_.size());
  for (long key = 0; key < long(tab_.size()); ++key) {
    ProdElem x = ProdElem::from_residue_key(dom_, level_, key);
    tab[size_t(key)] = eval(-x);
  }
  return StepFn(dom_, level_, K_, std::move(tab));
}

StepFn StepFn::with_value(long key, KValue v) const {
  std::vector<KValue> tab = tab_;
  tab.at(size_t(key)) = std::move(v);
  return StepFn(dom_, level_, K_, std::move(tab));
}

std::string StepFn::to_json() const {
  nlohmann::ordered_json j;
  j["domain"] = dom_->id();
  nlohmann::ordered_json digit_sets = nlohmann::ordered_json::array();
  for (const auto& c : dom_->components()) {
    if (c->canonical_digits()) {
      digit_sets.push_back(nullptr);
    } else {
      nlohmann::ordered_json reps = nlohmann::ordered_json::array();
      for (long i = 0; i < c->residue_count(); ++i)
        reps.push_back(c->is_integer() ? c->zrep(i).get_str() : c->arep(i).to_human_string());
      digit_sets.push_back(reps);
    }
  }
  j["digit_sets"] = digit_sets;
  j["level"] = level_;
  j["K"] = K_.K->id();
  j["rel_prec"] = K_.rel_prec;
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const KValue& v : tab_) table.push_back(v.to_string());
  j["table"] = table;
  return j.dump();
}

StepFn StepFn::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ProductSpaceRef dom = ProductSpace::parse(j.at("domain").get<std::string>());
  if (j.contains("digit_sets")) {
    std::vector<ComponentRef> comps;
    const auto& sets = j.at("digit_sets");
    for (size_t t = 0; t < dom->arity(); ++t) {
      ComponentRef c = dom->component(t);
      if (!sets.at(t).is_null()) {
        if (c->is_integer()) {
          std::vector<mpz_class> reps;
          for (const auto& r : sets.at(t)) reps.emplace_back(r.get<std::string>());
          c = c->with_digit_set(std::move(reps));
        } else {
          std::vector<Poly> reps;
          for (const auto& r : sets.at(t)) reps.push_back(Poly::parse(c->fq(), r.get<std::string>()));
          c = c->with_digit_set(std::move(reps));
        }
      }
      comps.push_back(c);
    }
    dom = ProductSpace::make(std::move(comps));
  }
  ValuedField K{Component::parse(j.at("K").get<std::string>()), j.at("rel_prec").get<int>()};
  std::vector<KValue> tab;
  for (const auto& t : j.at("table")) tab.push_back(KValue::parse(K, t.get<std::string>()));
  return StepFn(std::move(dom), j.at("level").get<int>(), K, std::move(tab));
}

}  // namespace gkt
