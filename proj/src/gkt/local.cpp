#include "gkt/local.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gkt {

namespace {

mpz_class pi_z_pow(const ComponentRef& c, int k) { return c->pi_z_pow(k); }
Poly pi_a_pow(const ComponentRef& c, int k) { return c->pi_a_pow(k); }

long checked_pow_long(long base, int exp, const char* what) {
  long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1L << 31) / base) throw std::invalid_argument(std::string(what) + ": too large");
    r *= base;
  }
  return r;
}

}  // namespace

ComponentRef Component::integer(long p, int e) {
  if (p < 2) throw std::invalid_argument("component: p must be a prime >= 2");
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) throw std::invalid_argument("component: p must be prime");
  if (e < 1) throw std::invalid_argument("component: uniformizer exponent must be >= 1");
  auto c = std::shared_ptr<Component>(new Component());
  c->kind_ = Kind::Integer;
  c->p_ = p;
  c->e_ = e;
  c->residues_ = checked_pow_long(p, e, "component residue count");
  mpz_class pi;
  mpz_ui_pow_ui(pi.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  c->pi_z_ = pi;
  return c;
}

ComponentRef Component::polynomial(FqRef F, Poly v, int e) {
  if (!same_field(F, v.field())) throw std::invalid_argument("component: v over wrong field");
  if (!v.is_monic() || v.degree() < 1)
    throw std::invalid_argument("component: v must be monic of positive degree");
  if (!is_irreducible(v)) throw std::invalid_argument("component: v must be irreducible");
  if (e < 1) throw std::invalid_argument("component: uniformizer exponent must be >= 1");
  auto c = std::shared_ptr<Component>(new Component());
  c->kind_ = Kind::Polynomial;
  c->e_ = e;
  c->fq_ = std::move(F);
  c->v_ = std::move(v);
  c->pi_a_ = c->v_.pow(e);
  c->residues_ = checked_pow_long(c->fq_->q(), e * c->v_.degree(), "component residue count");
  return c;
}

ComponentRef Component::with_digit_set(std::vector<mpz_class> reps) const {
  if (kind_ != Kind::Integer)
    throw std::invalid_argument("integer digit set on polynomial component");
  if (long(reps.size()) != residues_)
    throw std::invalid_argument("digit set must have one representative per residue");
  auto c = std::shared_ptr<Component>(new Component(*this));
  c->zreps_.assign(size_t(residues_), 0);
  std::vector<bool> seen(size_t(residues_), false);
  for (const mpz_class& r : reps) {
    mpz_class m;
    mpz_mod(m.get_mpz_t(), r.get_mpz_t(), pi_z_.get_mpz_t());
    long idx = m.get_si();
    if (seen[size_t(idx)]) throw std::invalid_argument("digit set has duplicate residue");
    seen[size_t(idx)] = true;
    c->zreps_[size_t(idx)] = r;
  }
  c->canonical_ = false;
  return c;
}

ComponentRef Component::with_digit_set(std::vector<Poly> reps) const {
  if (kind_ != Kind::Polynomial)
    throw std::invalid_argument("polynomial digit set on integer component");
  if (long(reps.size()) != residues_)
    throw std::invalid_argument("digit set must have one representative per residue");
  auto c = std::shared_ptr<Component>(new Component(*this));
  c->areps_.assign(size_t(residues_), Poly::zero(fq_));
  std::vector<bool> seen(size_t(residues_), false);
  for (const Poly& r : reps) {
    long idx = aindex(r);
    if (seen[size_t(idx)]) throw std::invalid_argument("digit set has duplicate residue");
    seen[size_t(idx)] = true;
    c->areps_[size_t(idx)] = r;
  }
  c->canonical_ = false;
  return c;
}

mpz_class Component::zrep(long idx) const {
  if (canonical_) return mpz_class(idx);
  return zreps_[size_t(idx)];
}

Poly Component::arep(long idx) const {
  if (canonical_) {
    std::vector<code_t> coeffs;
    long t = idx;
    while (t > 0) {
      coeffs.push_back(code_t(t % fq_->q()));
      t /= fq_->q();
    }
    return Poly(fq_, std::move(coeffs));
  }
  return areps_[size_t(idx)];
}

mpz_class Component::pi_z_pow(int k) const {
  std::lock_guard<std::mutex> lock(pows_.mu);
  if (pows_.z.empty()) pows_.z.push_back(1);
  while (int(pows_.z.size()) <= k) pows_.z.push_back(pows_.z.back() * pi_z_);
  return pows_.z[size_t(k)];
}

Poly Component::pi_a_pow(int k) const {
  std::lock_guard<std::mutex> lock(pows_.mu);
  if (pows_.a.empty()) pows_.a.push_back(Poly::one(fq_));
  while (int(pows_.a.size()) <= k) pows_.a.push_back(pows_.a.back() * pi_a_);
  return pows_.a[size_t(k)];
}

long Component::zindex(const mpz_class& value) const {
  mpz_class m;
  mpz_mod(m.get_mpz_t(), value.get_mpz_t(), pi_z_.get_mpz_t());
  return m.get_si();
}

long Component::aindex(const Poly& value) const {
  Poly r = value.degree() >= pi_a_.degree() ? value % pi_a_ : value;
  long code = 0;
  for (int i = pi_a_.degree() - 1; i >= 0; --i) code = code * fq_->q() + r.coeff(i);
  return code;
}

std::string Component::id() const {
  if (kind_ == Kind::Integer) {
    std::string s = "Zp:" + std::to_string(p_);
    if (e_ > 1) s += ":" + std::to_string(e_);
    return s;
  }
  std::string s = "Av:" + std::to_string(fq_->q()) + ":" + v_.to_human_string();
  if (e_ > 1) s += ":" + std::to_string(e_);
  return s;
}

ComponentRef Component::parse(const std::string& text) {
  std::vector<std::string> f;
  size_t pos = 0;
  while (true) {
    size_t c = text.find(':', pos);
    f.push_back(text.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  if (f.size() < 2) throw std::invalid_argument("bad component id: " + text);
  if (f[0] == "Zp") {
    long p = std::stol(f[1]);
    int e = f.size() >= 3 ? std::stoi(f[2]) : 1;
    return integer(p, e);
  }
  if (f[0] == "Av") {
    if (f.size() < 3) throw std::invalid_argument("bad component id: " + text);
    long q = std::stol(f[1]);
    // q = p^e with p prime; recover (p, e) by factoring
    long p = q;
    int e = 0;
    long base = 0;
    for (long d = 2; d <= p; ++d) {
      if (p % d == 0) {
        base = d;
        while (p % d == 0) {
          p /= d;
          ++e;
        }
        break;
      }
    }
    if (p != 1) throw std::invalid_argument("component: q must be a prime power");
    FqRef F = Fq::make(base, e);
    Poly v = Poly::parse(F, f[2]);
    int ue = f.size() >= 4 ? std::stoi(f[3]) : 1;
    return polynomial(F, v, ue);
  }
  throw std::invalid_argument("bad component id: " + text);
}

bool same_component(const ComponentRef& a, const ComponentRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind() || a->e() != b->e()) return false;
  if (a->canonical_digits() != b->canonical_digits()) return false;
  if (a->is_integer()) {
    if (a->p() != b->p()) return false;
  } else {
    if (!same_field(a->fq(), b->fq()) || !(a->v() == b->v())) return false;
  }
  if (!a->canonical_digits()) {
    for (long i = 0; i < a->residue_count(); ++i) {
      if (a->is_integer() && a->zrep(i) != b->zrep(i)) return false;
      if (!a->is_integer() && !(a->arep(i) == b->arep(i))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// LocalElem

LocalElem LocalElem::zero(ComponentRef c, int prec) {
  LocalElem x;
  x.comp_ = std::move(c);
  x.prec_ = prec;
  if (!x.comp_->is_integer()) x.aval_ = Poly::zero(x.comp_->fq());
  return x;
}

LocalElem LocalElem::one(ComponentRef c, int prec) { return from_int(std::move(c), 1, prec); }

LocalElem LocalElem::from_value(ComponentRef c, mpz_class value, int prec) {
  if (!c->is_integer()) throw std::invalid_argument("integer value in polynomial component");
  if (prec < 0) throw std::invalid_argument("negative precision");
  LocalElem x;
  x.comp_ = std::move(c);
  x.prec_ = prec;
  mpz_class mod = pi_z_pow(x.comp_, prec);
  mpz_mod(x.zval_.get_mpz_t(), value.get_mpz_t(), mod.get_mpz_t());
  return x;
}

LocalElem LocalElem::from_value(ComponentRef c, Poly value, int prec) {
  if (c->is_integer()) throw std::invalid_argument("polynomial value in integer component");
  if (prec < 0) throw std::invalid_argument("negative precision");
  LocalElem x;
  x.comp_ = std::move(c);
  x.prec_ = prec;
  Poly mod = pi_a_pow(x.comp_, prec);
  x.aval_ = value.degree() >= mod.degree() || prec == 0 ? value % mod : std::move(value);
  return x;
}

LocalElem LocalElem::from_int(ComponentRef c, long value, int prec) {
  if (c->is_integer()) return from_value(std::move(c), mpz_class(value), prec);
  Poly f = Poly::constant(c->fq(), c->fq()->from_int(value));
  return from_value(std::move(c), std::move(f), prec);
}

std::vector<mpz_class> LocalElem::zdigits() const {
  if (!comp_->is_integer()) throw std::logic_error("zdigits on polynomial component");
  std::vector<mpz_class> out;
  out.reserve(size_t(prec_));
  mpz_class cur = zval_;
  for (int i = 0; i < prec_; ++i) {
    const mpz_class rep = comp_->zrep(comp_->zindex(cur));
    out.push_back(rep);
    mpz_class diff = cur - rep;
    mpz_divexact(cur.get_mpz_t(), diff.get_mpz_t(), comp_->pi_z().get_mpz_t());
  }
  return out;
}

std::vector<Poly> LocalElem::adigits() const {
  if (comp_->is_integer()) throw std::logic_error("adigits on integer component");
  std::vector<Poly> out;
  out.reserve(size_t(prec_));
  Poly cur = aval_;
  for (int i = 0; i < prec_; ++i) {
    const Poly rep = comp_->arep(comp_->aindex(cur));
    out.push_back(rep);
    cur = (cur - rep) / comp_->pi_a();
  }
  return out;
}

long LocalElem::digit_index(int i) const {
  if (i < 0 || i >= prec_) throw std::out_of_range("digit index beyond precision");
  if (comp_->is_integer()) {
    mpz_class cur = zval_;
    for (int k = 0; k < i; ++k) {
      mpz_class diff = cur - comp_->zrep(comp_->zindex(cur));
      mpz_divexact(cur.get_mpz_t(), diff.get_mpz_t(), comp_->pi_z().get_mpz_t());
    }
    return comp_->zindex(cur);
  }
  Poly cur = aval_;
  for (int k = 0; k < i; ++k) cur = (cur - comp_->arep(comp_->aindex(cur))) / comp_->pi_a();
  return comp_->aindex(cur);
}

namespace {
void require_match(const LocalElem& a, const LocalElem& b) {
  if (!same_component(a.component(), b.component()))
    throw std::invalid_argument("operation across different components");
}
}  // namespace

LocalElem LocalElem::operator+(const LocalElem& o) const {
  require_match(*this, o);
  int prec = std::min(prec_, o.prec_);
  if (comp_->is_integer()) return from_value(comp_, zval_ + o.zval_, prec);
  return from_value(comp_, aval_ + o.aval_, prec);
}

LocalElem LocalElem::operator-(const LocalElem& o) const {
  require_match(*this, o);
  int prec = std::min(prec_, o.prec_);
  if (comp_->is_integer()) return from_value(comp_, zval_ - o.zval_, prec);
  return from_value(comp_, aval_ - o.aval_, prec);
}

LocalElem LocalElem::operator*(const LocalElem& o) const {
  require_match(*this, o);
  int prec = std::min(prec_, o.prec_);
  if (comp_->is_integer()) return from_value(comp_, zval_ * o.zval_, prec);
  return from_value(comp_, aval_ * o.aval_, prec);
}

LocalElem LocalElem::operator-() const {
  if (comp_->is_integer()) return from_value(comp_, -zval_, prec_);
  return from_value(comp_, -aval_, prec_);
}

LocalElem LocalElem::inverse() const {
  if (!is_unit()) throw std::domain_error("inverse of non-unit local element");
  if (comp_->is_integer()) {
    mpz_class mod = pi_z_pow(comp_, prec_), inv;
    if (mpz_invert(inv.get_mpz_t(), zval_.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw std::logic_error("inverse failed");
    return from_value(comp_, inv, prec_);
  }
  auto [g, s, t] = xgcd(aval_, pi_a_pow(comp_, prec_));
  (void)t;
  if (!g.is_one()) throw std::logic_error("inverse failed");
  return from_value(comp_, s, prec_);
}

LocalElem LocalElem::mul_by_pi(int k) const {
  if (k < 0) throw std::invalid_argument("mul_by_pi: negative power");
  if (comp_->is_integer()) return from_value(comp_, zval_ * pi_z_pow(comp_, k), prec_ + k);
  return from_value(comp_, aval_ * pi_a_pow(comp_, k), prec_ + k);
}

LocalElem LocalElem::shifted_down(int k) const {
  if (k < 0 || k > prec_) throw std::invalid_argument("shifted_down: bad power");
  if (valuation_capped() < k) throw std::domain_error("shifted_down: value not divisible");
  if (comp_->is_integer()) {
    mpz_class q;
    mpz_class pk = pi_z_pow(comp_, k);
    mpz_divexact(q.get_mpz_t(), zval_.get_mpz_t(), pk.get_mpz_t());
    return from_value(comp_, q, prec_ - k);
  }
  return from_value(comp_, aval_ / pi_a_pow(comp_, k), prec_ - k);
}

LocalElem LocalElem::truncated(int prec) const {
  if (prec > prec_) throw std::invalid_argument("cannot raise precision by truncation");
  if (comp_->is_integer()) return from_value(comp_, zval_, prec);
  return from_value(comp_, aval_, prec);
}

bool LocalElem::is_unit() const {
  if (prec_ < 1) throw std::domain_error("unit test requires precision >= 1");
  if (comp_->is_integer()) return comp_->zindex(zval_) != 0;
  return comp_->aindex(aval_) != 0;
}

bool LocalElem::is_zero_at_precision() const {
  if (comp_->is_integer()) return zval_ == 0;
  return aval_.is_zero();
}

int LocalElem::valuation_capped() const {
  if (is_zero_at_precision()) return prec_;
  if (comp_->is_integer()) {
    mpz_class cur = zval_;
    int v = 0;
    mpz_class r, q;
    while (true) {
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), cur.get_mpz_t(), comp_->pi_z().get_mpz_t());
      if (r != 0) return v;
      ++v;
      cur = q;
      if (cur == 0) return std::min(v, prec_);
    }
  }
  int v = 0;
  Poly cur = aval_;
  while (true) {
    auto [q, r] = cur.divmod(comp_->pi_a());
    if (!r.is_zero()) return v;
    ++v;
    cur = q;
    if (cur.is_zero()) return std::min(v, prec_);
  }
}

bool LocalElem::congruent_mod(const LocalElem& o, int k) const {
  require_match(*this, o);
  if (prec_ < k || o.prec_ < k)
    throw std::invalid_argument("congruence check beyond available precision");
  if (comp_->is_integer()) {
    mpz_class mod = pi_z_pow(comp_, k), a, b;
    mpz_mod(a.get_mpz_t(), zval_.get_mpz_t(), mod.get_mpz_t());
    mpz_mod(b.get_mpz_t(), o.zval_.get_mpz_t(), mod.get_mpz_t());
    return a == b;
  }
  Poly mod = pi_a_pow(comp_, k);
  return (aval_ - o.aval_) % mod == Poly::zero(comp_->fq());
}

bool LocalElem::operator==(const LocalElem& o) const {
  if (!same_component(comp_, o.comp_) || prec_ != o.prec_) return false;
  return comp_->is_integer() ? zval_ == o.zval_ : aval_ == o.aval_;
}

LocalElem LocalElem::phi() const {
  if (prec_ < 1) throw std::domain_error("precision exhausted");
  if (comp_->is_integer()) {
    mpz_class diff = zval_ - comp_->zrep(comp_->zindex(zval_));
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), diff.get_mpz_t(), comp_->pi_z().get_mpz_t());
    return from_value(comp_, q, prec_ - 1);
  }
  Poly diff = aval_ - comp_->arep(comp_->aindex(aval_));
  return from_value(comp_, diff / comp_->pi_a(), prec_ - 1);
}

std::string LocalElem::to_string() const {
  std::string s = comp_->id() + ":";
  if (comp_->is_integer()) {
    auto d = zdigits();
    for (size_t i = 0; i < d.size(); ++i) {
      if (i) s += ',';
      s += d[i].get_str();
    }
  } else {
    auto d = adigits();
    for (size_t i = 0; i < d.size(); ++i) {
      if (i) s += ',';
      s += d[i].to_human_string();
    }
  }
  s += ":" + std::to_string(prec_);
  return s;
}

LocalElem LocalElem::parse(const std::string& text) {
  size_t last = text.rfind(':');
  if (last == std::string::npos) throw std::invalid_argument("bad local element text");
  size_t mid = text.rfind(':', last - 1);
  if (mid == std::string::npos) throw std::invalid_argument("bad local element text");
  ComponentRef c = Component::parse(text.substr(0, mid));
  return parse(c, text.substr(mid + 1));
}

LocalElem LocalElem::parse(const ComponentRef& c, const std::string& text) {
  // "d0,d1,...:N" or full "component-id:digits:N" (id ignored in favor of c)
  size_t last = text.rfind(':');
  if (last == std::string::npos) throw std::invalid_argument("bad local element text");
  int prec = std::stoi(text.substr(last + 1));
  size_t mid = text.rfind(':', last - 1);
  std::string digits = text.substr(mid == std::string::npos ? 0 : mid + 1, last - (mid == std::string::npos ? 0 : mid + 1));
  std::vector<std::string> toks;
  if (!digits.empty()) {
    size_t pos = 0;
    while (true) {
      size_t comma = digits.find(',', pos);
      toks.push_back(digits.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (int(toks.size()) != prec) throw std::invalid_argument("digit count does not match precision");
  if (c->is_integer()) {
    mpz_class value = 0, place = 1;
    for (const auto& t : toks) {
      mpz_class digit(t);
      if (digit != c->zrep(c->zindex(digit)))
        throw std::invalid_argument("digit not in the component digit set");
      value += digit * place;
      place *= c->pi_z();
    }
    return from_value(c, value, prec);
  }
  Poly value = Poly::zero(c->fq());
  Poly place = Poly::one(c->fq());
  for (const auto& t : toks) {
    Poly digit = Poly::parse(c->fq(), t);
    if (!(digit == c->arep(c->aindex(digit))))
      throw std::invalid_argument("digit not in the component digit set");
    value = value + digit * place;
    place = place * c->pi_a();
  }
  return from_value(c, value, prec);
}

// ---------------------------------------------------------------------------
// FracElem

FracElem FracElem::make(ComponentRef c, mpq_class x) {
  if (!c->is_integer()) throw std::invalid_argument("rational value in polynomial component");
  FracElem f;
  f.comp_ = std::move(c);
  x.canonicalize();
  f.zq_ = std::move(x);
  return f;
}

FracElem FracElem::make(ComponentRef c, RatFunc x) {
  if (c->is_integer()) throw std::invalid_argument("function value in integer component");
  if (!same_field(c->fq(), x.field())) throw std::invalid_argument("value over wrong field");
  FracElem f;
  f.comp_ = std::move(c);
  f.af_ = std::move(x);
  return f;
}

FracElem FracElem::zero(ComponentRef c) {
  if (c->is_integer()) return make(std::move(c), mpq_class(0));
  auto F = c->fq();
  return make(std::move(c), RatFunc::zero(F));
}

bool FracElem::is_zero() const { return comp_->is_integer() ? zq_ == 0 : af_.is_zero(); }

namespace {
void require_match(const FracElem& a, const FracElem& b) {
  if (!same_component(a.component(), b.component()))
    throw std::invalid_argument("operation across different components");
}
}  // namespace

FracElem FracElem::operator+(const FracElem& o) const {
  require_match(*this, o);
  if (comp_->is_integer()) return make(comp_, zq_ + o.zq_);
  return make(comp_, af_ + o.af_);
}

FracElem FracElem::operator-(const FracElem& o) const {
  require_match(*this, o);
  if (comp_->is_integer()) return make(comp_, zq_ - o.zq_);
  return make(comp_, af_ - o.af_);
}

FracElem FracElem::operator*(const FracElem& o) const {
  require_match(*this, o);
  if (comp_->is_integer()) return make(comp_, zq_ * o.zq_);
  return make(comp_, af_ * o.af_);
}

FracElem FracElem::operator-() const {
  if (comp_->is_integer()) return make(comp_, -zq_);
  return make(comp_, -af_);
}

FracElem FracElem::mul_pi(int k) const {
  if (k < 0) throw std::invalid_argument("mul_pi: negative power");
  if (comp_->is_integer()) {
    mpz_class pk = 1;
    for (int i = 0; i < k; ++i) pk *= comp_->pi_z();
    return make(comp_, zq_ * mpq_class(pk));
  }
  return make(comp_, af_ * RatFunc(comp_->pi_a().pow(k)));
}

bool FracElem::operator==(const FracElem& o) const {
  if (!same_component(comp_, o.comp_)) return false;
  return comp_->is_integer() ? zq_ == o.zq_ : af_ == o.af_;
}

FracElem FracElem::frac_part() const {
  if (comp_->is_integer()) return make(comp_, gkt::frac_part(zq_));
  return make(comp_, af_.frac_part());
}

bool FracElem::is_integral() const {
  return comp_->is_integer() ? zq_.get_den() == 1 : af_.is_integral();
}

bool FracElem::is_pi_integral() const {
  if (comp_->is_integer()) {
    mpz_class r;
    mpz_mod_ui(r.get_mpz_t(), zq_.get_den().get_mpz_t(), static_cast<unsigned long>(comp_->p()));
    return r != 0 || zq_.get_den() == 1;
  }
  if (af_.is_integral()) return true;
  return !(af_.den() % comp_->v()).is_zero();
}

LocalElem FracElem::digits_of(int N) const {
  if (comp_->is_integer()) {
    mpz_class den = zq_.get_den(), mod = pi_z_pow(comp_, N), inv;
    if (den != 1 && mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw std::domain_error("not integral at the place");
    if (den == 1) inv = 1;
    // den coprime to pi^N iff coprime to p
    mpz_class g;
    mpz_gcd_ui(g.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(comp_->p()));
    if (g != 1) throw std::domain_error("not integral at the place");
    return LocalElem::from_value(comp_, zq_.get_num() * inv, N);
  }
  if (!is_pi_integral()) throw std::domain_error("not integral at the place");
  Poly mod = pi_a_pow(comp_, N);
  Poly num = af_.num() % mod;
  if (af_.is_integral()) return LocalElem::from_value(comp_, num, N);
  auto [g, s, t] = xgcd(af_.den() % mod, mod);
  (void)t;
  if (!g.is_one()) throw std::domain_error("not integral at the place");
  return LocalElem::from_value(comp_, num * s, N);
}

std::string FracElem::to_string() const {
  if (comp_->is_integer()) return zq_.get_str();
  return af_.to_string();
}

FracElem FracElem::parse(const ComponentRef& c, const std::string& text) {
  if (c->is_integer()) return make(c, mpq_parse(text));
  return make(c, RatFunc::parse(c->fq(), text));
}

// ---------------------------------------------------------------------------
// ProductSpace / ProdElem / FracTuple

ProductSpaceRef ProductSpace::make(std::vector<ComponentRef> comps) {
  if (comps.empty()) throw std::invalid_argument("product space needs at least one component");
  return std::shared_ptr<ProductSpace>(new ProductSpace(std::move(comps)));
}

bool ProductSpace::all_canonical() const {
  for (const auto& c : comps_)
    if (!c->canonical_digits()) return false;
  return true;
}

std::string ProductSpace::id() const {
  std::string s;
  for (size_t t = 0; t < comps_.size(); ++t) {
    if (t) s += ',';
    s += comps_[t]->id();
  }
  return s;
}

ProductSpaceRef ProductSpace::parse(const std::string& text) {
  std::vector<ComponentRef> comps;
  size_t pos = 0;
  while (true) {
    size_t comma = text.find(',', pos);
    comps.push_back(Component::parse(
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return make(std::move(comps));
}

bool same_space(const ProductSpaceRef& a, const ProductSpaceRef& b) {
  if (a == b) return true;
  if (!a || !b || a->arity() != b->arity()) return false;
  for (size_t t = 0; t < a->arity(); ++t)
    if (!same_component(a->component(t), b->component(t))) return false;
  return true;
}

ProdElem::ProdElem(ProductSpaceRef S, std::vector<LocalElem> parts)
    : S_(std::move(S)), parts_(std::move(parts)) {
  if (parts_.size() != S_->arity()) throw std::invalid_argument("component count mismatch");
  for (size_t t = 0; t < parts_.size(); ++t)
    if (!same_component(parts_[t].component(), S_->component(t)))
      throw std::invalid_argument("component descriptor mismatch");
}

ProdElem ProdElem::zero(ProductSpaceRef S, int prec) {
  std::vector<LocalElem> parts;
  for (size_t t = 0; t < S->arity(); ++t) parts.push_back(LocalElem::zero(S->component(t), prec));
  return ProdElem(std::move(S), std::move(parts));
}

int ProdElem::precision() const {
  int p = parts_[0].precision();
  for (const auto& x : parts_) p = std::min(p, x.precision());
  return p;
}

ProdElem ProdElem::phi() const {
  std::vector<LocalElem> parts;
  parts.reserve(parts_.size());
  for (const auto& x : parts_) parts.push_back(x.phi());
  return ProdElem(S_, std::move(parts));
}

ProdElem ProdElem::operator-() const {
  std::vector<LocalElem> parts;
  parts.reserve(parts_.size());
  for (const auto& x : parts_) parts.push_back(-x);
  return ProdElem(S_, std::move(parts));
}

ProdElem ProdElem::neg_phi_neg() const { return -((-*this).phi()); }

ProdElem ProdElem::truncated(int prec) const {
  std::vector<LocalElem> parts;
  parts.reserve(parts_.size());
  for (const auto& x : parts_) parts.push_back(x.truncated(prec));
  return ProdElem(S_, std::move(parts));
}

bool ProdElem::operator==(const ProdElem& o) const {
  if (!same_space(S_, o.S_)) return false;
  for (size_t t = 0; t < parts_.size(); ++t)
    if (!(parts_[t] == o.parts_[t])) return false;
  return true;
}

long ProdElem::residue_key(int level) const {
  long key = 0, place = 1;
  for (size_t t = 0; t < parts_.size(); ++t) {
    const LocalElem& x = parts_[t];
    if (x.precision() < level) throw std::invalid_argument("residue_key beyond precision");
    long radix = S_->component(t)->residue_count();
    LocalElem cur = x;
    for (int i = 0; i < level; ++i) {
      long idx = cur.digit_index(0);
      key += idx * place;
      place *= radix;
      cur = cur.phi();
    }
  }
  return key;
}

ProdElem ProdElem::from_residue_key(const ProductSpaceRef& S, int level, long key) {
  std::vector<LocalElem> parts;
  for (size_t t = 0; t < S->arity(); ++t) {
    const ComponentRef& c = S->component(t);
    long radix = c->residue_count();
    if (c->is_integer()) {
      mpz_class value = 0, place = 1;
      for (int i = 0; i < level; ++i) {
        long idx = key % radix;
        key /= radix;
        value += c->zrep(idx) * place;
        place *= c->pi_z();
      }
      parts.push_back(LocalElem::from_value(c, value, level));
    } else {
      Poly value = Poly::zero(c->fq());
      Poly place = Poly::one(c->fq());
      for (int i = 0; i < level; ++i) {
        long idx = key % radix;
        key /= radix;
        value = value + c->arep(idx) * place;
        place = place * c->pi_a();
      }
      parts.push_back(LocalElem::from_value(c, value, level));
    }
  }
  return ProdElem(S, std::move(parts));
}

long ProdElem::residue_class_count(const ProductSpaceRef& S, int level) {
  long total = 1;
  for (size_t t = 0; t < S->arity(); ++t) {
    long radix = S->component(t)->residue_count();
    for (int i = 0; i < level; ++i) {
      if (total > (1L << 40) / radix) return -1;
      total *= radix;
    }
  }
  return total;
}

std::string ProdElem::to_string() const {
  std::string s;
  for (size_t t = 0; t < parts_.size(); ++t) {
    if (t) s += ';';
    s += parts_[t].to_string();
  }
  return s;
}

FracTuple::FracTuple(ProductSpaceRef S, std::vector<FracElem> parts)
    : S_(std::move(S)), parts_(std::move(parts)) {
  if (parts_.size() != S_->arity()) throw std::invalid_argument("component count mismatch");
  for (size_t t = 0; t < parts_.size(); ++t)
    if (!same_component(parts_[t].component(), S_->component(t)))
      throw std::invalid_argument("component descriptor mismatch");
}

FracTuple FracTuple::zero(ProductSpaceRef S) {
  std::vector<FracElem> parts;
  for (size_t t = 0; t < S->arity(); ++t) parts.push_back(FracElem::zero(S->component(t)));
  return FracTuple(std::move(S), std::move(parts));
}

FracTuple FracTuple::operator-() const {
  std::vector<FracElem> parts;
  for (const auto& x : parts_) parts.push_back(-x);
  return FracTuple(S_, std::move(parts));
}

FracTuple FracTuple::mul_pi(int k) const {
  std::vector<FracElem> parts;
  for (const auto& x : parts_) parts.push_back(x.mul_pi(k));
  return FracTuple(S_, std::move(parts));
}

FracTuple FracTuple::frac_part() const {
  std::vector<FracElem> parts;
  for (const auto& x : parts_) parts.push_back(x.frac_part());
  return FracTuple(S_, std::move(parts));
}

bool FracTuple::operator==(const FracTuple& o) const {
  if (!same_space(S_, o.S_)) return false;
  for (size_t t = 0; t < parts_.size(); ++t)
    if (!(parts_[t] == o.parts_[t])) return false;
  return true;
}

ProdElem FracTuple::digits_of(int N) const {
  std::vector<LocalElem> parts;
  for (const auto& x : parts_) parts.push_back(x.digits_of(N));
  return ProdElem(S_, std::move(parts));
}

std::string FracTuple::to_string() const {
  std::string s;
  for (size_t t = 0; t < parts_.size(); ++t) {
    if (t) s += ';';
    s += parts_[t].to_string();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Periodic points of the digit shift

std::vector<FracTuple> periodic_points(const ProductSpaceRef& S, int n,
                                       const PeriodicOptions& opt) {
  if (n < 1) throw std::invalid_argument("period must be >= 1");
  // total block count
  double est = 1;
  for (size_t t = 0; t < S->arity(); ++t)
    est *= std::pow(double(S->component(t)->residue_count()), n);
  if (est > double(opt.cap))
    throw std::runtime_error("periodic point enumeration of " + std::to_string(est) +
                             " points exceeds cap " + std::to_string(opt.cap));

  std::vector<std::uint64_t> block_counts(S->arity());
  for (size_t t = 0; t < S->arity(); ++t) {
    std::uint64_t b = 1;
    for (int i = 0; i < n; ++i) b *= std::uint64_t(S->component(t)->residue_count());
    block_counts[t] = b;
  }

  std::vector<FracTuple> out;
  std::vector<std::uint64_t> idx(S->arity(), 0);
  while (true) {
    bool skip = false;
    std::vector<FracElem> parts;
    for (size_t t = 0; t < S->arity() && !skip; ++t) {
      const ComponentRef& c = S->component(t);
      long radix = c->residue_count();
      std::uint64_t b = idx[t];
      if (opt.restrict_abs && c->is_integer() && c->canonical_digits() &&
          b == block_counts[t] - 1) {
        // all-top digit block: |x_t| = 1, outside the stated condition
        skip = true;
        break;
      }
      if (c->is_integer()) {
        mpz_class w = 0, place = 1;
        std::uint64_t bb = b;
        for (int i = 0; i < n; ++i) {
          w += c->zrep(long(bb % std::uint64_t(radix))) * place;
          bb /= std::uint64_t(radix);
          place *= c->pi_z();
        }
        mpz_class den = pi_z_pow(c, n) - 1;
        mpq_class x(w, den);
        x.canonicalize();
        parts.push_back(FracElem::make(c, opt.form == PeriodicForm::MinusFixed ? x : -x));
      } else {
        Poly w = Poly::zero(c->fq());
        Poly place = Poly::one(c->fq());
        std::uint64_t bb = b;
        for (int i = 0; i < n; ++i) {
          w = w + c->arep(long(bb % std::uint64_t(radix))) * place;
          bb /= std::uint64_t(radix);
          place = place * c->pi_a();
        }
        Poly den = pi_a_pow(c, n) - Poly::one(c->fq());
        RatFunc x(w, den);
        parts.push_back(FracElem::make(c, opt.form == PeriodicForm::MinusFixed ? x : -x));
      }
    }
    if (!skip) out.emplace_back(S, std::move(parts));

    size_t t = 0;
    while (t < S->arity()) {
      if (++idx[t] < block_counts[t]) break;
      idx[t] = 0;
      ++t;
    }
    if (t == S->arity()) break;
  }

  // Spot-check the defining equation on digit expansions.
  size_t stride = out.size() <= 4096 ? 1 : out.size() / 1024;
  for (size_t i = 0; i < out.size(); i += stride) {
    const FracTuple& x = out[i];
    ProdElem y = opt.form == PeriodicForm::MinusFixed ? (-x).digits_of(2 * n)
                                                      : x.digits_of(2 * n);
    ProdElem z = y;
    for (int j = 0; j < n; ++j) z = z.phi();
    for (size_t t = 0; t < y.arity(); ++t)
      if (!y.part(t).congruent_mod(z.part(t), n))
        throw std::logic_error("periodic point fails its defining equation");
  }
  return out;
}

std::vector<FracTuple> phi_orbit(const FracTuple& z, int n) {
  const ProductSpaceRef& S = z.space();
  for (size_t t = 0; t < S->arity(); ++t) {
    FracElem scaled = z.part(t).mul_pi(n) - z.part(t);  // (pi^n - 1) z
    if (!scaled.is_integral()) throw std::invalid_argument("non-periodic input");
  }
  ProdElem digits = z.digits_of(n);
  std::vector<FracTuple> orbit;
  orbit.reserve(size_t(n));
  for (int j = 0; j < n; ++j) {
    std::vector<FracElem> parts;
    for (size_t t = 0; t < S->arity(); ++t) {
      const ComponentRef& c = S->component(t);
      if (c->is_integer()) {
        auto d = digits.part(t).zdigits();
        mpz_class w = 0, place = 1;
        for (int i = 0; i < n; ++i) {
          w += d[size_t((i + j) % n)] * place;
          place *= c->pi_z();
        }
        mpq_class val(w, 1 - pi_z_pow(c, n));
        val.canonicalize();
        parts.push_back(FracElem::make(c, val));
      } else {
        auto d = digits.part(t).adigits();
        Poly w = Poly::zero(c->fq());
        Poly place = Poly::one(c->fq());
        for (int i = 0; i < n; ++i) {
          w = w + d[size_t((i + j) % n)] * place;
          place = place * c->pi_a();
        }
        parts.push_back(
            FracElem::make(c, RatFunc(w, Poly::one(c->fq()) - pi_a_pow(c, n))));
      }
    }
    orbit.emplace_back(S, std::move(parts));
  }
  return orbit;
}

bool orbit_sets_equal(const FracTuple& x, int n) {
  const ProductSpaceRef& S = x.space();
  // periodicity and the stated bounds
  for (size_t t = 0; t < S->arity(); ++t) {
    const ComponentRef& c = S->component(t);
    const FracElem& xt = x.part(t);
    FracElem scaled = xt.mul_pi(n) - xt;
    if (!scaled.is_integral()) throw std::invalid_argument("non-periodic input");
    if (c->is_integer()) {
      if (xt.zq() < 0 || xt.zq() >= 1) throw std::invalid_argument("non-periodic input");
    } else {
      if (!xt.af().is_zero() && xt.af().abs_degree() >= 0)
        throw std::invalid_argument("non-periodic input");
    }
  }

  std::vector<std::string> lhs, rhs;
  for (int j = 0; j < n; ++j) lhs.push_back(x.mul_pi(j).frac_part().to_string());
  for (const FracTuple& y : phi_orbit(-x, n)) rhs.push_back((-y).to_string());

  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  return lhs == rhs;
}

}  // namespace gkt
