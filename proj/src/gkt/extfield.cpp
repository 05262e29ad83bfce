#include "gkt/extfield.hpp"

#include <stdexcept>

namespace gkt {

namespace {
std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}
}  // namespace

ExtFieldRef ExtField::make(FqRef base, Poly modulus) {
  if (!same_field(base, modulus.field()))
    throw std::invalid_argument("ExtField: modulus over wrong base field");
  if (!modulus.is_monic() || modulus.degree() < 1)
    throw std::invalid_argument("ExtField: modulus must be monic of positive degree");
  if (!is_irreducible(modulus)) throw std::invalid_argument("ExtField: modulus is reducible");

  auto E = std::shared_ptr<ExtField>(new ExtField());
  E->base_ = std::move(base);
  E->mod_ = std::move(modulus);
  E->m_ = E->mod_.degree();
  long order = 1;
  for (int i = 0; i < E->m_; ++i) {
    if (order > (1L << 31) / E->base_->q())
      throw std::invalid_argument("ExtField: field too large");
    order *= E->base_->q();
  }
  E->order_ = order;

  if (order <= 65536) {
    // smallest multiplicative generator, then exp/log tables
    const auto factors = prime_factors(order - 1);
    long gen = order == 2 ? 1 : 0;
    for (long cand = 1; cand < order && gen == 0; ++cand) {
      bool ok = cand != 1 || order == 2;
      for (long r : factors) {
        Poly t = E->to_poly(code_t(cand));
        Poly pw = powmod(t, (order - 1) / r, E->mod_);
        if (pw.is_one()) {
          ok = false;
          break;
        }
      }
      if (ok) gen = cand;
    }
    E->exp_.resize(size_t(order - 1));
    E->log_.assign(size_t(order), 0);
    Poly acc = Poly::one(E->base_);
    Poly g = E->to_poly(code_t(gen));
    for (long k = 0; k < order - 1; ++k) {
      code_t c = E->from_poly(acc);
      E->exp_[size_t(k)] = c;
      E->log_[c] = code_t(k);
      acc = mulmod(acc, g, E->mod_);
    }
  }
  return E;
}

ExtFieldRef ExtField::make_default(FqRef base, int m) {
  for (const Poly& f : enumerate_monic(base, m))
    if (is_irreducible(f)) return make(base, f);
  throw std::logic_error("ExtField: no irreducible modulus found");
}

std::vector<code_t> ExtField::unpack(code_t a) const {
  std::vector<code_t> v(size_t(m_), 0);
  long q = base_->q(), t = a;
  for (int i = 0; i < m_; ++i) {
    v[size_t(i)] = code_t(t % q);
    t /= q;
  }
  return v;
}

code_t ExtField::pack(const std::vector<code_t>& v) const {
  long q = base_->q(), c = 0;
  for (size_t i = v.size(); i-- > 0;) c = c * q + v[i];
  return code_t(c);
}

code_t ExtField::add(code_t a, code_t b) const {
  auto va = unpack(a), vb = unpack(b);
  for (int i = 0; i < m_; ++i) va[size_t(i)] = base_->add(va[size_t(i)], vb[size_t(i)]);
  return pack(va);
}

code_t ExtField::neg(code_t a) const {
  auto va = unpack(a);
  for (auto& c : va) c = base_->neg(c);
  return pack(va);
}

code_t ExtField::sub(code_t a, code_t b) const { return add(a, neg(b)); }

code_t ExtField::mul_poly_path(code_t a, code_t b) const {
  return from_poly(mulmod(to_poly(a), to_poly(b), mod_));
}

code_t ExtField::mul(code_t a, code_t b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) return exp_[(long(log_[a]) + long(log_[b])) % (order_ - 1)];
  return mul_poly_path(a, b);
}

code_t ExtField::inv(code_t a) const {
  if (a == 0) throw std::domain_error("division by zero in finite field");
  if (!exp_.empty()) return exp_[(order_ - 1 - long(log_[a])) % (order_ - 1)];
  auto [g, s, t] = xgcd(to_poly(a), mod_);
  (void)t;
  if (!g.is_one()) throw std::logic_error("ExtField: inverse failed");
  return from_poly(s % mod_);
}

code_t ExtField::pow(code_t a, long n) const {
  if (a == 0) {
    if (n < 0) throw std::domain_error("division by zero in finite field");
    return n == 0 ? 1 : 0;
  }
  if (!exp_.empty()) {
    long l = (long(log_[a]) % (order_ - 1)) * (n % (order_ - 1)) % (order_ - 1);
    if (l < 0) l += order_ - 1;
    return exp_[l];
  }
  long nn = n % (order_ - 1);
  if (nn < 0) nn += order_ - 1;
  return from_poly(powmod(to_poly(a), nn, mod_));
}

code_t ExtField::frobenius_iter(code_t a, int s) const {
  code_t r = a;
  for (int i = 0; i < s; ++i) r = frobenius(r);
  return r;
}

code_t ExtField::from_base(code_t c) const {
  if (long(c) >= base_->q()) throw std::invalid_argument("base-field code out of range");
  return c;
}

code_t ExtField::from_poly(const Poly& f) const {
  Poly r = f.degree() >= m_ ? f % mod_ : f;
  std::vector<code_t> v(size_t(m_), 0);
  for (int i = 0; i <= r.degree(); ++i) v[size_t(i)] = r.coeff(i);
  return pack(v);
}

Poly ExtField::to_poly(code_t a) const { return Poly(base_, unpack(a)); }

code_t ExtField::eval_poly(const Poly& f, code_t z) const {
  if (!same_field(f.field(), base_)) throw std::invalid_argument("eval_poly: wrong base field");
  code_t acc = 0;
  for (int i = f.degree(); i >= 0; --i) acc = add(mul(acc, z), from_base(f.coeff(i)));
  return acc;
}

std::vector<code_t> ExtField::roots_of(const Poly& f) const {
  std::vector<code_t> out;
  for (long z = 0; z < order_; ++z)
    if (eval_poly(f, code_t(z)) == 0) out.push_back(code_t(z));
  return out;
}

bool same_field(const ExtFieldRef& a, const ExtFieldRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return same_field(a->base(), b->base()) && a->modulus() == b->modulus();
}

std::vector<code_t> FieldElem::coeff_vector() const {
  std::vector<code_t> v(size_t(F->m()));
  long q = F->q(), t = code;
  for (int i = 0; i < F->m(); ++i) {
    v[size_t(i)] = code_t(t % q);
    t /= q;
  }
  return v;
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  if (!same_field(a.F, b.F)) throw std::invalid_argument("mixed-field addition");
  return FieldElem(a.F, a.F->add(a.code, b.code));
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  if (!same_field(a.F, b.F)) throw std::invalid_argument("mixed-field subtraction");
  return FieldElem(a.F, a.F->sub(a.code, b.code));
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  if (!same_field(a.F, b.F)) throw std::invalid_argument("mixed-field multiplication");
  return FieldElem(a.F, a.F->mul(a.code, b.code));
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  return same_field(a.F, b.F) && a.code == b.code;
}

FieldElem FieldElem::inverse() const { return FieldElem(F, F->inv(code)); }

}  // namespace gkt
