#include "gkt/tower.hpp"

#include <stdexcept>

namespace gkt {

namespace {
constexpr int kExactPrec = 1 << 28;  // precision tag for exact constants

void require_same_tower(const TowerElem& a, const TowerElem& b) {
  if (a.tower() != b.tower()) throw std::invalid_argument("operation across different towers");
}
}  // namespace

void TowerElem::normalize() {
  // coefficients outside the stored window are zero (up to prec_), so both
  // ends are trimmed
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  int drop = 0;
  while (drop < int(c_.size()) && c_[size_t(drop)] == 0) ++drop;
  if (drop == int(c_.size())) {
    c_.clear();
    off_ = prec_;
    return;
  }
  if (drop > 0) {
    c_.erase(c_.begin(), c_.begin() + drop);
    off_ += drop;
  }
}

TowerElem TowerElem::zero(TowerRef T, int prec) {
  TowerElem x;
  x.T_ = std::move(T);
  x.prec_ = prec;
  x.off_ = prec;
  return x;
}

TowerElem TowerElem::from_coeffs(TowerRef T, int offset, std::vector<code_t> coeffs, int prec) {
  TowerElem x;
  x.T_ = std::move(T);
  x.prec_ = prec;
  x.off_ = offset;
  if (offset < prec) {
    if (long(coeffs.size()) > long(prec) - offset) coeffs.resize(size_t(prec - offset));
    x.c_ = std::move(coeffs);
  }
  x.normalize();
  return x;
}

TowerElem TowerElem::constant(TowerRef T, code_t c, int prec) {
  return from_coeffs(std::move(T), 0, {c}, prec);
}

TowerElem TowerElem::uniformizer_pow(TowerRef T, int k, int prec) {
  return from_coeffs(std::move(T), k, {1}, prec);
}

std::optional<int> TowerElem::valuation() const {
  if (c_.empty()) return std::nullopt;
  return off_;
}

code_t TowerElem::coeff(int k) const {
  if (k >= prec_) throw std::out_of_range("tower coefficient beyond precision");
  if (k < off_ || c_.empty()) return 0;
  size_t i = size_t(k - off_);
  return i < c_.size() ? c_[i] : 0;
}

TowerElem TowerElem::operator+(const TowerElem& o) const {
  require_same_tower(*this, o);
  const auto& R = T_->residue();
  int prec = std::min(prec_, o.prec_);
  int off = std::min(val_or(prec_), o.val_or(o.prec_));
  off = std::min(off, prec);
  long end_a = c_.empty() ? long(off) : long(off_) + long(c_.size());
  long end_b = o.c_.empty() ? long(off) : long(o.off_) + long(o.c_.size());
  long end = std::min(std::max(end_a, end_b), long(prec));
  TowerElem r;
  r.T_ = T_;
  r.prec_ = prec;
  r.off_ = off;
  if (off < end) {
    r.c_.assign(size_t(end - off), 0);
    for (long k = off; k < end; ++k) r.c_[size_t(k - off)] = R->add(coeff(int(k)), o.coeff(int(k)));
  }
  r.normalize();
  return r;
}

TowerElem TowerElem::operator-() const {
  TowerElem r = *this;
  const auto& R = T_->residue();
  for (auto& c : r.c_) c = R->neg(c);
  return r;
}

TowerElem TowerElem::operator-(const TowerElem& o) const { return *this + (-o); }

TowerElem TowerElem::operator*(const TowerElem& o) const {
  require_same_tower(*this, o);
  const auto& R = T_->residue();
  int va = val_or(prec_), vb = o.val_or(o.prec_);
  long prec_l = std::min(long(prec_) + vb, long(o.prec_) + va);
  int prec = int(std::min(prec_l, long(kExactPrec)));
  TowerElem r;
  r.T_ = T_;
  r.prec_ = prec;
  if (c_.empty() || o.c_.empty()) {
    r.off_ = prec;
    return r;
  }
  int off = va + vb;  // both operands nonzero here, so va = off_, vb = o.off_
  r.off_ = off;
  long len = std::min(long(prec) - off, long(c_.size()) + long(o.c_.size()) - 1);
  if (off < prec && len > 0) {
    r.c_.assign(size_t(len), 0);
    for (size_t i = 0; i < c_.size() && i < r.c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) {
        size_t k = i + j;
        if (k >= r.c_.size()) break;
        r.c_[k] = R->add(r.c_[k], R->mul(c_[i], o.c_[j]));
      }
    }
  }
  r.normalize();
  return r;
}

TowerElem TowerElem::inverse() const {
  if (c_.empty()) throw std::domain_error("tower division by zero (at working precision)");
  const auto& R = T_->residue();
  code_t lead = R->inv(c_[0]);
  if (c_.size() == 1) {
    long prec = std::min(long(prec_) - 2 * off_, long(1) << 28);
    return from_coeffs(T_, -off_, {lead}, int(prec));
  }
  // materialized relative precision; exact inputs are capped, which only
  // lowers the claimed precision
  int L = int(std::min(long(prec_) - off_, long(8192)));
  std::vector<code_t> inv(size_t(L), 0);
  inv[0] = lead;
  for (int k = 1; k < L; ++k) {
    code_t s = 0;
    for (int j = 1; j <= k; ++j) {
      code_t cj = size_t(j) < c_.size() ? c_[size_t(j)] : 0;
      if (cj == 0) continue;
      s = R->add(s, R->mul(cj, inv[size_t(k - j)]));
    }
    inv[size_t(k)] = R->neg(R->mul(lead, s));
  }
  return from_coeffs(T_, -off_, std::move(inv), L - off_);
}

TowerElem TowerElem::operator/(const TowerElem& o) const { return *this * o.inverse(); }

TowerElem TowerElem::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  TowerElem r = constant(T_, 1, kExactPrec);
  TowerElem b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

TowerElem TowerElem::frobenius_q(int prec_cap) const {
  const auto& R = T_->residue();
  long q = T_->fq()->q();
  TowerElem r;
  r.T_ = T_;
  long prec_l = std::min(long(prec_) * q, long(prec_cap));
  r.prec_ = int(prec_l);
  if (c_.empty()) {
    r.off_ = r.prec_;
    return r;
  }
  long off_l = long(off_) * q;
  if (off_l >= prec_l) {
    r.off_ = r.prec_;
    return r;
  }
  r.off_ = int(off_l);
  long len = std::min(prec_l - off_l, (long(c_.size()) - 1) * q + 1);
  r.c_.assign(size_t(len), 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    long slot = long(i) * q;
    if (slot >= long(r.c_.size())) break;
    r.c_[size_t(slot)] = R->pow(c_[i], q);
  }
  r.normalize();
  return r;
}

TowerElem TowerElem::scaled_res(code_t c) const {
  const auto& R = T_->residue();
  if (c == 0) return zero(T_, prec_);
  TowerElem r = *this;
  for (auto& x : r.c_) x = R->mul(x, c);
  return r;
}

TowerElem TowerElem::truncated(int prec) const {
  if (prec > prec_) throw std::invalid_argument("cannot raise tower precision by truncation");
  TowerElem r;
  r.T_ = T_;
  r.prec_ = prec;
  if (c_.empty() || off_ >= prec) {
    r.off_ = prec;
    return r;
  }
  r.off_ = off_;
  size_t keep = std::min(c_.size(), size_t(prec - off_));
  r.c_.assign(c_.begin(), c_.begin() + long(keep));
  r.normalize();
  return r;
}

bool TowerElem::congruent_mod(const TowerElem& o, int k) const {
  TowerElem d = *this - o;
  if (d.prec_ < k) throw std::invalid_argument("tower congruence beyond available precision");
  return d.val_or(d.prec_) >= k;
}

bool TowerElem::operator==(const TowerElem& o) const {
  return T_ == o.T_ && off_ == o.off_ && prec_ == o.prec_ && c_ == o.c_;
}

std::string TowerElem::to_string() const {
  std::string u = T_ ? T_->uniformizer_name() : "u";
  if (c_.empty()) return "O(" + u + "^" + std::to_string(prec_) + ")";
  std::string s = u + "^" + std::to_string(off_) + "*(";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  s += ")+O(" + u + "^" + std::to_string(prec_) + ")";
  return s;
}

std::optional<int> diff_valuation(const TowerElem& a, const TowerElem& b) {
  TowerElem d = a - b;
  if (d.is_zero_at_precision()) return std::nullopt;
  return d.valuation();
}

// ---------------------------------------------------------------------------
// Tower construction

namespace {

TowerElem lift_theta(const TowerRef& T) {
  // theta is the Hensel root of v(X) = v seeded at its residue-field image;
  // v is separable, so the derivative is a unit at the seed.
  const Poly& v = T->v();
  int prec = T->work_prec();
  std::vector<TowerElem> f;
  f.reserve(size_t(v.degree()) + 1);
  for (int j = 0; j <= v.degree(); ++j)
    f.push_back(TowerElem::constant(T, T->residue()->from_base(v.coeff(j)), kExactPrec));
  f[0] = f[0] - T->v_image(prec + 2);
  TowerElem seed = TowerElem::constant(T, T->theta_residue(), prec);
  return hensel_lift(f, seed, prec);
}

}  // namespace

TowerRef Tower::make_unramified(FqRef F, Poly v, int m, int work_prec) {
  if (!is_irreducible(v)) throw std::invalid_argument("tower: v must be irreducible");
  auto T = std::shared_ptr<Tower>(new Tower());
  T->fq_ = std::move(F);
  T->v_ = std::move(v);
  T->m_ = m;
  T->ramified_ = false;
  T->ram_e_ = 1;
  T->work_prec_ = work_prec;
  if (m == 1) {
    T->res_ = ExtField::make(T->fq_, T->v_);
    T->theta_res_ = T->res_->from_poly(Poly::theta(T->fq_));
  } else {
    T->res_ = ExtField::make_default(T->fq_, T->v_.degree() * m);
    auto roots = T->res_->roots_of(T->v_);
    if (roots.empty()) throw std::logic_error("tower: residue field has no root of v");
    T->theta_res_ = roots.front();
  }
  T->theta_lift_ = lift_theta(T);
  return T;
}

TowerRef Tower::make_ramified(FqRef F, Poly v, int work_prec) {
  if (!is_irreducible(v)) throw std::invalid_argument("tower: v must be irreducible");
  auto T = std::shared_ptr<Tower>(new Tower());
  T->fq_ = std::move(F);
  T->v_ = std::move(v);
  T->m_ = 1;
  T->ramified_ = true;
  long e = 1;
  for (int i = 0; i < T->v_.degree(); ++i) e *= T->fq_->q();
  T->ram_e_ = int(e - 1);
  if (T->ram_e_ < 1) T->ram_e_ = 1;  // q^d = 2: w = -v
  T->work_prec_ = work_prec;
  T->res_ = ExtField::make(T->fq_, T->v_);
  T->theta_res_ = T->res_->from_poly(Poly::theta(T->fq_));
  T->theta_lift_ = lift_theta(T);
  return T;
}

TowerElem Tower::v_image(int prec) const {
  auto self = shared_from_this();
  if (!ramified_) return TowerElem::uniformizer_pow(self, 1, prec);
  // w^{q^d - 1} = -v, so v = -w^{q^d - 1}
  return TowerElem::from_coeffs(self, ram_e_, {res_->neg(1)}, prec);
}

TowerElem Tower::embed_poly(const Poly& f, int prec) const {
  auto self = shared_from_this();
  if (!same_field(f.field(), fq_)) throw std::invalid_argument("embed_poly: wrong base field");
  if (prec > work_prec_) throw std::invalid_argument("embed_poly: beyond tower work precision");
  TowerElem acc = TowerElem::zero(self, kExactPrec);
  const TowerElem theta = theta_lift_;
  for (int i = f.degree(); i >= 0; --i) {
    acc = acc * theta + TowerElem::constant(self, res_->from_base(f.coeff(i)), kExactPrec);
  }
  if (acc.precision() > prec) acc = acc.truncated(prec);
  return acc;
}

TowerElem Tower::embed_local(const LocalElem& x) const {
  const ComponentRef& c = x.component();
  if (c->is_integer() || !(c->v() == v_) || !same_field(c->fq(), fq_))
    throw std::invalid_argument("embed_local: component does not match the tower");
  int uprec = x.precision() * c->e() * ram_e_;
  uprec = std::min(uprec, work_prec_);
  return embed_poly(x.avalue(), uprec);
}

TowerElem Tower::embed_ratfunc(const RatFunc& x, int prec) const {
  if ((x.den() % v_).is_zero())
    throw std::invalid_argument("embed_ratfunc: denominator not a unit at v");
  TowerElem n = embed_poly(x.num(), prec);
  TowerElem d = embed_poly(x.den(), prec);
  return n / d;
}

// ---------------------------------------------------------------------------

TowerElem teichmuller_lift(const TowerRef& T, code_t z, int N) {
  int card_exp = T->residue_degree() * T->v().degree();  // |residue| = q^{dm}
  TowerElem x = TowerElem::constant(T, z, N);
  for (int iter = 0; iter <= N + 2; ++iter) {
    TowerElem y = x;
    for (int i = 0; i < card_exp; ++i) y = y.frobenius_q(N);
    if (y.congruent_mod(x, std::min(N, y.precision()))) return x;
    x = y;
  }
  throw std::logic_error("teichmuller lift did not stabilize");
}

TowerElem eval_poly_elem(const std::vector<TowerElem>& f, const TowerElem& x) {
  TowerElem acc = TowerElem::zero(x.tower(), kExactPrec);
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

std::vector<TowerElem> poly_derivative(const std::vector<TowerElem>& f) {
  std::vector<TowerElem> d;
  if (f.size() <= 1) return d;
  const TowerRef& T = f[0].tower();
  const auto& R = T->residue();
  for (size_t k = 1; k < f.size(); ++k) {
    code_t kc = R->from_base(T->fq()->from_int(long(k)));
    d.push_back(f[k].scaled_res(kc));
  }
  return d;
}

TowerElem hensel_lift(const std::vector<TowerElem>& f, const TowerElem& x0, int N) {
  if (f.empty()) throw std::invalid_argument("hensel: empty polynomial");
  std::vector<TowerElem> fp = poly_derivative(f);
  TowerElem x = x0;
  TowerElem fx = eval_poly_elem(f, x);
  if (fx.is_zero_at_precision() && fx.precision() >= N)
    return x;  // already a root at target precision
  TowerElem fpx = eval_poly_elem(fp, x);
  int a = fx.val_or(fx.precision());
  int b = fpx.val_or(fpx.precision());
  if (fpx.is_zero_at_precision() || !(a > 2 * b))
    throw std::domain_error("Newton hypothesis violated: ord f(x0) = " + std::to_string(a) +
                            ", ord f'(x0) = " + std::to_string(b));
  int max_iter = 2;
  while ((1 << max_iter) < N + 2) ++max_iter;
  max_iter += 6;
  for (int iter = 0; iter < max_iter; ++iter) {
    x = x - fx / fpx;
    if (x.precision() > N + b + 4) x = x.truncated(N + b + 4);
    fx = eval_poly_elem(f, x);
    if (fx.val_or(fx.precision()) >= N && fx.precision() >= N) {
      // the iterate satisfies f(x) = 0 mod u^N; it approximates the unique
      // root of the ball mod u^{N-b}
      return x.truncated(std::min(x.precision(), N));
    }
    fpx = eval_poly_elem(fp, x);
  }
  throw std::runtime_error("hensel: no convergence to target precision " + std::to_string(N) +
                           " (ord f = " + std::to_string(fx.val_or(fx.precision())) + ")");
}

LocalElem extract_local(const TowerElem& x, const ComponentRef& av, int N) {
  const TowerRef& T = x.tower();
  if (T->ramified() || T->residue_degree() != 1)
    throw std::invalid_argument("extract_local: tower must be unramified with residue field A/v");
  if (av->is_integer() || !(av->v() == T->v()) || av->e() != 1)
    throw std::invalid_argument("extract_local: component mismatch");
  if (x.precision() < N) throw std::invalid_argument("extract_local: insufficient precision");
  if (x.val_or(x.precision()) < 0) throw std::invalid_argument("extract_local: not integral");
  const auto& R = T->residue();
  TowerElem cur = x;
  Poly value = Poly::zero(av->fq());
  Poly place = Poly::one(av->fq());
  TowerElem ushift = TowerElem::uniformizer_pow(T, -1, kExactPrec);
  for (int i = 0; i < N; ++i) {
    Poly digit = R->to_poly(cur.coeff(0));
    value = value + digit * place;
    place = place * av->v();
    cur = (cur - T->embed_poly(digit, cur.precision())) * ushift;
  }
  return LocalElem::from_value(av, value, N);
}

}  // namespace gkt
