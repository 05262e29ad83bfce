#include "gkt/gamma.hpp"

#include <stdexcept>

namespace gkt {

namespace {

int capped_valuation(const Poly& f, const Poly& v, int cap) {
  if (f.is_zero()) return cap;
  int val = 0;
  Poly cur = f;
  while (val < cap) {
    auto [q, r] = cur.divmod(v);
    if (!r.is_zero()) return val;
    ++val;
    cur = q;
    if (cur.is_zero()) return cap;
  }
  return cap;
}

}  // namespace

struct GammaEngine::ModCtx {
  int M = 0;
  int jmax = 0;
  Poly vM;
  std::vector<Poly> H;    // H_j = f_j(v theta^j)
  std::vector<Poly> Hq;   // H_j^{q-1}
  std::vector<std::vector<Poly>> fr;  // fr[r][j] = f_j(rep_r), r = residue code mod v
};

GammaEngine::GammaEngine(FqRef F, Poly v) : F_(std::move(F)), v_(std::move(v)) {
  d_ = v_.degree();
  av_ = Component::polynomial(F_, v_);
  zq_ = Component::integer(F_->p(), F_->e());
}

int GammaEngine::auto_max_index(int M, const GammaOptions& opt) const {
  if (opt.max_index > 0) return opt.max_index;
  return std::max(64, d_ * (M + opt.window) + 8);
}

std::shared_ptr<const GammaEngine::ModCtx> GammaEngine::ctx(int M, int jmax) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(M);
  if (it != cache_.end() && it->second->jmax >= jmax) return it->second;

  auto c = std::make_shared<ModCtx>();
  c->M = M;
  c->jmax = jmax;
  c->vM = v_.pow(M);
  long q = F_->q();
  auto redm = [&](const Poly& f) { return f.degree() >= c->vM.degree() ? f % c->vM : f; };
  auto mulm = [&](const Poly& a, const Poly& b) { return redm(a * b); };
  auto powq = [&](const Poly& a) {
    Poly r = a;
    for (long k = 1; k < q; ++k) r = mulm(r, a);
    return r;
  };

  long res_count = 1;
  for (int i = 0; i < d_; ++i) res_count *= q;

  // g[s] = f_j(v theta^s), evolved in j; residues evolve alongside.
  std::vector<Poly> g;
  g.reserve(size_t(jmax) + 1);
  for (int s = 0; s <= jmax; ++s) g.push_back(redm(v_ * Poly::monomial(F_, 1, s)));
  c->fr.assign(size_t(res_count), {});
  auto reps = enumerate_below_degree(F_, d_);
  for (long r = 0; r < res_count; ++r) {
    c->fr[size_t(r)].reserve(size_t(jmax) + 1);
    c->fr[size_t(r)].push_back(reps[size_t(r)]);
  }
  c->H.reserve(size_t(jmax) + 1);
  c->Hq.reserve(size_t(jmax) + 1);
  for (int j = 0; j <= jmax; ++j) {
    c->H.push_back(g[size_t(j)]);
    Poly hq = Poly::one(F_);
    for (long k = 0; k + 1 < q; ++k) hq = mulm(hq, c->H.back());
    c->Hq.push_back(hq);
    if (j == jmax) break;
    for (int s = j + 1; s <= jmax; ++s) g[size_t(s)] = powq(g[size_t(s)]) - mulm(c->Hq[size_t(j)], g[size_t(s)]);
    for (long r = 0; r < res_count; ++r) {
      Poly t = c->fr[size_t(r)].back();
      c->fr[size_t(r)].push_back(powq(t) - mulm(c->Hq[size_t(j)], t));
    }
  }

  cache_[M] = c;
  return c;
}

Poly GammaEngine::factor_by_enumeration(int i, const Poly& x_or_zero, int M,
                                        bool base_only) const {
  Poly vM = v_.pow(M);
  Poly acc = Poly::one(F_);
  for (const Poly& a : enumerate_monic(F_, i)) {
    Poly w = base_only ? a : x_or_zero + a;
    if ((w % v_).is_zero()) continue;  // flat sends non-units to 1
    acc = (acc * (w % vM)) % vM;
  }
  return acc;
}

namespace {

struct ProductLoop {
  // shared state for one gamma evaluation
  const GammaEngine::ModCtx* ctx;
  const FqRef* F;
  const Poly* v;
  int d;
  int M;
  Poly vM;
  long q;

  Poly redm(const Poly& f) const { return f.degree() >= vM.degree() ? f % vM : f; }
  Poly mulm(const Poly& a, const Poly& b) const { return redm(a * b); }
  Poly powq(const Poly& a) const {
    Poly r = a;
    for (long k = 1; k < q; ++k) r = mulm(r, a);
    return r;
  }
  Poly inv(const Poly& a) const {
    auto [g, s, t] = xgcd(a, vM);
    (void)t;
    if (!g.is_one()) throw std::logic_error("gamma: non-unit inversion");
    return redm(s);
  }
};

}  // namespace

// The three interpolating products share one loop shape; `mode` selects the
// factor and whether digit exponents are consumed.
GammaValue GammaEngine::ari(const LocalElem& arg, int N, const GammaOptions& opt) const {
  if (!(arg.component()->is_integer() && arg.component()->canonical_digits() &&
        arg.component()->pi_z() == F_->q()))
    throw std::invalid_argument("gamma_v_ari: argument must live in Z_p with pi = q");
  const int M = N + opt.guard;
  const int Imax = auto_max_index(M, opt);
  auto c = ctx(M, std::max(0, Imax - d_));
  ProductLoop L{c.get(), &F_, &v_, d_, M, c->vM, F_->q()};

  LocalElem y = arg - LocalElem::one(arg.component(), arg.precision());
  Poly acc = Poly::one(F_);
  GammaCert cert{0, opt.guard, opt.window, M, {}};
  int consecutive = 0;
  for (int i = 0;; ++i) {
    if (i > Imax)
      throw std::runtime_error("gamma_v_ari: product did not stabilize by index " +
                               std::to_string(Imax));
    Poly base;
    if (i < d_) {
      base = factor_by_enumeration(i, Poly::zero(F_), M, true);
    } else {
      base = Poly::one(F_);
      for (long r = 1; r < long(c->fr.size()); ++r)
        base = L.mulm(base, c->fr[size_t(r)][size_t(i - d_)] + c->H[size_t(i - d_)]);
    }
    Poly factor = -base;  // the paper-normalized base (-prod a^flat)
    int fv = capped_valuation(factor - Poly::one(F_), v_, M);
    cert.factor_vals.push_back(fv);
    if (fv < M) {
      consecutive = 0;
      if (i >= y.precision())
        throw std::domain_error("gamma_v_ari: argument precision insufficient; need at least " +
                                std::to_string(i + 1) + " base-q digits of y");
      long yi = y.digit_index(i);
      for (long k = 0; k < yi; ++k) acc = L.mulm(acc, factor);
    } else {
      ++consecutive;
      if (consecutive >= opt.window) {
        cert.stop_index = i;
        break;
      }
    }
  }
  for (size_t k = cert.factor_vals.size() - size_t(opt.window); k < cert.factor_vals.size(); ++k)
    cert.min_tail_val = std::min(cert.min_tail_val, cert.factor_vals[k]);
  LocalElem value = LocalElem::from_value(av_, acc, N);
  if (!value.is_unit()) throw std::logic_error("gamma_v_ari: non-unit value");
  return {value, cert};
}

namespace {

GammaValue geo_like(const GammaEngine& E, const GammaEngine::ModCtx& c, const Poly& vpoly,
                    const FqRef& F, const ComponentRef& av, const LocalElem& x,
                    const LocalElem* y_digits, int N, const GammaOptions& opt, int Imax) {
  const int M = N + opt.guard;
  ProductLoop L{&c, &F, &vpoly, vpoly.degree(), M, c.vM, F->q()};
  const int d = vpoly.degree();

  if (x.precision() < M)
    throw std::domain_error("gamma_v_geo/two: x needs precision >= N + guard = " +
                            std::to_string(M));
  Poly xv = x.avalue() % c.vM;

  // residue code of -x mod v picks the class of non-unit translates
  auto residue_code = [&](const Poly& f) {
    Poly r = f % vpoly;
    long code = 0;
    for (int i = d - 1; i >= 0; --i) code = code * F->q() + r.coeff(i);
    return code;
  };
  long r0 = residue_code(-xv);

  Poly num = Poly::one(F);  // product of base factors
  Poly den = residue_code(xv) != 0 ? xv : Poly::one(F);  // x^flat
  std::vector<Poly> tx{xv};                              // f_j(x)
  GammaCert cert{0, opt.guard, opt.window, M, {}};
  int consecutive = 0;
  for (int i = 0;; ++i) {
    if (i > Imax)
      throw std::runtime_error("gamma product did not stabilize by index " + std::to_string(Imax));
    Poly base, xf;
    if (i < d) {
      base = E.factor_by_enumeration(i, Poly::zero(F), M, true);
      xf = E.factor_by_enumeration(i, xv, M, false);
    } else {
      int j = i - d;
      while (int(tx.size()) <= j)
        tx.push_back(L.powq(tx.back()) - L.mulm(c.Hq[tx.size() - 1], tx.back()));
      base = Poly::one(F);
      xf = Poly::one(F);
      for (long r = 0; r < long(c.fr.size()); ++r) {
        const Poly& frj = c.fr[size_t(r)][size_t(j)];
        if (r != 0) base = L.mulm(base, frj + c.H[size_t(j)]);
        if (r != r0) xf = L.mulm(xf, tx[size_t(j)] + frj + c.H[size_t(j)]);
      }
    }
    int fv = capped_valuation(base - xf, vpoly, M);  // ord(T_i - 1), T_i = base/xf
    cert.factor_vals.push_back(fv);
    if (fv < M) {
      consecutive = 0;
      long yi = 1;
      if (y_digits) {
        if (i >= y_digits->precision())
          throw std::domain_error(
              "gamma_v_two: second argument precision insufficient; need at least " +
              std::to_string(i + 1) + " base-q digits of y");
        yi = y_digits->digit_index(i);
      }
      for (long k = 0; k < yi; ++k) {
        num = L.mulm(num, base);
        den = L.mulm(den, xf);
      }
    } else {
      ++consecutive;
      if (consecutive >= opt.window) {
        cert.stop_index = i;
        break;
      }
    }
  }
  for (size_t k = cert.factor_vals.size() - size_t(opt.window); k < cert.factor_vals.size(); ++k)
    cert.min_tail_val = std::min(cert.min_tail_val, cert.factor_vals[k]);
  Poly result = L.mulm(num, L.inv(den));
  LocalElem value = LocalElem::from_value(av, result, N);
  if (!value.is_unit()) throw std::logic_error("gamma_v_geo/two: non-unit value");
  return {value, cert};
}

}  // namespace

GammaValue GammaEngine::geo(const LocalElem& x, int N, const GammaOptions& opt) const {
  if (!same_component(x.component(), av_))
    throw std::invalid_argument("gamma_v_geo: x must live in A_v");
  const int M = N + opt.guard;
  const int Imax = auto_max_index(M, opt);
  auto c = ctx(M, std::max(0, Imax - d_));
  return geo_like(*this, *c, v_, F_, av_, x, nullptr, N, opt, Imax);
}

GammaValue GammaEngine::two(const LocalElem& x, const LocalElem& arg2, int N,
                            const GammaOptions& opt) const {
  if (!same_component(x.component(), av_))
    throw std::invalid_argument("gamma_v_two: x must live in A_v");
  if (!(arg2.component()->is_integer() && arg2.component()->canonical_digits() &&
        arg2.component()->pi_z() == F_->q()))
    throw std::invalid_argument("gamma_v_two: second argument must live in Z_p with pi = q");
  const int M = N + opt.guard;
  const int Imax = auto_max_index(M, opt);
  auto c = ctx(M, std::max(0, Imax - d_));
  LocalElem y = arg2 - LocalElem::one(arg2.component(), arg2.precision());
  return geo_like(*this, *c, v_, F_, av_, x, &y, N, opt, Imax);
}

GammaValue GammaEngine::ari_q(const mpq_class& arg, int N, const GammaOptions& opt) const {
  int P = auto_max_index(N + opt.guard, opt) + 2;
  return ari(FracElem::make(zq_, arg).digits_of(P), N, opt);
}

GammaValue GammaEngine::geo_q(const RatFunc& x, int N, const GammaOptions& opt) const {
  return geo(FracElem::make(av_, x).digits_of(N + opt.guard), N, opt);
}

GammaValue GammaEngine::two_q(const RatFunc& x, const mpq_class& arg2, int N,
                              const GammaOptions& opt) const {
  int P = auto_max_index(N + opt.guard, opt) + 2;
  return two(FracElem::make(av_, x).digits_of(N + opt.guard),
             FracElem::make(zq_, arg2).digits_of(P), N, opt);
}

LocalElem flat(const LocalElem& x) {
  if (x.precision() < 1) throw std::domain_error("flat: unit-ness undecidable at precision 0");
  if (x.component()->is_integer()) throw std::invalid_argument("flat: A_v elements only");
  return x.is_unit() ? x : LocalElem::one(x.component(), x.precision());
}

Poly carlitz_factorial(const FqRef& F, unsigned long y) {
  Poly result = Poly::one(F);
  unsigned long q = static_cast<unsigned long>(F->q());
  int i = 0;
  while (y > 0) {
    unsigned long yi = y % q;
    y /= q;
    if (yi > 0) {
      Poly Di = Poly::one(F);
      for (const Poly& a : enumerate_monic(F, i)) Di = Di * a;
      for (unsigned long k = 0; k < yi; ++k) result = result * Di;
    }
    ++i;
  }
  return result;
}

long sinnott_valuation(const FqRef& F, unsigned long y, const Poly& f) {
  if (f.degree() < 1 || !is_irreducible(f))
    throw std::invalid_argument("sinnott_valuation: f must be irreducible");
  long total = 0;
  unsigned long q = static_cast<unsigned long>(F->q());
  unsigned long qd = 1;
  for (int k = 0; k < f.degree(); ++k) qd *= q;
  unsigned long pow = qd;
  while (pow <= y) {
    total += long(y / pow);
    if (pow > y / qd) break;  // next power exceeds y
    pow *= qd;
  }
  return total;
}

GeoGlobalResult gamma_geo_global(const RatFunc& x, int trunc_degree) {
  const FqRef& F = x.field();
  GeoGlobalResult out;
  out.trunc_degree = trunc_degree;
  if (x.is_zero()) {
    out.pole = true;
    return out;
  }
  if (x.is_integral() && (-x.num()).is_monic()) {
    out.pole = true;  // x in -A_+
    return out;
  }
  long factors = 0, qpow = 1;
  for (int i = 0; i <= trunc_degree; ++i) {
    factors += qpow;
    qpow *= F->q();
    if (factors > 30000)
      throw std::invalid_argument("gamma_geo_global: truncation degree too large");
  }
  RatFunc acc = x.inverse();
  for (int i = 0; i <= trunc_degree; ++i) {
    for (const Poly& a : enumerate_monic(F, i)) {
      RatFunc fa(a);
      acc = acc * (fa / (x + fa));
    }
  }
  out.value = acc;
  out.tail_log_abs = (x.abs_degree() == Poly::kNegInfDeg ? -1000 : x.abs_degree()) -
                     (trunc_degree + 1);
  return out;
}

LocalElem morita_gamma_p(const LocalElem& x, int N, unsigned long cap) {
  const ComponentRef& c = x.component();
  if (!c->is_integer() || c->e() != 1)
    throw std::invalid_argument("morita_gamma_p: x must live in Z_p with pi = p");
  if (c->p() == 2) throw std::invalid_argument("morita_gamma_p: p = 2 unsupported");
  if (x.precision() < N) throw std::domain_error("morita_gamma_p: x needs precision >= N");
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(c->p()),
                static_cast<unsigned long>(N));
  if (mod > cap)
    throw std::invalid_argument("morita_gamma_p: p^N exceeds the enumeration cap");
  mpz_class n;
  mpz_mod(n.get_mpz_t(), x.zvalue().get_mpz_t(), mod.get_mpz_t());
  if (n == 0) n = mod;
  unsigned long nn = n.get_ui();
  mpz_class acc = (nn % 2 == 0) ? 1 : -1;  // (-1)^n
  for (unsigned long t = 1; t < nn; ++t) {
    if (t % static_cast<unsigned long>(c->p()) == 0) continue;
    acc = (acc * t) % mod;
  }
  return LocalElem::from_value(c, acc, N);
}

}  // namespace gkt
