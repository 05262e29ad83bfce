#include "gkt/carlitz.hpp"

#include <stdexcept>

namespace gkt {

code_t carlitz_action_field(const ExtFieldRef& FP, code_t theta_img, const Poly& a, code_t x) {
  if (a.is_zero()) return 0;
  const FqRef& F = a.field();
  code_t acc = FP->mul(FP->from_base(a.coeff(0)), x);
  code_t y = x;
  for (int j = 1; j <= a.degree(); ++j) {
    y = FP->add(FP->mul(theta_img, y), FP->pow(y, F->q()));
    acc = FP->add(acc, FP->mul(FP->from_base(a.coeff(j)), y));
  }
  return acc;
}

TowerElem carlitz_action_tower(const Poly& a, const TowerElem& x, int prec_cap) {
  const TowerRef& T = x.tower();
  const auto& R = T->residue();
  TowerElem acc = x.scaled_res(R->from_base(a.coeff(0)));
  TowerElem y = x;
  const TowerElem& theta = T->theta_lift();
  for (int j = 1; j <= a.degree(); ++j) {
    y = theta * y + y.frobenius_q(prec_cap);
    if (y.precision() > prec_cap) y = y.truncated(prec_cap);
    acc = acc + y.scaled_res(R->from_base(a.coeff(j)));
  }
  return acc;
}

RatFunc carlitz_action_ratfunc(const Poly& a, const RatFunc& x) {
  const FqRef& F = a.field();
  auto qpow = [&](const RatFunc& r) {
    return RatFunc(r.num().pow(F->q()), r.den().pow(F->q()));
  };
  RatFunc acc = x * RatFunc(Poly::constant(F, a.coeff(0)));
  RatFunc y = x;
  for (int j = 1; j <= a.degree(); ++j) {
    y = RatFunc(Poly::theta(F)) * y + qpow(y);
    acc = acc + y * RatFunc(Poly::constant(F, a.coeff(j)));
  }
  return acc;
}

LocalElem carlitz_action_local(const Poly& a, const LocalElem& x) {
  const ComponentRef& c = x.component();
  if (c->is_integer()) throw std::invalid_argument("carlitz action needs an F_q-algebra");
  const FqRef& F = c->fq();
  int prec = x.precision();
  auto qpow = [&](const LocalElem& r) {
    LocalElem out = LocalElem::one(c, prec);
    for (long k = 0; k < F->q(); ++k) out = out * r;
    return out;
  };
  LocalElem theta = LocalElem::from_value(c, Poly::theta(F), prec);
  LocalElem acc = x * LocalElem::from_value(c, Poly::constant(F, a.coeff(0)), prec);
  LocalElem y = x;
  for (int j = 1; j <= a.degree(); ++j) {
    y = theta * y + qpow(y);
    acc = acc + y * LocalElem::from_value(c, Poly::constant(F, a.coeff(j)), prec);
  }
  return acc;
}

std::vector<TowerElem> carlitz_qpoly_tower(const TowerRef& T, const Poly& a, int prec) {
  const auto& R = T->residue();
  long q = T->fq()->q();
  int n = a.degree();
  // u[j][m]: coefficient of X^{q^m} in C_{theta^j}
  std::vector<std::vector<TowerElem>> u(size_t(n) + 1);
  u[0] = {TowerElem::constant(T, 1, prec)};
  const TowerElem& theta = T->theta_lift();
  for (int j = 1; j <= n; ++j) {
    u[size_t(j)].assign(size_t(j) + 1, TowerElem::zero(T, prec));
    for (int m = 0; m <= j; ++m) {
      TowerElem t = TowerElem::zero(T, prec);
      if (m <= j - 1) t = theta * u[size_t(j - 1)][size_t(m)];
      if (m >= 1) t = t + u[size_t(j - 1)][size_t(m - 1)].frobenius_q(prec);
      if (t.precision() > prec) t = t.truncated(prec);
      u[size_t(j)][size_t(m)] = t;
    }
  }
  long deg = 1;
  for (int m = 0; m < n; ++m) deg *= q;
  std::vector<TowerElem> dense(size_t(deg) + 1, TowerElem::zero(T, prec));
  long qm = 1;
  for (int m = 0; m <= n; ++m) {
    TowerElem cm = TowerElem::zero(T, prec);
    for (int j = m; j <= n; ++j)
      if (a.coeff(j) != 0) cm = cm + u[size_t(j)][size_t(m)].scaled_res(R->from_base(a.coeff(j)));
    dense[size_t(qm)] = cm;
    if (m < n) qm *= q;
  }
  return dense;
}

// ---------------------------------------------------------------------------
// context construction

namespace {

// psi(1): the root of C_v(X)/X congruent to -w mod w^2.  The Eisenstein
// polynomial has ord f'(root) = q^d - 2, so the textbook Newton hypothesis
// can fail right at the seed; guarded steps make strict progress until it
// holds, then the standard lift takes over.
TowerElem compute_psi1(const TowerRef& ram, const Poly& v, int work) {
  std::vector<TowerElem> f = carlitz_qpoly_tower(ram, v, work + 4);
  f.erase(f.begin());  // divide by X
  std::vector<TowerElem> fp = poly_derivative(f);
  TowerElem x = -TowerElem::uniformizer_pow(ram, 1, work);
  for (int guard = 0; guard < 64; ++guard) {
    TowerElem fx = eval_poly_elem(f, x);
    if (fx.is_zero_at_precision() && fx.precision() >= work) return x.truncated(work);
    TowerElem fpx = eval_poly_elem(fp, x);
    int a = fx.val_or(fx.precision());
    int b = fpx.val_or(fpx.precision());
    if (a > 2 * b) {
      TowerElem root = hensel_lift(f, x, std::min(work + b, x.precision() + b));
      return root.truncated(std::min(root.precision(), work));
    }
    TowerElem next = x - fx / fpx;
    TowerElem fnext = eval_poly_elem(f, next);
    if (!fnext.is_zero_at_precision() && fnext.val_or(fnext.precision()) <= a)
      throw std::logic_error("psi(1) seed refinement stalled");
    x = next;
  }
  throw std::logic_error("psi(1) did not converge");
}

}  // namespace

CarlitzContext::CarlitzContext(FqRef F, Poly v, int ell, int N)
    : F_(std::move(F)), v_(std::move(v)), d_(v_.degree()), ell_(ell), N_(N),
      gamma_(F_, v_) {
  if (ell_ < 1) throw std::invalid_argument("carlitz context: ell must be >= 1");
  n1_ = v_.pow(ell_) - Poly::one(F_);
  Pcard_ = 1;
  for (long i = 0; i < dl(); ++i) {
    Pcard_ *= F_->q();
    if (Pcard_ > 65536) throw std::invalid_argument("carlitz context: residue field too large");
  }

  long qd = 1;
  for (int i = 0; i < d_; ++i) qd *= F_->q();
  int ram_e = int(qd - 1);
  if (ram_e < 1) ram_e = 1;
  ram_work_ = N_ + ram_e + 10;
  unram_work_ = N_ + 10;

  ram_ = Tower::make_ramified(F_, v_, ram_work_);
  unram_ = Tower::make_unramified(F_, v_, ell_, unram_work_);

  psi1_ = compute_psi1(ram_, v_, ram_work_);
  // normalization pin: varpi = w is congruent to -psi(1) mod psi(1)^2
  if ((psi1_ + TowerElem::uniformizer_pow(ram_, 1, psi1_.precision())).val_or(psi1_.precision()) <
      2)
    throw std::logic_error("psi(1) normalization failed");

  long res_count = qd;
  psi_.reserve(size_t(res_count));
  psi_.push_back(TowerElem::zero(ram_, ram_work_));
  auto reps = enumerate_below_degree(F_, d_);
  for (long z = 1; z < res_count; ++z)
    psi_.push_back(carlitz_action_tower(reps[size_t(z)], psi1_, ram_work_));

  // (v^ell - 1)-torsion over the unramified tower; the derivative of
  // C_{v^ell - 1} is the unit v^ell - 1, so every residue lifts at once.
  std::vector<TowerElem> cpoly = carlitz_qpoly_tower(unram_, n1_, unram_work_);
  omega_.reserve(size_t(Pcard_));
  for (long z = 0; z < Pcard_; ++z) {
    TowerElem start = teichmuller_lift(unram_, code_t(z), unram_work_);
    omega_.push_back(hensel_lift(cpoly, start, unram_work_));
  }

  const auto& R = ram_->residue();
  g_ari_conj_.reserve(size_t(dl()));
  for (long s = 0; s < dl(); ++s) {
    TowerElem acc = TowerElem::zero(ram_, ram_work_);
    for (long z = 1; z < res_count; ++z) {
      Poly zinv = residue_inverse(reps[size_t(z)]);
      code_t chi = R->frobenius_iter(R->from_poly(zinv), int(s));
      acc = acc + psi_[size_t(z)].scaled_res(chi);
    }
    g_ari_conj_.push_back(-acc);
  }
}

const TowerElem& CarlitzContext::psi(long residue_code) const {
  return psi_.at(size_t(residue_code));
}

TowerElem CarlitzContext::varpi(int prec) const {
  return TowerElem::uniformizer_pow(ram_, 1, prec);
}

code_t CarlitzContext::chi_teich(const Poly& z) const {
  return ram_->residue()->from_poly(z % v_);
}

Poly CarlitzContext::residue_inverse(const Poly& z) const {
  Poly zr = z % v_;
  if (zr.is_zero()) throw std::domain_error("inverse of zero residue class");
  auto [g, s, t] = xgcd(zr, v_);
  (void)t;
  if (!g.is_one()) throw std::logic_error("residue inverse failed");
  return s % v_;
}

const TowerElem& CarlitzContext::gauss_ari_conj(int s) const {
  return g_ari_conj_.at(size_t(s));
}

const TowerElem& CarlitzContext::omega(code_t z) const { return omega_.at(size_t(z)); }

void CarlitzContext::validate_y(const mpq_class& y) const {
  if (y < 0 || y >= 1)
    throw std::invalid_argument("y must satisfy 0 <= y < 1");
  mpq_class scaled = y * mpq_class(Pcard_ - 1);
  scaled.canonicalize();
  if (scaled.get_den() != 1)
    throw std::invalid_argument("y must have denominator q^{d ell} - 1");
}

void CarlitzContext::validate_x(const RatFunc& x) const {
  if (!x.is_zero() && x.abs_degree() >= 0) throw std::invalid_argument("|x| must be < 1");
  RatFunc scaled = x * RatFunc(n1_);
  if (!scaled.is_integral())
    throw std::invalid_argument("x must have denominator v^ell - 1");
}

std::vector<long> CarlitzContext::y_digits(const mpq_class& y) const {
  validate_y(y);
  mpq_class scaled = y * mpq_class(Pcard_ - 1);
  scaled.canonicalize();
  mpz_class m = scaled.get_num();
  std::vector<long> out(size_t(dl()), 0);
  for (long s = 0; s < dl(); ++s) {
    mpz_class r = m % F_->q();
    out[size_t(s)] = r.get_si();
    m /= F_->q();
  }
  return out;
}

std::vector<Poly> CarlitzContext::x_digits(const RatFunc& x) const {
  validate_x(x);
  Poly m = (x * RatFunc(n1_)).num();
  if ((x * RatFunc(n1_)).den() != Poly::one(F_)) throw std::logic_error("x digit extraction");
  std::vector<Poly> out;
  out.reserve(size_t(ell_));
  for (int j = 0; j < ell_; ++j) {
    auto [q, r] = m.divmod(v_);
    out.push_back(r);
    m = q;
  }
  return out;
}

TowerElem CarlitzContext::big_G_ari(const mpq_class& y) const {
  auto yd = y_digits(y);
  TowerElem acc = TowerElem::constant(ram_, 1, ram_work_);
  for (long s = 0; s < dl(); ++s)
    for (long k = 0; k < yd[size_t(s)]; ++k) acc = acc * g_ari_conj_[size_t(s)];
  if ((long(ell_) * (d_ - 1)) % 2 != 0) acc = -acc;
  return acc;
}

TowerElem CarlitzContext::gauss_geo_conj(const RatFunc& x, int s) const {
  validate_x(x);
  Poly ax = (x * RatFunc(n1_)).num();
  const auto& FP = unram_->residue();
  TowerElem acc = TowerElem::constant(unram_, 1, unram_work_);
  for (long z = 1; z < Pcard_; ++z) {
    code_t zinv = FP->inv(code_t(z));
    code_t w = carlitz_action_field(FP, unram_->theta_residue(), ax, zinv);
    code_t psi_z = FP->frobenius_iter(code_t(z), s);
    acc = acc + omega_[size_t(w)].scaled_res(psi_z);
  }
  return acc;
}

TowerElem CarlitzContext::big_G_geo(const RatFunc& x, const mpq_class& y) const {
  auto yd = y_digits(y);
  TowerElem acc = TowerElem::constant(unram_, 1, unram_work_);
  for (long s = 0; s < dl(); ++s) {
    if (yd[size_t(s)] == 0) continue;
    TowerElem g = gauss_geo_conj(x, int(s));
    for (long k = 0; k < yd[size_t(s)]; ++k) acc = acc * g;
  }
  return acc;
}

TowerElem CarlitzContext::big_G_geo_default(const RatFunc& x) const {
  // all-ones conjugate product; this is the stated meaning of the default
  // exponent 1/(q-1) and needs no digit decomposition even for q = 2
  TowerElem acc = TowerElem::constant(unram_, 1, unram_work_);
  for (long s = 0; s < dl(); ++s) acc = acc * gauss_geo_conj(x, int(s));
  return acc;
}

RatFunc CarlitzContext::delta_factor(const RatFunc& x, int j) const {
  auto xd = x_digits(x);
  if (!xd.at(size_t(j)).is_monic()) return RatFunc::one(F_);
  RatFunc shifted = x * RatFunc(v_.pow(ell_ - j - 1));
  return RatFunc(v_) * shifted.frac_part();
}

std::vector<mpq_class> CarlitzContext::admissible_y() const {
  std::vector<mpq_class> out;
  for (long m = 0; m + 1 < Pcard_; ++m) {
    mpq_class y(m, Pcard_ - 1);
    y.canonicalize();
    out.push_back(y);
  }
  return out;
}

std::vector<RatFunc> CarlitzContext::admissible_x() const {
  std::vector<RatFunc> out;
  for (const Poly& m : enumerate_below_degree(F_, int(dl()))) out.push_back(RatFunc(m, n1_));
  return out;
}

GaussSum gauss_ari(const CarlitzContext& ctx) {
  GaussSum g;
  g.kind = "ari";
  g.value = ctx.gauss_ari_conj(0);
  for (long s = 0; s < ctx.dl(); ++s) g.conjugates.push_back(ctx.gauss_ari_conj(int(s)));
  return g;
}

GaussSum gauss_geo(const CarlitzContext& ctx, const RatFunc& x) {
  GaussSum g;
  g.kind = "geo";
  g.x = x;
  g.value = ctx.gauss_geo_conj(x, 0);
  for (long s = 0; s < ctx.dl(); ++s) g.conjugates.push_back(ctx.gauss_geo_conj(x, int(s)));
  return g;
}

TorsionTables torsion_module_structure(const CarlitzContext& ctx) {
  TorsionTables t;
  auto reps = enumerate_below_degree(ctx.field(), ctx.d());
  for (long z = 0; z < long(reps.size()); ++z)
    t.psi.emplace_back(reps[size_t(z)].to_human_string(), ctx.psi(z).to_string());
  for (long z = 0; z < ctx.P_card(); ++z)
    t.omega.emplace_back(code_t(z), ctx.omega(code_t(z)).to_string());
  return t;
}

// ---------------------------------------------------------------------------
// verifiers

namespace {

mpq_class frac_scaled_pow(const mpq_class& y, long base, long exp) {
  mpz_class b = 1;
  for (long i = 0; i < exp; ++i) b *= base;
  return frac_part(mpq_class(b) * y);
}

void fill_diff(GktReport& rep, const TowerElem& lhs, const TowerElem& rhs, int N) {
  TowerElem diff = lhs - rhs;
  rep.lhs = lhs.to_string();
  rep.rhs = rhs.to_string();
  if (diff.precision() < N) throw std::logic_error("verifier lost precision below target");
  if (diff.is_zero_at_precision()) {
    rep.exact_at_precision = true;
    rep.diff_valuation = diff.precision();
  } else {
    rep.diff_valuation = *diff.valuation();
  }
  rep.pass = rep.diff_valuation >= N;
}

GktReport base_report(const CarlitzContext& ctx, const char* kind, int N) {
  GktReport rep;
  rep.kind = kind;
  rep.q = ctx.field()->q();
  rep.v = ctx.v().to_human_string();
  rep.d = ctx.d();
  rep.ell = ctx.ell();
  rep.N = N;
  return rep;
}

bool near_miss(const GktReport& rep, int N) {
  return !rep.pass && rep.diff_valuation >= N - 2;
}

}  // namespace

GktReport verify_gkt_ari(const CarlitzContext& ctx, const mpq_class& y, int N) {
  GktReport rep = base_report(ctx, "ari", N);
  rep.y = mpq_to_string(y);
  ctx.validate_y(y);

  TowerElem lhs = ctx.big_G_ari(y);

  long qd = 1;
  for (int i = 0; i < ctx.d(); ++i) qd *= ctx.field()->q();
  int ram_e = std::max(1, int(qd - 1));
  // varpi exponent (q^d - 1) sum_j <q^{dj} y> must be a non-negative integer
  mpq_class esum = 0;
  std::vector<mpq_class> fracs;
  for (int j = 0; j < ctx.ell(); ++j) {
    fracs.push_back(frac_scaled_pow(y, qd, j));
    esum += fracs.back();
  }
  mpq_class eq = esum * (qd - 1);
  eq.canonicalize();
  if (eq.get_den() != 1 || eq < 0)
    throw std::logic_error("varpi exponent is not a non-negative integer");

  int Nv = (N + ram_e - 1) / ram_e;  // v-adic digits per w-adic target
  TowerElem rhs = ctx.varpi(ctx.ram_work()).pow(eq.get_num().get_si());
  for (const mpq_class& f : fracs) {
    GammaValue g = ctx.gamma().ari_q(f, Nv);
    rhs = rhs * ctx.ram()->embed_local(g.value);
  }

  fill_diff(rep, lhs, rhs, N);
  if (near_miss(rep, N)) {
    CarlitzContext fine(ctx.field(), ctx.v(), ctx.ell(), 2 * N);
    GktReport rep2 = verify_gkt_ari(fine, y, 2 * N);
    rep2.N = N;
    rep2.pass = rep2.diff_valuation >= N;
    rep2.retried = true;
    return rep2;
  }
  return rep;
}

namespace {

// <v^j x>^flat as an exact rational: 1 when the fractional part lies in
// vA_v, the fractional part itself otherwise.
RatFunc frac_and_flat(const RatFunc& x, const Poly& v, int j, RatFunc* frac_out) {
  RatFunc fr = (x * RatFunc(v.pow(j))).frac_part();
  if (frac_out) *frac_out = fr;
  if (fr.is_zero() || (fr.num() % v).is_zero()) return RatFunc::one(v.field());
  return fr;
}

}  // namespace

GktReport verify_gkt_geo(const CarlitzContext& ctx, const RatFunc& x, int N) {
  GktReport rep = base_report(ctx, "geo", N);
  rep.x = x.to_string();
  ctx.validate_x(x);

  TowerElem lhs = ctx.big_G_geo_default(x);

  int W = ctx.unram_work();
  TowerElem rhs = TowerElem::constant(ctx.unram(), 1, W);
  for (int j = 0; j < ctx.ell(); ++j) {
    RatFunc frj;
    RatFunc flat = frac_and_flat(x, ctx.v(), j, &frj);
    RatFunc delta = ctx.delta_factor(x, j);
    rhs = rhs * ctx.unram()->embed_ratfunc(delta, W) / ctx.unram()->embed_ratfunc(flat, W);
    GammaValue g = ctx.gamma().geo_q(frj, N);
    rhs = rhs * ctx.unram()->embed_local(g.value.inverse());
  }

  fill_diff(rep, lhs, rhs, N);
  if (near_miss(rep, N)) {
    CarlitzContext fine(ctx.field(), ctx.v(), ctx.ell(), 2 * N);
    GktReport rep2 = verify_gkt_geo(fine, x, 2 * N);
    rep2.N = N;
    rep2.pass = rep2.diff_valuation >= N;
    rep2.retried = true;
    return rep2;
  }
  return rep;
}

GktReport verify_gkt_two(const CarlitzContext& ctx, const RatFunc& x, const mpq_class& y,
                         int N) {
  GktReport rep = base_report(ctx, "two", N);
  rep.x = x.to_string();
  rep.y = mpq_to_string(y);
  ctx.validate_x(x);
  ctx.validate_y(y);

  TowerElem lhs = ctx.big_G_geo(x, y);

  long qd = 1;
  for (int i = 0; i < ctx.d(); ++i) qd *= ctx.field()->q();
  auto yd = ctx.y_digits(y);
  auto xd = ctx.x_digits(x);

  int W = ctx.unram_work();
  TowerElem rhs = ctx.big_G_geo_default(x).pow(ctx.field()->q() - 1);
  for (int j = 0; j < ctx.ell(); ++j) {
    RatFunc frj;
    RatFunc flat = frac_and_flat(x, ctx.v(), j, &frj);
    rhs = rhs * ctx.unram()->embed_ratfunc(flat, W);
    if (xd[size_t(j)].is_monic()) {
      // the delta exponent consumes the digit y_{dj + deg x_j}; for
      // non-monic digits delta = 1 and no index is consumed
      long idx = long(ctx.d()) * j + xd[size_t(j)].degree();
      long expo = ctx.field()->q() - 1 - yd[size_t(idx)];
      RatFunc delta = ctx.delta_factor(x, j);
      rhs = rhs / ctx.unram()->embed_ratfunc(delta, W).pow(expo);
    }
    GammaValue g = ctx.gamma().two_q(frj, frac_scaled_pow(y, qd, j), N);
    rhs = rhs * ctx.unram()->embed_local(g.value);
  }

  fill_diff(rep, lhs, rhs, N);
  if (near_miss(rep, N)) {
    CarlitzContext fine(ctx.field(), ctx.v(), ctx.ell(), 2 * N);
    GktReport rep2 = verify_gkt_two(fine, x, y, 2 * N);
    rep2.N = N;
    rep2.pass = rep2.diff_valuation >= N;
    rep2.retried = true;
    return rep2;
  }
  return rep;
}

}  // namespace gkt
