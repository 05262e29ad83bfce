#include "gkt/uniqueness.hpp"

#include <stdexcept>

namespace gkt {

ProofParams ProofParams::defaults(ProductSpaceRef S) {
  ProofParams P;
  P.b_idx.assign(S->arity(), 0);
  P.S = std::move(S);
  P.validate();
  return P;
}

void ProofParams::validate() const {
  if (b_idx.size() != S->arity()) throw std::invalid_argument("b: one digit per component");
  for (size_t t = 0; t < b_idx.size(); ++t) {
    const ComponentRef& c = S->component(t);
    if (b_idx[t] < 0 || b_idx[t] >= c->residue_count())
      throw std::invalid_argument("b: digit index out of range");
    // canonical integer components additionally need 0 <= b < pi - 1 so that
    // the all-b string stays inside the stated condition set
    if (c->is_integer() && c->canonical_digits() && b_idx[t] == c->residue_count() - 1)
      throw std::invalid_argument("b: must satisfy 0 <= b < pi - 1");
  }
}

FracTuple ProofParams::fixed_point() const {
  std::vector<FracElem> parts;
  for (size_t t = 0; t < S->arity(); ++t) {
    const ComponentRef& c = S->component(t);
    if (c->is_integer()) {
      mpq_class val(c->zrep(b_idx[t]), 1 - c->pi_z());
      val.canonicalize();
      parts.push_back(FracElem::make(c, val));
    } else {
      parts.push_back(
          FracElem::make(c, RatFunc(c->arep(b_idx[t]), Poly::one(c->fq()) - c->pi_a())));
    }
  }
  return FracTuple(S, std::move(parts));
}

namespace {

// element with the given periodic digit-index block
LocalElem from_periodic_block(const ComponentRef& c, const std::vector<long>& block,
                              int prec) {
  if (c->is_integer()) {
    mpz_class value = 0, place = 1;
    for (int i = 0; i < prec; ++i) {
      value += c->zrep(block[size_t(i) % block.size()]) * place;
      place *= c->pi_z();
    }
    return LocalElem::from_value(c, value, prec);
  }
  Poly value = Poly::zero(c->fq());
  Poly place = Poly::one(c->fq());
  for (int i = 0; i < prec; ++i) {
    value = value + c->arep(block[size_t(i) % block.size()]) * place;
    place = place * c->pi_a();
  }
  return LocalElem::from_value(c, value, prec);
}

ProdElem periodic_from_blocks(const ProofParams& P, const ProdElem& x, int n, int head,
                              int out_prec) {
  // block = [b x (n-1), x_0 .. x_{head-1}]
  std::vector<LocalElem> parts;
  for (size_t t = 0; t < P.S->arity(); ++t) {
    std::vector<long> block;
    block.reserve(size_t(n - 1 + head));
    for (int i = 0; i < n - 1; ++i) block.push_back(P.b_idx[t]);
    LocalElem cur = x.part(t);
    for (int i = 0; i < head; ++i) {
      block.push_back(cur.digit_index(0));
      cur = cur.phi();
    }
    parts.push_back(from_periodic_block(P.S->component(t), block, out_prec));
  }
  return ProdElem(P.S, std::move(parts));
}

}  // namespace

ProdElem alpha_n(const ProdElem& x, int n, const ProofParams& P, int out_prec) {
  if (n < 1) throw std::invalid_argument("alpha_n: n >= 1");
  if (x.precision() < n) throw std::invalid_argument("alpha_n: x needs precision >= n");
  return periodic_from_blocks(P, x, n, n, out_prec);
}

ProdElem beta_n(const ProdElem& x, int n, const ProofParams& P, int out_prec) {
  if (n < 2) throw std::invalid_argument("beta_n: n >= 2");
  if (x.precision() < n - 1) throw std::invalid_argument("beta_n: x needs precision >= n-1");
  return periodic_from_blocks(P, x, n, n - 1, out_prec);
}

KValue G_n(const StepFn& F, const ProdElem& x, int n, const ProofParams& P) {
  if (n == 1) return KValue::one(F.K());
  if (n < 1) throw std::invalid_argument("G_n: n >= 1");
  ProdElem beta = beta_n(x, n, P, (n - 2) + F.level() + 1);
  KValue prod = KValue::one(F.K());
  ProdElem cur = beta;
  for (int i = 0; i <= n - 2; ++i) {
    prod = prod * F.eval(cur);
    if (i < n - 2) cur = cur.phi();
  }
  return prod.inverse();
}

std::pair<KValue, KValue> A_n_B_n(const StepFn& F, const ProdElem& x, int n,
                                  const ProofParams& P) {
  if (n < 2) throw std::invalid_argument("A_n/B_n: n >= 2");
  int lvl = F.level();
  ProdElem alpha = alpha_n(x, n, P, (2 * n - 2) + lvl + 1);
  ProdElem beta = beta_n(x, n, P, (n - 2) + lvl + 1);
  ProdElem beta_phi = beta_n(x.phi(), n, P, (2 * n - 3) + lvl + 1);

  std::vector<KValue> Fa;  // F(phi^(i) alpha), i = 0..2n-2
  {
    ProdElem cur = alpha;
    for (int i = 0; i <= 2 * n - 2; ++i) {
      Fa.push_back(F.eval(cur));
      if (i < 2 * n - 2) cur = cur.phi();
    }
  }
  KValue A = KValue::one(F.K());
  {
    ProdElem cur = beta;
    for (int i = 0; i <= n - 2; ++i) {
      A = A * F.eval(cur) / Fa[size_t(i)];
      if (i < n - 2) cur = cur.phi();
    }
  }
  KValue B = KValue::one(F.K());
  {
    ProdElem cur = beta_phi;
    for (int i = 0; i <= 2 * n - 3; ++i) {
      if (i >= n - 1) B = B * F.eval(cur);
      if (i < 2 * n - 3) cur = cur.phi();
    }
    for (int i = n; i <= 2 * n - 2; ++i) B = B / Fa[size_t(i)];
  }
  return {A, B};
}

bool fabg_exact(const StepFn& F, const ProdElem& x, int n, const ProofParams& P) {
  ProdElem alpha = alpha_n(x, n, P, (2 * n - 2) + F.level() + 1);
  ProdElem cur = alpha;
  for (int i = 0; i < n - 1; ++i) cur = cur.phi();
  KValue lhs = F.eval(cur);
  auto [A, B] = A_n_B_n(F, x, n, P);
  KValue rhs = A * B * G_n(F, x, n, P) / G_n(F, x.phi(), n, P);
  return lhs == rhs;
}

StepFn build_H(const StepFn& Gamma, const StepFn& G) {
  if (!same_space(Gamma.domain(), G.domain()) || !same_valued_field(Gamma.K(), G.K()))
    throw std::invalid_argument("build_H: Gamma and G must share domain and value field");
  int level = std::max(std::max(Gamma.level(), G.level() + 1), 1);
  long n = ProdElem::residue_class_count(Gamma.domain(), level);
  if (n < 0) throw std::invalid_argument("build_H: level too large");
  std::vector<KValue> tab;
  tab.reserve(size_t(n));
  for (long key = 0; key < n; ++key) {
    ProdElem x = ProdElem::from_residue_key(Gamma.domain(), level, key);
    tab.push_back(Gamma.eval(x) * G.eval(x) / G.eval(x.neg_phi_neg()));
  }
  return StepFn(Gamma.domain(), level, Gamma.K(), std::move(tab));
}

ProductIdentityReport check_product_identity(const StepFn& H, const StepFn& Gamma, int n,
                                             bool section3_points, std::uint64_t cap) {
  if (!same_space(H.domain(), Gamma.domain()))
    throw std::invalid_argument("check_product_identity: domain mismatch");
  PeriodicOptions opt;
  opt.form = PeriodicForm::MinusFixed;
  opt.restrict_abs = !section3_points;
  opt.cap = cap;
  // The fractional-part formulation is specific to canonical digits on the
  // stated condition set; the generalized pipeline states the identity via
  // shift orbits only.
  const bool use_frac_form = !section3_points && H.domain()->all_canonical();
  ProductIdentityReport rep;
  for (const FracTuple& x : periodic_points(H.domain(), n, opt)) {
    KValue g2 = KValue::one(Gamma.K()), h2 = g2;
    for (const FracTuple& y : phi_orbit(-x, n)) {
      g2 = g2 * Gamma.eval(-y);
      h2 = h2 * H.eval(-y);
    }
    bool pass = (g2 == h2);
    if (use_frac_form) {
      KValue g1 = KValue::one(Gamma.K()), h1 = g1;
      for (int j = 0; j < n; ++j) {
        FracTuple pt = x.mul_pi(j).frac_part();
        g1 = g1 * Gamma.eval(pt);
        h1 = h1 * H.eval(pt);
      }
      rep.forms_agree = rep.forms_agree && (g1 == g2) && (h1 == h2);
      pass = pass && (g1 == h1);
    }
    rep.all_pass = rep.all_pass && pass;
    rep.points.push_back({x.to_string(), pass});
  }
  return rep;
}

namespace {

void cocycle_scan(const StepFn& F, const ProofParams& P, const RecoverOptions& opt) {
  PeriodicOptions popt;
  popt.form = PeriodicForm::PlainFixed;
  popt.restrict_abs = !opt.section3_points;
  popt.cap = opt.point_cap;
  for (int n = 1; n <= opt.scan_nmax; ++n) {
    for (const FracTuple& x : periodic_points(F.domain(), n, popt)) {
      KValue prod = KValue::one(F.K());
      for (const FracTuple& y : phi_orbit(x, n)) prod = prod * F.eval(y);
      if (!(prod == KValue::one(F.K())))
        throw std::domain_error("cocycle precondition fails at periodic point " +
                                x.to_string() + " (period " + std::to_string(n) + ")");
    }
  }
  // the all-b fixed point is covered by n = 1, including F(b/(1-pi)) = 1
  KValue at_b = F.eval(P.fixed_point());
  if (!(at_b == KValue::one(F.K())))
    throw std::domain_error("cocycle precondition fails at b/(1-pi)");
}

StepFn materialize_G_n(const StepFn& F, int n, const ProofParams& P,
                       const RecoverOptions& opt) {
  int level = n - 1;
  long count = ProdElem::residue_class_count(F.domain(), level);
  if (count < 0 || std::uint64_t(count) > opt.point_cap)
    throw std::runtime_error("recover_G: G_n table at level " + std::to_string(level) +
                             " exceeds the enumeration cap");
  std::vector<KValue> tab;
  tab.reserve(size_t(count));
  for (long key = 0; key < count; ++key) {
    ProdElem x = ProdElem::from_residue_key(F.domain(), level, key);
    tab.push_back(G_n(F, x, n, P));
  }
  return StepFn(F.domain(), level, F.K(), std::move(tab));
}

std::string trace_string(const std::vector<std::optional<long>>& trace) {
  std::string s;
  for (size_t k = 0; k < trace.size(); ++k) {
    if (k) s += ", ";
    s += "n=" + std::to_string(k + 2) + ":";
    s += trace[k] ? std::to_string(*trace[k]) : std::string("exact");
  }
  return s;
}

}  // namespace

RecoverResult recover_G(const StepFn& F, const ProofParams& P, const RecoverOptions& opt) {
  if (!same_space(F.domain(), P.S)) throw std::invalid_argument("recover_G: domain mismatch");
  P.validate();
  cocycle_scan(F, P, opt);

  const int m = F.level();
  const int n_cap = m + int(opt.r) + opt.iter_slack;
  RecoverResult out;
  StepFn Gn = materialize_G_n(F, 2, P, opt);
  int stable = 0;
  for (int n = 2;; ++n) {
    if (n > n_cap)
      throw std::runtime_error("recover_G: no convergence by n = " + std::to_string(n_cap) +
                               " (trace: " + trace_string(out.trace) + ")");
    StepFn Gn1 = materialize_G_n(F, n + 1, P, opt);
    // sup-distance over residues at level n
    long count = ProdElem::residue_class_count(F.domain(), n);
    std::optional<long> diff;  // nullopt = exact everywhere so far
    bool any_finite = false;
    long margin = 0;
    for (long key = 0; key < count; ++key) {
      ProdElem x = ProdElem::from_residue_key(F.domain(), n, key);
      KValue a = Gn.eval(x), b = Gn1.eval(x);
      margin = std::max(margin, -std::min(a.ord_or(0), b.ord_or(0)));
      KValue d = a - b;
      if (!d.is_zero_at_precision()) {
        any_finite = true;
        diff = diff ? std::min(*diff, *d.ord()) : *d.ord();
      }
    }
    if (!any_finite) diff = std::nullopt;
    out.trace.push_back(diff);
    long threshold = opt.r + std::max(long(0), margin);
    bool ok = !diff || *diff >= threshold;
    stable = ok ? stable + 1 : 0;
    Gn = std::move(Gn1);
    if (stable >= opt.confirm) {
      out.stop_n = n + 1;
      break;
    }
  }
  out.G = Gn;

  // residual of the functional equation F(x) = G(x)/G(phi(x))
  int L = out.G.level() + 1;
  long count = ProdElem::residue_class_count(F.domain(), L);
  std::optional<long> residual;
  for (long key = 0; key < count; ++key) {
    ProdElem x = ProdElem::from_residue_key(F.domain(), L, key);
    KValue d = F.eval(x) * out.G.eval(x.phi()) - out.G.eval(x);
    if (!d.is_zero_at_precision())
      residual = residual ? std::min(*residual, *d.ord()) : *d.ord();
  }
  out.residual = residual;
  return out;
}

RecoverResult recover_G_minus_form(const StepFn& F, const ProofParams& P,
                                   const RecoverOptions& opt) {
  RecoverResult inner = recover_G(F.negated_arg(), P, opt);
  RecoverResult out;
  out.trace = inner.trace;
  out.stop_n = inner.stop_n;
  out.G = inner.G.negated_arg();

  // residual against F(x) = G(x)/G(-phi(-x))
  int L = out.G.level() + 1;
  long count = ProdElem::residue_class_count(F.domain(), L);
  std::optional<long> residual;
  for (long key = 0; key < count; ++key) {
    ProdElem x = ProdElem::from_residue_key(F.domain(), L, key);
    KValue d = F.eval(x) * out.G.eval(x.neg_phi_neg()) - out.G.eval(x);
    if (!d.is_zero_at_precision())
      residual = residual ? std::min(*residual, *d.ord()) : *d.ord();
  }
  out.residual = residual;
  return out;
}

}  // namespace gkt
