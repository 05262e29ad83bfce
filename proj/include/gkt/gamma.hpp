#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "gkt/local.hpp"

namespace gkt {

// Truncation evidence for the interpolating products: the engine multiplies
// degree factors until `window` consecutive ones are trivial mod v^{N+guard},
// then stops and records what it saw.
struct GammaCert {
  int stop_index = 0;
  int guard = 0;
  int window = 0;
  int min_tail_val = 0;
  std::vector<int> factor_vals;  // ord_v(factor_i - 1), capped at N + guard
};

struct GammaValue {
  LocalElem value;  // unit of A_v mod v^N
  GammaCert cert;
};

struct GammaOptions {
  int guard = 2;
  int window = 3;
  int max_index = 0;  // 0: max(64, d*(N+guard+window) + 8)
};

// v-adic gamma functions at a fixed place v of A = F_q[theta].
//
// Degree-i factors are assembled from the additive polynomials
//   f_j(Y) = prod_{deg b < j} (Y + v b),
// which satisfy f_{j+1}(Y) = f_j(Y)^q - f_j(v theta^j)^{q-1} f_j(Y); the
// product of (x + a) over monic a of degree j+d with fixed residue r of
// a mod v is then f_j(x + r) + f_j(v theta^j).  Everything is computed in
// A/v^{N+guard}; tables are cached per modulus.
class GammaEngine {
 public:
  struct ModCtx;  // cached per-modulus recursion tables

  GammaEngine(FqRef F, Poly v);

  const FqRef& field() const { return F_; }
  const Poly& v() const { return v_; }
  int d() const { return d_; }
  const ComponentRef& av() const { return av_; }  // A_v, pi = v
  const ComponentRef& zq() const { return zq_; }  // Z_p, pi = q (digit domain)

  // Gamma(arg) with arg the mathematical argument ("y+1"); digits of
  // y = arg - 1 drive the exponents.
  GammaValue ari(const LocalElem& arg, int N, const GammaOptions& opt = {}) const;
  GammaValue geo(const LocalElem& x, int N, const GammaOptions& opt = {}) const;
  GammaValue two(const LocalElem& x, const LocalElem& arg2, int N,
                 const GammaOptions& opt = {}) const;

  // Conveniences taking exact arguments; digit precision is chosen
  // internally.
  GammaValue ari_q(const mpq_class& arg, int N, const GammaOptions& opt = {}) const;
  GammaValue geo_q(const RatFunc& x, int N, const GammaOptions& opt = {}) const;
  GammaValue two_q(const RatFunc& x, const mpq_class& arg2, int N,
                   const GammaOptions& opt = {}) const;

  // Brute-force oracle: the degree-i factor over all q^i monic polynomials.
  Poly factor_by_enumeration(int i, const Poly& x_or_zero, int M, bool base_only) const;

 private:
  std::shared_ptr<const ModCtx> ctx(int M, int jmax) const;
  int auto_max_index(int M, const GammaOptions& opt) const;

  FqRef F_;
  Poly v_;
  int d_ = 0;
  ComponentRef av_;
  ComponentRef zq_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const ModCtx>> cache_;
};

// x^flat: x for units, 1 on vA_v; needs at least one digit of precision.
LocalElem flat(const LocalElem& x);

// Carlitz factorial Gamma^ari(y+1) as an exact polynomial.
Poly carlitz_factorial(const FqRef& F, unsigned long y);

// ord_f Gamma^ari(y+1) = sum_{e>=1} floor(y / q^{e deg f}), f monic
// irreducible.
long sinnott_valuation(const FqRef& F, unsigned long y, const Poly& f);

struct GeoGlobalResult {
  bool pole = false;
  RatFunc value;       // truncated product, exact
  int trunc_degree = 0;
  int tail_log_abs = 0;  // log_q bound on |remaining tail - 1|
};

// Global geometric gamma (1/x) prod_{a monic} a/(x+a), truncated at degree I.
GeoGlobalResult gamma_geo_global(const RatFunc& x, int trunc_degree);

// Morita's Gamma_p on Z_p (p odd) by direct interpolation from the smallest
// representative n >= 1 of x mod p^N.
LocalElem morita_gamma_p(const LocalElem& x, int N, unsigned long cap = (1ul << 22));

}  // namespace gkt
