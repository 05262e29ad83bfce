#pragma once

#include "gkt/stepfn.hpp"

namespace gkt {

// The distinguished digit b per component; the all-b string b/(1-pi) is a
// fixed point of the shift and anchors the alpha/beta constructions.
struct ProofParams {
  ProductSpaceRef S;
  std::vector<long> b_idx;  // digit-set indices

  static ProofParams defaults(ProductSpaceRef S);  // b = representative of 0
  void validate() const;
  FracTuple fixed_point() const;  // b/(1 - pi)
};

// alpha_n(x): the (2n-1)-periodic point with digit block
// [b x(n-1), x_0, ..., x_{n-1}]; beta_n(x) drops the last digit and has
// period 2n-2.  Both need x to precision >= n (resp. n-1).
ProdElem alpha_n(const ProdElem& x, int n, const ProofParams& P, int out_prec);
ProdElem beta_n(const ProdElem& x, int n, const ProofParams& P, int out_prec);

// G_n(x) = [prod_{i<=n-2} F(phi^(i)(beta_n(x)))]^{-1}; G_1 := 1.
KValue G_n(const StepFn& F, const ProdElem& x, int n, const ProofParams& P);
// The comparison quotients A_n, B_n.
std::pair<KValue, KValue> A_n_B_n(const StepFn& F, const ProdElem& x, int n,
                                  const ProofParams& P);
// Exact identity F(phi^(n-1)(alpha_n(x))) = A_n B_n G_n(x)/G_n(phi(x)).
bool fabg_exact(const StepFn& F, const ProdElem& x, int n, const ProofParams& P);

// H(x) = Gamma(x) G(x) / G(-phi(-x)), materialized one level above G.
StepFn build_H(const StepFn& Gamma, const StepFn& G);

struct PointCheck {
  std::string point;
  bool pass = false;
};
struct ProductIdentityReport {
  bool all_pass = true;
  bool forms_agree = true;  // frac-part orbit vs shift orbit formulations
  std::vector<PointCheck> points;
};
// prod_j Gamma(<pi^j x>) = prod_j H(<pi^j x>) over all periodic points of
// period n, cross-checked against the shift-orbit formulation.
ProductIdentityReport check_product_identity(const StepFn& H, const StepFn& Gamma, int n,
                                             bool section3_points,
                                             std::uint64_t cap = 1000000);

struct RecoverOptions {
  long r = 12;              // target residual valuation
  int scan_nmax = 6;        // cocycle precondition scan depth
  std::uint64_t point_cap = 1000000;
  int iter_slack = 8;       // iteration cap: level(F) + r + slack
  int confirm = 2;          // consecutive stable differences required
  bool section3_points = false;
};

struct RecoverResult {
  StepFn G;
  // trace[k] = ord(G_{k+2} - G_{k+3}); nullopt when the difference vanishes
  // at working precision
  std::vector<std::optional<long>> trace;
  int stop_n = 0;
  // min ord(F(x) G(phi(x)) - G(x)) over the checked residues; nullopt when
  // exact at working precision
  std::optional<long> residual;
};

// Constructive converse: from a cocycle F (checked on periodic points up to
// scan_nmax) to G with F = G / G o phi.
RecoverResult recover_G(const StepFn& F, const ProofParams& P, const RecoverOptions& opt = {});

// Minus-sign variant: F = G / G o (-phi o -), reduced to recover_G by the
// substitution x -> -x.
RecoverResult recover_G_minus_form(const StepFn& F, const ProofParams& P,
                                   const RecoverOptions& opt = {});

}  // namespace gkt
