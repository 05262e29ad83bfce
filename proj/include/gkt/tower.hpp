#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkt/extfield.hpp"
#include "gkt/local.hpp"

namespace gkt {

class Tower;
using TowerRef = std::shared_ptr<const Tower>;

// Truncated Laurent series over the tower's residue field: u^off * (c_0 +
// c_1 u + ...), known mod u^prec.  Normalized so that the leading stored
// coefficient is nonzero; an all-unknown element has empty coefficients.
class TowerElem {
 public:
  TowerElem() = default;
  static TowerElem zero(TowerRef T, int prec);
  static TowerElem from_coeffs(TowerRef T, int offset, std::vector<code_t> coeffs, int prec);
  static TowerElem constant(TowerRef T, code_t c, int prec);
  static TowerElem uniformizer_pow(TowerRef T, int k, int prec);

  const TowerRef& tower() const { return T_; }
  int precision() const { return prec_; }
  bool is_zero_at_precision() const { return c_.empty(); }
  std::optional<int> valuation() const;
  int val_or(int dflt) const { return c_.empty() ? dflt : off_; }
  code_t coeff(int k) const;  // coefficient of u^k, k < prec

  TowerElem operator+(const TowerElem& o) const;
  TowerElem operator-(const TowerElem& o) const;
  TowerElem operator-() const;
  TowerElem operator*(const TowerElem& o) const;
  TowerElem operator/(const TowerElem& o) const;
  TowerElem inverse() const;
  TowerElem pow(long n) const;
  // q-power Frobenius; exact in characteristic p, precision multiplied by q
  // then capped.
  TowerElem frobenius_q(int prec_cap) const;
  // multiply every coefficient by a residue-field constant
  TowerElem scaled_res(code_t c) const;

  TowerElem truncated(int prec) const;
  bool congruent_mod(const TowerElem& o, int k) const;
  bool operator==(const TowerElem& o) const;

  std::string to_string() const;

 private:
  void normalize();
  TowerRef T_;
  int off_ = 0;
  std::vector<code_t> c_;
  int prec_ = 0;
};

// ord(a - b); nullopt when the difference vanishes at the joint precision.
std::optional<int> diff_valuation(const TowerElem& a, const TowerElem& b);

// Local-field extension of k_v in equal characteristic, realized as formal
// series over its residue field:
//   unramified of residue degree m over A/v:  F_{q^{dm}}((v))
//   totally ramified by w with w^{q^d-1} = -v: F_{q^d}((w))
// The image of theta is pinned by Hensel from the chosen root of v in the
// residue field, so A_v embeds canonically.
class Tower : public std::enable_shared_from_this<Tower> {
 public:
  static TowerRef make_unramified(FqRef F, Poly v, int m, int work_prec);
  static TowerRef make_ramified(FqRef F, Poly v, int work_prec);

  const FqRef& fq() const { return fq_; }
  const Poly& v() const { return v_; }
  int d() const { return v_.degree(); }
  int residue_degree() const { return m_; }  // over A/v
  const ExtFieldRef& residue() const { return res_; }
  bool ramified() const { return ramified_; }
  int ram_index() const { return ram_e_; }  // ord_u(v)
  int work_prec() const { return work_prec_; }
  code_t theta_residue() const { return theta_res_; }
  const TowerElem& theta_lift() const { return theta_lift_; }
  std::string uniformizer_name() const { return ramified_ ? "w" : "v"; }

  TowerElem v_image(int prec) const;
  TowerElem embed_poly(const Poly& f, int prec) const;
  // A_v component element; precision converts via ord_u(v).
  TowerElem embed_local(const LocalElem& x) const;
  TowerElem embed_ratfunc(const RatFunc& x, int prec) const;  // v-unit denominator

 private:
  Tower() = default;
  FqRef fq_;
  Poly v_;
  int m_ = 1;
  ExtFieldRef res_;
  bool ramified_ = false;
  int ram_e_ = 1;
  int work_prec_ = 0;
  code_t theta_res_ = 0;
  TowerElem theta_lift_;
};

// Teichmuller lift: the unique root of X^{|residue|} = X reducing to z;
// in this representation it is the constant series, found by iterated
// powering until stable.
TowerElem teichmuller_lift(const TowerRef& T, code_t z, int N);

// Newton iteration on a dense polynomial with tower coefficients; requires
// |f(x0)| < |f'(x0)|^2 and refines until f(x) = 0 mod u^N.
TowerElem hensel_lift(const std::vector<TowerElem>& f, const TowerElem& x0, int N);

TowerElem eval_poly_elem(const std::vector<TowerElem>& f, const TowerElem& x);
std::vector<TowerElem> poly_derivative(const std::vector<TowerElem>& f);

// Inverse of embed_local for towers whose residue field is A/v itself:
// peel canonical digits off a v-integral element.
LocalElem extract_local(const TowerElem& x, const ComponentRef& av, int N);

}  // namespace gkt
