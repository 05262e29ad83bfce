#pragma once

#include "gkt/gamma.hpp"
#include "gkt/tower.hpp"

namespace gkt {

// Carlitz action C_a, extended F_q-linearly and multiplicatively from
// C_theta(x) = theta x + x^q, on the various coefficient structures.
code_t carlitz_action_field(const ExtFieldRef& FP, code_t theta_img, const Poly& a, code_t x);
TowerElem carlitz_action_tower(const Poly& a, const TowerElem& x, int prec_cap);
RatFunc carlitz_action_ratfunc(const Poly& a, const RatFunc& x);
LocalElem carlitz_action_local(const Poly& a, const LocalElem& x);
// Dense coefficients of the q-polynomial C_a(X) over a tower.
std::vector<TowerElem> carlitz_qpoly_tower(const TowerRef& T, const Poly& a, int prec);

// Everything the Gauss-sum identities need at one (q, v, ell):
//  - the ramified tower L = k_v(psi(1)) housing arithmetic Gauss sums, with
//    w^{q^d-1} = -v, psi(1) the torsion root congruent to -w, varpi = w;
//  - the unramified tower L' with residue field F_P of q^{d ell} elements
//    housing the (v^ell - 1)-torsion and geometric Gauss sums.
class CarlitzContext {
 public:
  CarlitzContext(FqRef F, Poly v, int ell, int N);

  const FqRef& field() const { return F_; }
  const Poly& v() const { return v_; }
  int d() const { return d_; }
  int ell() const { return ell_; }
  int N() const { return N_; }
  const Poly& n_minus_1() const { return n1_; }
  long dl() const { return long(d_) * ell_; }
  long P_card() const { return Pcard_; }  // |F_P| = q^{d ell}
  const GammaEngine& gamma() const { return gamma_; }
  const TowerRef& ram() const { return ram_; }
  const TowerRef& unram() const { return unram_; }
  int ram_work() const { return ram_work_; }
  int unram_work() const { return unram_work_; }

  // arithmetic side
  const TowerElem& psi1() const { return psi1_; }
  const TowerElem& psi(long residue_code) const;  // C_z(psi(1))
  TowerElem varpi(int prec) const;
  code_t chi_teich(const Poly& z) const;        // A/v -> F_{q^d}
  Poly residue_inverse(const Poly& z) const;    // z^{-1} mod v; z != 0 mod v
  const TowerElem& gauss_ari_conj(int s) const;
  TowerElem big_G_ari(const mpq_class& y) const;

  // geometric side
  const TowerElem& omega(code_t z) const;  // the (v^ell - 1)-torsion lift
  code_t theta_in_FP() const { return unram_->theta_residue(); }
  TowerElem gauss_geo_conj(const RatFunc& x, int s) const;
  TowerElem big_G_geo(const RatFunc& x, const mpq_class& y) const;
  TowerElem big_G_geo_default(const RatFunc& x) const;
  RatFunc delta_factor(const RatFunc& x, int j) const;

  // digit decompositions of admissible parameters
  std::vector<long> y_digits(const mpq_class& y) const;  // y = sum y_s q^s/(q^{dl}-1)
  std::vector<Poly> x_digits(const RatFunc& x) const;    // x = sum x_j v^j/(v^l-1)
  void validate_y(const mpq_class& y) const;
  void validate_x(const RatFunc& x) const;

  std::vector<mpq_class> admissible_y() const;
  std::vector<RatFunc> admissible_x() const;

 private:
  FqRef F_;
  Poly v_;
  int d_, ell_, N_;
  Poly n1_;
  long Pcard_ = 0;
  GammaEngine gamma_;
  TowerRef ram_, unram_;
  int ram_work_ = 0, unram_work_ = 0;
  TowerElem psi1_;
  std::vector<TowerElem> psi_;           // by residue code of A/v
  std::vector<TowerElem> omega_;         // by code of F_P
  std::vector<TowerElem> g_ari_conj_;    // s = 0..dl-1
};

struct GaussSum {
  std::string kind;  // "ari" | "geo"
  RatFunc x;         // geo only
  TowerElem value;
  std::vector<TowerElem> conjugates;
};

GaussSum gauss_ari(const CarlitzContext& ctx);
GaussSum gauss_geo(const CarlitzContext& ctx, const RatFunc& x);

struct TorsionTables {
  // arithmetic: residue rep of A/v -> psi(z); geometric: code of F_P ->
  // omega(z)
  std::vector<std::pair<std::string, std::string>> psi;
  std::vector<std::pair<code_t, std::string>> omega;
};
TorsionTables torsion_module_structure(const CarlitzContext& ctx);

struct GktReport {
  std::string kind;
  long q = 0;
  std::string v;
  int d = 0, ell = 0;
  std::string x, y;
  int N = 0;
  std::string lhs, rhs;
  int diff_valuation = 0;       // capped at the joint precision
  bool exact_at_precision = false;
  bool pass = false;
  bool retried = false;
};

// Both sides of the identity at precision N; near misses (valuation within
// [N-2, N)) are retried once at 2N to separate truncation artifacts from
// genuine failures.
GktReport verify_gkt_ari(const CarlitzContext& ctx, const mpq_class& y, int N);
GktReport verify_gkt_geo(const CarlitzContext& ctx, const RatFunc& x, int N);
GktReport verify_gkt_two(const CarlitzContext& ctx, const RatFunc& x, const mpq_class& y, int N);

}  // namespace gkt
