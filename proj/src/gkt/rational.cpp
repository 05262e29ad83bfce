#include "gkt/rational.hpp"

#include <stdexcept>

namespace gkt {

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (!same_field(num_.field(), den_.field()))
    throw std::invalid_argument("rational function over mixed fields");
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::one(num_.field());
    return;
  }
  Poly g = gcd(num_, den_);
  if (!g.is_one()) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  if (!den_.is_monic()) {
    code_t u = num_.field()->inv(den_.leading_coeff());
    num_ = num_.scaled(u);
    den_ = den_.scaled(u);
  }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero rational function");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero rational function");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::frac_part() const {
  // x = s + r/den with deg r < deg den; <x> = r/den.
  auto [s, r] = num_.divmod(den_);
  (void)s;
  return RatFunc(r, den_);
}

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_human_string();
  std::string d = den_.to_human_string();
  bool wrap = d.find('+') != std::string::npos;
  return num_.to_human_string() + "/" + (wrap ? "(" + d + ")" : d);
}

RatFunc RatFunc::parse(const FqRef& F, const std::string& text) {
  size_t slash = text.find('/');
  if (slash == std::string::npos) return RatFunc(Poly::parse(F, text));
  std::string n = text.substr(0, slash), d = text.substr(slash + 1);
  auto strip = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty rational component");
    s = s.substr(b, e - b + 1);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
  };
  return RatFunc(Poly::parse(F, strip(n)), Poly::parse(F, strip(d)));
}

mpq_class frac_part(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  mpq_class r = x - mpq_class(fl);
  r.canonicalize();
  return r;
}

std::string mpq_to_string(const mpq_class& x) { return x.get_str(); }

mpq_class mpq_parse(const std::string& text) {
  mpq_class x;
  if (x.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  x.canonicalize();
  return x;
}

}  // namespace gkt
