#include "gkt/poly.hpp"

#include <cctype>
#include <stdexcept>

namespace gkt {

namespace {
void require_same(const FqRef& a, const FqRef& b) {
  if (!same_field(a, b)) throw std::invalid_argument("polynomials over different base fields");
}
}  // namespace

Poly::Poly(FqRef F, std::vector<code_t> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) {
  for (code_t c : c_)
    if (long(c) >= F_->q()) throw std::invalid_argument("coefficient code out of range");
  trim();
}

Poly Poly::constant(FqRef F, code_t c) {
  Poly f(std::move(F));
  if (c != 0) f.c_ = {c};
  return f;
}

Poly Poly::theta(FqRef F) { return Poly(std::move(F), {0, 1}); }

Poly Poly::monomial(FqRef F, code_t c, int k) {
  Poly f(std::move(F));
  if (c != 0) {
    f.c_.assign(size_t(k) + 1, 0);
    f.c_.back() = c;
  }
  return f;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator+(const Poly& g) const {
  require_same(F_, g.F_);
  Poly r(F_);
  r.c_.resize(std::max(c_.size(), g.c_.size()), 0);
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = F_->add(coeff(int(i)), g.coeff(int(i)));
  r.trim();
  return r;
}

Poly Poly::operator-() const {
  Poly r(F_);
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = F_->neg(c_[i]);
  return r;
}

Poly Poly::operator-(const Poly& g) const { return *this + (-g); }

Poly Poly::operator*(const Poly& g) const {
  require_same(F_, g.F_);
  if (is_zero() || g.is_zero()) return Poly(F_);
  Poly r(F_);
  r.c_.assign(c_.size() + g.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < g.c_.size(); ++j)
      r.c_[i + j] = F_->add(r.c_[i + j], F_->mul(c_[i], g.c_[j]));
  }
  r.trim();
  return r;
}

Poly Poly::scaled(code_t c) const {
  Poly r(F_);
  if (c == 0) return r;
  r.c_.resize(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = F_->mul(c_[i], c);
  r.trim();
  return r;
}

bool Poly::operator==(const Poly& g) const { return same_field(F_, g.F_) && c_ == g.c_; }

std::pair<Poly, Poly> Poly::divmod(const Poly& g) const {
  require_same(F_, g.F_);
  if (g.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly q(F_), r = *this;
  if (degree() < g.degree()) return {q, r};
  q.c_.assign(size_t(degree() - g.degree()) + 1, 0);
  code_t lead_inv = F_->inv(g.leading_coeff());
  while (!r.is_zero() && r.degree() >= g.degree()) {
    int shift = r.degree() - g.degree();
    code_t c = F_->mul(r.leading_coeff(), lead_inv);
    q.c_[size_t(shift)] = c;
    for (size_t i = 0; i < g.c_.size(); ++i)
      r.c_[size_t(shift) + i] = F_->sub(r.c_[size_t(shift) + i], F_->mul(c, g.c_[i]));
    r.trim();
  }
  q.trim();
  return {q, r};
}

Poly Poly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(F_->inv(leading_coeff()));
}

code_t Poly::eval(code_t x) const {
  code_t acc = 0;
  for (size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
  return acc;
}

Poly Poly::derivative() const {
  Poly r(F_);
  if (c_.size() <= 1) return r;
  r.c_.resize(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = F_->mul(c_[i], F_->from_int(long(i)));
  r.trim();
  return r;
}

Poly Poly::pow(long n) const {
  if (n < 0) throw std::invalid_argument("negative polynomial power");
  Poly r = one(F_), b = *this;
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = y;
    y = r;
  }
  return x.monic();
}

std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
  const FqRef& F = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::one(F), s1 = Poly::zero(F);
  Poly t0 = Poly::zero(F), t1 = Poly::one(F);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = r1;
    r1 = r;
    Poly s = s0 - q * s1, t = t0 - q * t1;
    s0 = s1;
    s1 = s;
    t0 = t1;
    t1 = t;
  }
  if (!r0.is_zero() && !r0.is_monic()) {
    code_t u = F->inv(r0.leading_coeff());
    r0 = r0.scaled(u);
    s0 = s0.scaled(u);
    t0 = t0.scaled(u);
  }
  return {r0, s0, t0};
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& a, long n, const Poly& m) {
  Poly r = Poly::one(a.field()), b = a % m;
  while (n > 0) {
    if (n & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    n >>= 1;
  }
  return r;
}

std::vector<Poly> enumerate_monic(const FqRef& F, int i) {
  if (i < 0) throw std::invalid_argument("enumerate_monic: negative degree");
  long count = 1;
  for (int k = 0; k < i; ++k) count *= F->q();
  std::vector<Poly> out;
  out.reserve(size_t(count));
  for (long c = 0; c < count; ++c) {
    std::vector<code_t> v(size_t(i) + 1, 0);
    long t = c;
    for (int k = 0; k < i; ++k) {
      v[size_t(k)] = code_t(t % F->q());
      t /= F->q();
    }
    v[size_t(i)] = 1;
    out.emplace_back(F, std::move(v));
  }
  return out;
}

std::vector<Poly> enumerate_below_degree(const FqRef& F, int n) {
  long count = 1;
  for (int k = 0; k < n; ++k) count *= F->q();
  std::vector<Poly> out;
  out.reserve(size_t(count));
  for (long c = 0; c < count; ++c) {
    std::vector<code_t> v(size_t(std::max(n, 0)), 0);
    long t = c;
    for (int k = 0; k < n; ++k) {
      v[size_t(k)] = code_t(t % F->q());
      t /= F->q();
    }
    out.emplace_back(F, std::move(v));
  }
  return out;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) throw std::invalid_argument("irreducibility test needs non-constant input");
  const FqRef& F = f.field();
  int n = f.degree();
  Poly t = Poly::theta(F) % f;  // x^{q^j} mod f, starting at j = 0
  for (int j = 1; j <= n / 2; ++j) {
    t = powmod(t, F->q(), f);
    Poly diff = t - Poly::theta(F);
    if (!gcd(f, diff).is_one()) return false;
  }
  return true;
}

int poly_valuation(const Poly& g, const Poly& f) {
  if (g.is_zero()) throw std::invalid_argument("valuation of zero polynomial");
  if (f.degree() < 1) throw std::invalid_argument("valuation at constant polynomial");
  int v = 0;
  Poly r = g;
  while (true) {
    auto [q, rem] = r.divmod(f);
    if (!rem.is_zero()) return v;
    ++v;
    r = q;
  }
}

std::string Poly::to_coeff_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s;
}

std::string Poly::to_human_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = c_.size(); i-- > 0;) {
    code_t c = c_[i];
    if (c == 0) continue;
    if (!s.empty()) s += '+';
    if (i == 0) {
      s += std::to_string(c);
    } else {
      if (c != 1) {
        s += std::to_string(c);
        s += '*';
      }
      s += "theta";
      if (i > 1) {
        s += '^';
        s += std::to_string(i);
      }
    }
  }
  return s;
}

namespace {

// Human-form parser: sums of terms c, theta^k, c*theta^k; '-' allowed.
Poly parse_human(const FqRef& F, const std::string& text) {
  Poly result(F);
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) {
      if (first) throw std::invalid_argument("empty polynomial text");
      break;
    }
    bool negate = false;
    if (text[i] == '+' || text[i] == '-') {
      negate = text[i] == '-';
      ++i;
    } else if (!first) {
      throw std::invalid_argument("expected '+' or '-' in polynomial text");
    }
    skip_ws();
    long c = 1;
    bool saw_coeff = false;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      c = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        c = c * 10 + (text[i++] - '0');
      saw_coeff = true;
      skip_ws();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip_ws();
      }
    }
    int k = 0;
    if (i + 5 <= text.size() && text.compare(i, 5, "theta") == 0) {
      i += 5;
      k = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw std::invalid_argument("missing exponent in polynomial text");
        k = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
          k = k * 10 + (text[i++] - '0');
      }
    } else if (!saw_coeff) {
      throw std::invalid_argument("unexpected token in polynomial text");
    }
    code_t cc = c >= 0 && c < F->q() ? code_t(c) : F->from_int(c);
    if (negate) cc = F->neg(cc);
    result = result + Poly::monomial(F, cc, k);
    first = false;
  }
  return result;
}

}  // namespace

Poly Poly::parse(FqRef F, const std::string& text) {
  if (text.find("theta") != std::string::npos || text.find(',') == std::string::npos) {
    // Single integers are coefficient lists of length one; anything with
    // "theta" is human form.
    if (text.find("theta") != std::string::npos) return parse_human(F, text);
  }
  // coefficient list
  std::vector<code_t> v;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("bad coefficient list");
    size_t e = tok.find_last_not_of(" \t");
    tok = tok.substr(b, e - b + 1);
    long val = std::stol(tok);
    v.push_back(val >= 0 && val < F->q() ? code_t(val) : F->from_int(val));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return Poly(std::move(F), std::move(v));
}

}  // namespace gkt
