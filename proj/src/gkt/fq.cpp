#include "gkt/fq.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gkt {

namespace {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Raw little-endian polynomial helpers over F_p, used only while building a
// field's tables.
using RawPoly = std::vector<long>;

void raw_trim(RawPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

RawPoly raw_mul(const RawPoly& f, const RawPoly& g, long p) {
  if (f.empty() || g.empty()) return {};
  RawPoly h(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) h[i + j] = (h[i + j] + f[i] * g[j]) % p;
  raw_trim(h);
  return h;
}

RawPoly raw_mod(RawPoly f, const RawPoly& m, long p) {
  raw_trim(f);
  long lead_inv = 0;
  for (long t = 1; t < p; ++t)
    if ((t * m.back()) % p == 1) lead_inv = t;
  while (f.size() >= m.size()) {
    long c = (f.back() * lead_inv) % p;
    size_t shift = f.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      f[shift + i] = ((f[shift + i] - c * m[i]) % p + p * p) % p;
    }
    raw_trim(f);
    if (f.empty()) break;
  }
  return f;
}

RawPoly raw_powmod(RawPoly base, long n, const RawPoly& m, long p) {
  RawPoly r{1};
  base = raw_mod(std::move(base), m, p);
  while (n > 0) {
    if (n & 1) r = raw_mod(raw_mul(r, base, p), m, p);
    base = raw_mod(raw_mul(base, base, p), m, p);
    n >>= 1;
  }
  return r;
}

RawPoly raw_gcd(RawPoly a, RawPoly b, long p) {
  raw_trim(a);
  raw_trim(b);
  while (!b.empty()) {
    RawPoly r = raw_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool raw_irreducible(const RawPoly& f, long p) {
  // Distinct-degree criterion: f of degree n is irreducible iff it shares no
  // factor with x^{p^j} - x for j <= n/2.
  int n = int(f.size()) - 1;
  RawPoly x{0, 1};
  RawPoly t = x;
  for (int j = 1; j <= n / 2; ++j) {
    RawPoly tp = t;
    t = raw_powmod(tp, p, f, p);
    RawPoly diff = t;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    raw_trim(diff);
    RawPoly g = raw_gcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

FqRef Fq::make(long p, int e) {
  if (!is_prime(p)) throw std::invalid_argument("Fq: characteristic must be prime");
  if (e < 1) throw std::invalid_argument("Fq: base degree must be positive");
  long q = 1;
  for (int i = 0; i < e; ++i) {
    q *= p;
    if (q > 65536) throw std::invalid_argument("Fq: field size exceeds 2^16");
  }

  auto F = std::shared_ptr<Fq>(new Fq());
  F->p_ = p;
  F->e_ = e;
  F->q_ = q;

  RawPoly mod;
  if (e > 1) {
    // First monic irreducible of degree e in enumeration order (constant
    // term fastest).
    long count = q;  // p^e choices of lower coefficients
    for (long c = 0; c < count; ++c) {
      RawPoly f(e + 1, 0);
      long t = c;
      for (int i = 0; i < e; ++i) {
        f[i] = t % p;
        t /= p;
      }
      f[e] = 1;
      if (raw_irreducible(f, p)) {
        mod = f;
        break;
      }
    }
    F->mod_.assign(mod.begin(), mod.end());
  }

  // exp/log tables from the smallest generator of F_q^x.
  auto code_of = [&](const RawPoly& r) {
    long c = 0;
    for (size_t i = r.size(); i-- > 0;) c = c * p + r[i];
    return code_t(c);
  };
  auto raw_of = [&](long code) {
    RawPoly r;
    while (code > 0) {
      r.push_back(code % p);
      code /= p;
    }
    return r;
  };

  const auto factors = prime_factors(q - 1);
  long gen = 0;
  for (long cand = 1; cand < q && gen == 0; ++cand) {
    bool ok = true;
    for (long r : factors) {
      RawPoly t = e == 1 ? RawPoly{(cand % p)} : raw_of(cand);
      RawPoly pw = e == 1
                       ? RawPoly{[&] {
                           long b = cand % p, acc = 1, k = (q - 1) / r;
                           while (k > 0) {
                             if (k & 1) acc = acc * b % p;
                             b = b * b % p;
                             k >>= 1;
                           }
                           return acc;
                         }()}
                       : raw_powmod(t, (q - 1) / r, mod, p);
      raw_trim(pw);
      if (pw.size() == 1 && pw[0] == 1) {
        ok = false;
        break;
      }
    }
    if (ok) gen = cand;
  }
  if (gen == 0 && q > 2) throw std::logic_error("Fq: no generator found");
  if (q == 2) gen = 1;

  F->exp_.resize(q - 1);
  F->log_.assign(q, 0);
  RawPoly acc{1};
  for (long k = 0; k < q - 1; ++k) {
    code_t c = code_of(acc);
    F->exp_[k] = c;
    F->log_[c] = code_t(k);
    if (e == 1) {
      acc[0] = acc.empty() ? 0 : (acc[0] * gen) % p;
      if (acc.empty()) acc = {0};
    } else {
      acc = raw_mod(raw_mul(acc, raw_of(gen), p), mod, p);
    }
  }
  return F;
}

code_t Fq::add(code_t a, code_t b) const {
  if (e_ == 1) return code_t((a + b) % p_);
  code_t r = 0;
  long place = 1;
  for (int i = 0; i < e_; ++i) {
    long da = (a / place) % p_, db = (b / place) % p_;
    r += code_t(((da + db) % p_) * place);
    place *= p_;
  }
  return r;
}

code_t Fq::neg(code_t a) const {
  if (e_ == 1) return code_t((p_ - a) % p_);
  code_t r = 0;
  long place = 1;
  for (int i = 0; i < e_; ++i) {
    long da = (a / place) % p_;
    r += code_t(((p_ - da) % p_) * place);
    place *= p_;
  }
  return r;
}

code_t Fq::sub(code_t a, code_t b) const { return add(a, neg(b)); }

code_t Fq::mul(code_t a, code_t b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(long(log_[a]) + long(log_[b])) % (q_ - 1)];
}

code_t Fq::inv(code_t a) const {
  if (a == 0) throw std::domain_error("division by zero in finite field");
  return exp_[(q_ - 1 - long(log_[a])) % (q_ - 1)];
}

code_t Fq::pow(code_t a, long n) const {
  if (a == 0) {
    if (n < 0) throw std::domain_error("division by zero in finite field");
    return n == 0 ? 1 : 0;
  }
  long l = (long(log_[a]) * (n % (q_ - 1))) % (q_ - 1);
  if (l < 0) l += q_ - 1;
  return exp_[l];
}

code_t Fq::from_int(long n) const {
  long r = n % p_;
  if (r < 0) r += p_;
  return code_t(r);
}

bool same_field(const FqRef& a, const FqRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->p() == b->p() && a->e() == b->e() && a->modulus() == b->modulus();
}

}  // namespace gkt
