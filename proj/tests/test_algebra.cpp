#include <doctest.h>

#include "gkt/extfield.hpp"
#include "gkt/poly.hpp"
#include "gkt/rng.hpp"

using namespace gkt;

TEST_CASE("F_4 multiplication table") {
  // F_4 = F_2[z]/(z^2+z+1); z * (z+1) = z^2+z = 1
  auto F2 = Fq::make(2);
  auto F4 = ExtField::make(F2, Poly::parse(F2, "1,1,1"));
  code_t z = 2, z1 = 3;  // z and z+1
  CHECK(F4->mul(z, z1) == 1);
  // exhaustive: the nonzero elements form a cyclic group of order 3
  for (code_t a = 1; a < 4; ++a) CHECK(F4->pow(a, 3) == 1);
}

TEST_CASE("F_9 with modulus z^2+1 has z^2 = 2") {
  auto F3 = Fq::make(3);
  auto F9 = ExtField::make(F3, Poly::parse(F3, "1,0,1"));
  code_t z = 3;  // the class of z
  CHECK(F9->mul(z, z) == 2);
}

TEST_CASE("Frobenius fixes 0 and has order m") {
  auto F3 = Fq::make(3);
  auto F = ExtField::make_default(F3, 3);  // F_27
  CHECK(F->frobenius(0) == 0);
  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    code_t a = code_t(rng.bounded(std::uint64_t(F->order())));
    code_t b = a;
    for (int i = 0; i < F->m(); ++i) b = F->frobenius(b);
    CHECK(b == a);
  }
  // Frobenius is a field automorphism
  for (int t = 0; t < 50; ++t) {
    code_t a = code_t(rng.bounded(std::uint64_t(F->order())));
    code_t b = code_t(rng.bounded(std::uint64_t(F->order())));
    CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
    CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
  }
}

TEST_CASE("field inverse and division-by-zero error") {
  auto F2 = Fq::make(2);
  auto F8 = ExtField::make_default(F2, 3);
  for (code_t a = 1; a < 8; ++a) CHECK(F8->mul(a, F8->inv(a)) == 1);
  CHECK_THROWS_AS((void)F8->inv(0), std::domain_error);
  CHECK_THROWS_AS((void)Fq::make(5)->inv(0), std::domain_error);
}

TEST_CASE("cross-field operations rejected") {
  auto F2 = Fq::make(2);
  auto F3 = Fq::make(3);
  Poly a = Poly::theta(F2), b = Poly::theta(F3);
  CHECK_THROWS_AS((void)(a + b), std::invalid_argument);
  FieldElem x{ExtField::make_default(F2, 2), 1};
  FieldElem y{ExtField::make_default(F2, 3), 1};
  CHECK_THROWS_AS((void)(x * y), std::invalid_argument);
}

TEST_CASE("polynomial arithmetic basics") {
  auto F2 = Fq::make(2);
  Poly t = Poly::theta(F2);
  Poly t1 = t + Poly::one(F2);
  CHECK((t1 * t1) == Poly::parse(F2, "1,0,1"));  // (theta+1)^2 = theta^2+1

  auto [s, r] = (t * t + t).divmod(t);
  CHECK(s == t1);
  CHECK(r.is_zero());

  auto F3 = Fq::make(3);
  Poly g = gcd(Poly::parse(F3, "theta^2+2"), Poly::parse(F3, "theta+2"));
  CHECK(g == Poly::parse(F3, "theta+2"));  // gcd(theta^2-1, theta-1) monic

  CHECK_THROWS_AS((void)t.divmod(Poly::zero(F2)), std::domain_error);
}

TEST_CASE("divmod round-trip on random pairs") {
  auto F3 = Fq::make(3);
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<code_t> fc(1 + rng.bounded(8)), gc(1 + rng.bounded(5));
    for (auto& c : fc) c = code_t(rng.bounded(3));
    for (auto& c : gc) c = code_t(rng.bounded(3));
    Poly f(F3, fc), g(F3, gc);
    if (g.is_zero()) continue;
    auto [s, r] = f.divmod(g);
    CHECK(f == s * g + r);
    CHECK(r.degree() < g.degree());
  }
}

TEST_CASE("monic enumeration order and counts") {
  auto F2 = Fq::make(2);
  auto d0 = enumerate_monic(F2, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].is_one());

  auto d1 = enumerate_monic(F2, 1);
  REQUIRE(d1.size() == 2);
  CHECK(d1[0] == Poly::parse(F2, "theta"));
  CHECK(d1[1] == Poly::parse(F2, "theta+1"));

  auto F3 = Fq::make(3);
  auto e1 = enumerate_monic(F3, 1);
  REQUIRE(e1.size() == 3);
  CHECK(e1[0] == Poly::parse(F3, "theta"));
  CHECK(e1[1] == Poly::parse(F3, "theta+1"));
  CHECK(e1[2] == Poly::parse(F3, "theta+2"));

  CHECK(enumerate_monic(F3, 3).size() == 27);
}

TEST_CASE("product over monic degree i is a unit mod v") {
  // For irreducible v with deg v > i or v coprime to the product, the image
  // of prod_{a in A_{+,i}} a in (A/v)^x is a unit; for i = 0 it is 1.
  for (long q : {2L, 3L}) {
    auto F = Fq::make(q);
    for (const char* vt : {"theta", "theta^2+theta+1"}) {
      Poly v = Poly::parse(F, vt);
      if (!is_irreducible(v)) continue;
      auto E = ExtField::make(F, v);
      for (int i = 0; i <= 4; ++i) {
        code_t prod = 1;
        for (const Poly& a : enumerate_monic(F, i)) {
          if ((a % v).is_zero()) continue;  // v | a
          prod = E->mul(prod, E->eval_poly(a % v, E->from_poly(Poly::theta(F))));
        }
        if (i == 0) CHECK(prod == 1);
        CHECK(prod != 0);
      }
    }
  }
}

TEST_CASE("irreducibility") {
  auto F2 = Fq::make(2);
  CHECK(is_irreducible(Poly::parse(F2, "theta^2+theta+1")));
  CHECK_FALSE(is_irreducible(Poly::parse(F2, "theta^2+1")));  // (theta+1)^2
  auto F3 = Fq::make(3);
  CHECK(is_irreducible(Poly::parse(F3, "theta^2+1")));
  CHECK_THROWS_AS((void)is_irreducible(Poly::one(F2)), std::invalid_argument);
}

TEST_CASE("polynomial text forms") {
  auto F3 = Fq::make(3);
  Poly f = Poly::parse(F3, "theta^2+2*theta+1");
  CHECK(f.to_coeff_string() == "1,2,1");
  CHECK(f.to_human_string() == "theta^2+2*theta+1");
  CHECK(Poly::parse(F3, "1,2,1") == f);
  CHECK(Poly::parse(F3, "theta-1") == Poly::parse(F3, "theta+2"));
  CHECK(Poly::zero(F3).to_coeff_string() == "0");
  CHECK(Poly::parse(F3, "0").is_zero());
}

TEST_CASE("eval and roots in extension fields") {
  auto F2 = Fq::make(2);
  Poly v = Poly::parse(F2, "theta^2+theta+1");
  auto F4 = ExtField::make(F2, v);
  auto roots = F4->roots_of(v);
  REQUIRE(roots.size() == 2);
  for (code_t r : roots) CHECK(F4->eval_poly(v, r) == 0);
  // poly evaluation inside the ground field
  CHECK(Poly::parse(F2, "theta^2+theta").eval(1) == 0);
}
