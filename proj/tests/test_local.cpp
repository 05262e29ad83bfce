#include <doctest.h>

#include "gkt/local.hpp"
#include "gkt/rng.hpp"

using namespace gkt;

namespace {

ComponentRef z3() { return Component::integer(3); }
ComponentRef a_theta2() {
  auto F2 = Fq::make(2);
  return Component::polynomial(F2, Poly::theta(F2));
}

LocalElem rand_local(const ComponentRef& c, int prec, Rng& rng) {
  if (c->is_integer()) {
    mpz_class v = 0;
    for (int i = 0; i < prec; ++i) v = v * c->pi_z() + long(rng.bounded(std::uint64_t(c->residue_count())));
    return LocalElem::from_value(c, v, prec);
  }
  Poly v = Poly::zero(c->fq());
  for (int i = prec - 1; i >= 0; --i)
    v = v * c->pi_a() + c->arep(long(rng.bounded(std::uint64_t(c->residue_count()))));
  return LocalElem::from_value(c, v, prec);
}

}  // namespace

TEST_CASE("digit expansions of rationals") {
  auto c = z3();
  auto x = FracElem::make(c, mpq_class(-1, 2)).digits_of(4);
  auto d = x.zdigits();
  CHECK(d == std::vector<mpz_class>{1, 1, 1, 1});

  auto y = FracElem::make(c, mpq_class(1, 2)).digits_of(4);
  CHECK(y.zdigits() == std::vector<mpz_class>{2, 1, 1, 1});

  auto ca = a_theta2();
  RatFunc one_over(Poly::one(ca->fq()), Poly::parse(ca->fq(), "theta+1"));
  auto z = FracElem::make(ca, one_over).digits_of(3);
  auto ad = z.adigits();
  REQUIRE(ad.size() == 3);
  for (const auto& dig : ad) CHECK(dig.is_one());

  CHECK_THROWS_WITH_AS(FracElem::make(c, mpq_class(1, 3)).digits_of(2),
                       "not integral at the place", std::domain_error);
}

TEST_CASE("phi is the digit shift") {
  auto c = z3();
  // phi(0) = 0
  CHECK(LocalElem::zero(c, 5).phi().is_zero_at_precision());
  // -1 has all digits 2; it is a fixed point of phi
  auto m1 = LocalElem::from_int(c, -1, 6);
  CHECK(m1.phi() == LocalElem::from_int(c, -1, 5));
  // explicit shift on A_theta
  auto ca = a_theta2();
  auto F = ca->fq();
  LocalElem x = LocalElem::parse(ca, "1,0,1,1:4");
  CHECK(x.phi().to_string() == "Av:2:theta:0,1,1:3");
  CHECK_THROWS_WITH_AS(LocalElem::zero(c, 0).phi(), "precision exhausted", std::domain_error);
}

TEST_CASE("neg-phi-neg") {
  auto c = z3();
  auto S = ProductSpace::make({c});
  // x = 1/2 -> -phi(-1/2) = 1/2
  auto x = FracTuple(S, {FracElem::make(c, mpq_class(1, 2))});
  auto px = x.digits_of(5);
  auto r = px.neg_phi_neg();
  CHECK(r.part(0).congruent_mod(x.digits_of(6).neg_phi_neg().part(0), 4));
  CHECK(r.part(0).congruent_mod(x.digits_of(4).part(0), 4));

  auto ca = a_theta2();
  auto Sa = ProductSpace::make({ca});
  RatFunc v(Poly::one(ca->fq()), Poly::parse(ca->fq(), "theta+1"));
  auto y = FracTuple(Sa, {FracElem::make(ca, v)}).digits_of(5);
  CHECK(y.neg_phi_neg().part(0).congruent_mod(y.part(0), 4));
}

TEST_CASE("shift identity x = x_(0) + pi * phi(x)") {
  Rng rng(11);
  for (const ComponentRef& c : {z3(), a_theta2()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      int prec = 2 + int(rng.bounded(8));
      LocalElem x = rand_local(c, prec, rng);
      LocalElem shifted = x.phi().mul_by_pi(1);
      LocalElem digit0 = c->is_integer()
                             ? LocalElem::from_value(c, x.zdigits()[0], prec)
                             : LocalElem::from_value(c, x.adigits()[0], prec);
      CHECK((digit0 + shifted).congruent_mod(x, prec - 1));
    }
  }
}

TEST_CASE("uniform continuity of phi") {
  Rng rng(13);
  for (const ComponentRef& c : {z3(), a_theta2()}) {
    for (int trial = 0; trial < 300; ++trial) {
      int prec = 3 + int(rng.bounded(6));
      int n = 1 + int(rng.bounded(std::uint64_t(prec - 1)));
      LocalElem x = rand_local(c, prec, rng);
      // congruent pair: perturb x above pi^n
      LocalElem tail = rand_local(c, prec - n, rng);
      LocalElem y2 = x + tail.mul_by_pi(n);
      CHECK(y2.congruent_mod(x, n));
      CHECK(y2.phi().congruent_mod(x.phi(), n - 1));
    }
  }
}

TEST_CASE("frac_part idempotence and integrality") {
  Rng rng(17);
  auto c = z3();
  for (int trial = 0; trial < 200; ++trial) {
    mpq_class x(long(rng.bounded(2000)) - 1000, 1 + long(rng.bounded(50)));
    x.canonicalize();
    FracElem f = FracElem::make(c, x);
    FracElem fp = f.frac_part();
    CHECK(fp.frac_part() == fp);
    CHECK((f - fp).is_integral());
    CHECK(fp.zq() >= 0);
    CHECK(fp.zq() < 1);
  }
  CHECK(FracElem::make(c, mpq_class(3, 2)).frac_part().zq() == mpq_class(1, 2));

  auto ca = a_theta2();
  auto F = ca->fq();
  // <(theta+1)/theta> = 1/theta
  FracElem g = FracElem::make(ca, RatFunc(Poly::parse(F, "theta+1"), Poly::theta(F)));
  CHECK(g.frac_part() == FracElem::make(ca, RatFunc(Poly::one(F), Poly::theta(F))));
  // integral elements have fractional part 0
  CHECK(FracElem::make(ca, RatFunc(Poly::parse(F, "theta^3+theta"))).frac_part().is_zero());
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<code_t> nc(1 + rng.bounded(6)), dc(1 + rng.bounded(4));
    for (auto& x : nc) x = code_t(rng.bounded(2));
    for (auto& x : dc) x = code_t(rng.bounded(2));
    Poly num(F, nc), den(F, dc);
    if (den.is_zero()) continue;
    FracElem h = FracElem::make(ca, RatFunc(num, den));
    FracElem hp = h.frac_part();
    CHECK(hp.frac_part() == hp);
    CHECK((h - hp).is_integral());
    if (!hp.is_zero()) CHECK(hp.af().abs_degree() < 0);
  }
}

TEST_CASE("periodic points") {
  auto c = z3();
  auto S = ProductSpace::make({c});
  auto pts = periodic_points(S, 1);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].part(0).zq() == 0);
  CHECK(pts[1].part(0).zq() == mpq_class(1, 2));

  auto ca = a_theta2();
  auto Sa = ProductSpace::make({ca});
  auto apts = periodic_points(Sa, 1);
  REQUIRE(apts.size() == 2);
  CHECK(apts[0].part(0).is_zero());
  CHECK(apts[1].part(0) ==
        FracElem::make(ca, RatFunc(Poly::one(ca->fq()), Poly::parse(ca->fq(), "theta+1"))));

  auto Sp = ProductSpace::make({c, ca});
  CHECK(periodic_points(Sp, 1).size() == 4);

  // closure: phi(-x) is -y for an enumerated y
  for (int n = 1; n <= 3; ++n) {
    auto pp = periodic_points(S, n);
    for (const auto& x : pp) {
      ProdElem nx = (-x).digits_of(2 * n + 2);
      ProdElem shifted = nx.phi();
      bool found = false;
      for (const auto& y : pp) {
        ProdElem ny = (-y).digits_of(2 * n + 1);
        if (shifted.part(0).congruent_mod(ny.part(0), 2 * n + 1)) found = true;
      }
      CHECK(found);
    }
  }

  PeriodicOptions tiny;
  tiny.cap = 10;
  CHECK_THROWS_AS(periodic_points(S, 64, tiny), std::runtime_error);
}

TEST_CASE("orbit sets") {
  auto c = z3();
  auto S = ProductSpace::make({c});
  // x = 0
  CHECK(orbit_sets_equal(FracTuple::zero(S), 1));
  // x = 1/2, n = 1
  CHECK(orbit_sets_equal(FracTuple(S, {FracElem::make(c, mpq_class(1, 2))}), 1));
  // x = 1/8, n = 2: both sets {1/8, 3/8}
  auto x = FracTuple(S, {FracElem::make(c, mpq_class(1, 8))});
  CHECK(orbit_sets_equal(x, 2));
  {
    auto a = x.mul_pi(0).frac_part().part(0).zq();
    auto b = x.mul_pi(1).frac_part().part(0).zq();
    CHECK(((a == mpq_class(1, 8) && b == mpq_class(3, 8)) ||
           (a == mpq_class(3, 8) && b == mpq_class(1, 8))));
  }

  auto ca = a_theta2();
  for (const auto& Sx : {ProductSpace::make({c}), ProductSpace::make({ca}),
                         ProductSpace::make({c, ca})}) {
    for (int n = 1; n <= 6; ++n) {
      PeriodicOptions opt;
      opt.cap = 3000000;
      for (const auto& pt : periodic_points(Sx, n, opt)) CHECK(orbit_sets_equal(pt, n));
    }
  }

  CHECK_THROWS_WITH_AS(orbit_sets_equal(FracTuple(S, {FracElem::make(c, mpq_class(1, 5))}), 2),
                       "non-periodic input", std::invalid_argument);
}

TEST_CASE("custom digit sets") {
  auto c = z3();
  auto bal = c->with_digit_set(std::vector<mpz_class>{0, 1, -1});
  CHECK_FALSE(bal->canonical_digits());
  // digits of -1/2 = 1 + 3 + 9 + ... become alternating in balanced form:
  // -1/2 mod 3 = 1, then (-1/2 - 1)/3 = -1/2 ... all digits 1 canonically;
  // balanced rep of residue 1 is still 1, so digits stay 1.
  auto x = FracElem::make(bal, mpq_class(-1, 2)).digits_of(4);
  CHECK(x.zdigits() == std::vector<mpz_class>{1, 1, 1, 1});
  // 1/2: canonical digits (2,1,1,...); balanced: residue 2 -> -1, then
  // (1/2+1)/3 = 1/2 ... digits (-1, -1, -1, ...)
  auto y = FracElem::make(bal, mpq_class(1, 2)).digits_of(4);
  CHECK(y.zdigits() == std::vector<mpz_class>{-1, -1, -1, -1});

  CHECK_THROWS_AS(c->with_digit_set(std::vector<mpz_class>{0, 1, 4}), std::invalid_argument);

  auto ca = a_theta2();
  auto F = ca->fq();
  auto shifted = ca->with_digit_set(std::vector<Poly>{Poly::zero(F), Poly::parse(F, "theta+1")});
  auto z = FracElem::make(shifted, RatFunc(Poly::one(F), Poly::parse(F, "theta+1"))).digits_of(3);
  // 1/(theta+1) = 1 + theta + theta^2 + ...; with rep(1) = 1+theta the
  // expansion recodes
  for (const auto& d : z.adigits()) CHECK((d.is_zero() || d == Poly::parse(F, "theta+1")));
  // reconstruction invariant
  LocalElem back = LocalElem::parse(shifted, z.to_string());
  CHECK(back == z);
}

TEST_CASE("serialization round trips") {
  auto c = z3();
  LocalElem x = FracElem::make(c, mpq_class(-1, 2)).digits_of(4);
  CHECK(x.to_string() == "Zp:3:1,1,1,1:4");
  CHECK(LocalElem::parse("Zp:3:1,1,1,1:4") == x);

  auto ca = a_theta2();
  LocalElem y = FracElem::make(ca, RatFunc(Poly::one(ca->fq()), Poly::parse(ca->fq(), "theta+1")))
                    .digits_of(3);
  CHECK(y.to_string() == "Av:2:theta:1,1,1:3");
  CHECK(LocalElem::parse(y.to_string()) == y);

  auto S = ProductSpace::make({c, ca});
  ProdElem pe(S, {x, LocalElem::from_value(ca, Poly::one(ca->fq()), 4)});
  CHECK(ProductSpace::parse(S->id())->id() == S->id());
  CHECK(pe.to_string() == "Zp:3:1,1,1,1:4;Av:2:theta:1,0,0,0:4");

  // component with uniformizer power
  auto c9 = Component::integer(3, 2);
  CHECK(c9->id() == "Zp:3:2");
  CHECK(Component::parse("Zp:3:2")->residue_count() == 9);
  auto c4 = Component::parse("Av:4:theta");
  CHECK(c4->fq()->q() == 4);
}

TEST_CASE("precision rules") {
  auto c = z3();
  LocalElem a = LocalElem::from_int(c, 7, 5);
  LocalElem b = LocalElem::from_int(c, 4, 3);
  CHECK((a + b).precision() == 3);
  CHECK((a * b).precision() == 3);
  CHECK(a.mul_by_pi(1).precision() == 6);
  CHECK(a.truncated(2).precision() == 2);
  CHECK_THROWS_AS((void)a.truncated(9), std::invalid_argument);
  CHECK_THROWS_AS((void)LocalElem::from_int(c, 3, 1).inverse(), std::domain_error);
  CHECK(LocalElem::from_int(c, 5, 4).inverse() * LocalElem::from_int(c, 5, 4) ==
        LocalElem::one(c, 4));
  CHECK(LocalElem::from_int(c, 9, 4).valuation_capped() == 2);
  CHECK(LocalElem::zero(c, 4).valuation_capped() == 4);
}
