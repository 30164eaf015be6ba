#include <doctest.h>

#include <random>

#include "mqunits/field.hpp"
#include "mqunits/units.hpp"
#include "oracles.hpp"

using namespace mqu;

namespace {

FieldElement one(const FieldBasis& b) { return FieldElement::rational(b, Rat(1)); }

FieldElement eps(const FieldBasis& b, std::int64_t d) { return FieldElement::from_unit(b, fundamental_unit(d)); }

}  // namespace

TEST_CASE("basis bookkeeping") {
  const FieldBasis b({2, 5, 11});
  CHECK(b.degree() == 8);
  CHECK(b.radicand(0b111) == 110);
  CHECK(b.mask_of(55) == 0b110u);
  CHECK_FALSE(b.mask_of(3));
  CHECK_FALSE(b.is_cm());
  CHECK(FieldBasis({2, 5, 11, -1}).is_cm());
  CHECK(to_string(b) == "Q(sqrt(2), sqrt(5), sqrt(11))");
  CHECK_THROWS(FieldBasis({2, 8}));
  CHECK_THROWS(FieldBasis({2, 5, 10}));
  CHECK_THROWS(FieldBasis({1}));
  CHECK_THROWS(FieldBasis({2, 3, 5, 7, 11, 13}));
  // sqrt(-2) sqrt(-5) = -sqrt(10).
  const FieldBasis c({-2, -5});
  CHECK(FieldElement::sqrt_of(c, -2) * FieldElement::sqrt_of(c, -5) == -FieldElement::sqrt_of(c, 10));
  CHECK(FieldElement::sqrt_of(c, -8) == Rat(2) * FieldElement::sqrt_of(c, -2));
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 g(2024);
  const std::vector<FieldBasis> bases = {FieldBasis({2, 5, 11}), FieldBasis({2, 3, -1}), FieldBasis({-3, 5}),
                                         FieldBasis({2, 5, 3, -1})};
  int triples = 0;
  for (int i = 0; i < 10000; ++i) {
    const FieldBasis& b = bases[i % (i % 10 == 0 ? 4 : 3)];
    const FieldElement x = oracle::random_element(b, g), y = oracle::random_element(b, g),
                       z = oracle::random_element(b, g);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x + y) + z == x + (y + z));
    CHECK(x - x == FieldElement(b));
    CHECK(x * one(b) == x);
    if (!x.is_zero()) CHECK(x * invert(x) == one(b));
    ++triples;
  }
  CHECK(triples >= 10000);
}

TEST_CASE("automorphisms, norms and signs") {
  const FieldBasis b({2, 5, 11});
  const FieldElement e = eps(b, 110);
  const Automorphism t = flip(b, {2});
  CHECK(apply_automorphism(apply_automorphism(e, t), t) == e);
  CHECK(absolute_norm(e) == 1);
  CHECK(absolute_norm(eps(b, 2)) == 1);  // N(eps_2) = -1 over Q(sqrt 2), even degree above it
  CHECK(relative_norm(eps(b, 2), t) == FieldElement::rational(b, Rat(-1)));
  CHECK(sign_at_identity(eps(b, 2)) == 1);
  CHECK(sign_at_embedding(eps(b, 2), t) == -1);
  const RationalInterval iv = enclose(eps(b, 2), 20);
  // 1 + sqrt 2 lies in [lo, hi] exactly when (lo - 1)^2 <= 2 <= (hi - 1)^2.
  CHECK(iv.width() <= Rat(1, 100000000000000000000_mpz));
  CHECK((iv.lo - 1) * (iv.lo - 1) <= 2);
  CHECK((iv.hi - 1) * (iv.hi - 1) >= 2);
}

TEST_CASE("square roots in the field") {
  const FieldBasis b({2, 5, 11});
  // sqrt(eps_55) = 3 sqrt 5 + 2 sqrt 11 up to sign.
  auto r = sqrt_in_field(eps(b, 55));
  REQUIRE(r);
  CHECK(*r * *r == eps(b, 55));
  CHECK(abs(r->coeff(5)) == 3);
  CHECK(abs(r->coeff(11)) == 2);
  CHECK_FALSE(sqrt_in_field(eps(b, 2)));
  CHECK_FALSE(sqrt_in_field(FieldElement::rational(b, Rat(-4))));
  const FieldElement e4 = power(eps(b, 2), 4);
  auto f = fourth_root_in_field(e4);
  REQUIRE(f);
  CHECK(power(*f, 4) == e4);
  CHECK(invert(eps(b, 2)) == FieldElement::sqrt_of(b, 2) - one(b));
  const FieldBasis c({3, 5});
  auto s = sqrt_in_field(eps(c, 3) * eps(c, 15));
  REQUIRE(s);
  CHECK(*s * *s == eps(c, 3) * eps(c, 15));
}

TEST_CASE("sqrt_in_field agrees with the numeric embedding oracle") {
  std::mt19937_64 g(77);
  int agreed = 0, squares = 0, total = 0;
  for (const auto& gens : std::vector<std::vector<std::int64_t>>{{2, 5, 11}, {2, 5, 3}, {2, 13, 3}}) {
    const FieldBasis b(gens);
    const FsuResult f = fsu_real(b);
    std::uniform_int_distribution<int> e(-2, 2), pick(0, 2);
    for (int i = 0; i < 80; ++i) {
      FieldElement w = one(b);
      const int mode = pick(g);
      for (const auto& gen : f.generators) {
        const int k = mode == 0 ? e(g) : e(g) % 2;
        w = w * power(gen.witness, k);
      }
      const FieldElement u = mode == 0 ? w : w * w;
      const auto exact = sqrt_in_field(u);
      const auto approx = oracle::numeric_sqrt(u);
      ++total;
      CAPTURE(to_string(u));
      CHECK(exact.has_value() == approx.has_value());
      bool same = exact.has_value() == approx.has_value();
      if (exact && approx) {
        ++squares;
        const int s = sign_at_identity(*exact);
        for (std::size_t k = 0; k < b.degree(); ++k) {
          const mpf_class x(s * exact->coord(k), 640);
          const mpf_class diff = abs(x - (*approx)[k]);
          same = same && diff < mpf_class("1e-30", 640);
        }
        CHECK(same);
      }
      agreed += same;
    }
  }
  CHECK(total >= 200);
  CHECK(agreed == total);
  CHECK(squares >= 60);
}

TEST_CASE("roots of unity and torsion") {
  CHECK(torsion_order(FieldBasis({2, 5, 11, -1})) == 8);
  CHECK(torsion_order(FieldBasis({2, 5, 3, -1})) == 24);
  CHECK(torsion_order(FieldBasis({5, 3})) == 2);
  CHECK(torsion_order(FieldBasis({-1})) == 4);
  CHECK(torsion_order(FieldBasis({-3})) == 6);
  CHECK(torsion_order(FieldBasis({2, -1})) == 8);
  const FieldBasis b({2, 3, -1});
  for (int n : {3, 4, 8, 24}) {
    const FieldElement z = zeta(n, b);
    CHECK(power(z, n) == one(b));
    for (int k = 1; k < n; ++k) {
      if (n % k == 0) CHECK(power(z, k) != one(b));
    }
  }
  CHECK_THROWS(zeta(8, FieldBasis({3, -1})));
}

TEST_CASE("serialization round trip") {
  std::mt19937_64 g(5);
  const FieldBasis b({2, 5, 3, -1});
  for (int i = 0; i < 300; ++i) {
    const FieldElement x = oracle::random_element(b, g, 1000, 64);
    CHECK(parse_field_element(to_string(x), b) == x);
  }
  CHECK(to_string(FieldElement(b)) == "0/1*sqrt(1)");
  CHECK(parse_field_element("0/1*sqrt(1)", b).is_zero());
  CHECK(to_string(eps(FieldBasis({2}), 2)) == "1/1*sqrt(1) + 1/1*sqrt(2)");
  CHECK_THROWS(parse_field_element("1/1*sqrt(7)", b));
  CHECK_THROWS(parse_field_element("garbage", b));
}

TEST_CASE("embedding into a larger basis") {
  const FieldBasis small({5, 11}), big({2, 5, 11});
  const FieldElement e = eps(small, 55);
  CHECK(embed(e, big) == eps(big, 55));
  CHECK_THROWS(embed(eps(big, 2), small));
}
