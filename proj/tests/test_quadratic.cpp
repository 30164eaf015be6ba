#include <doctest.h>

#include "mqunits/field.hpp"
#include "mqunits/quadratic.hpp"
#include "oracles.hpp"

using namespace mqu;

TEST_CASE("fundamental units match a brute-force Pell search") {
  for (std::int64_t d = 2; d <= 120; ++d) {
    if (!oracle::squarefree_brute(d)) continue;
    const auto ref = oracle::pell_brute(d, 2'000'000);
    REQUIRE(ref);
    const QuadraticUnit u = fundamental_unit(d);
    CAPTURE(d);
    CHECK(u.d == d);
    CHECK(u.norm == ref->norm);
    if (d % 4 == 1) {
      // (x + y sqrt d)/2 with x^2 - d y^2 = +-4, possibly reduced to denominator 1.
      Rat x(u.x, u.denom), y(u.y, u.denom), rx(ref->x, 2), ry(ref->y, 2);
      for (Rat* r : {&x, &y, &rx, &ry}) r->canonicalize();
      CHECK(x == rx);
      CHECK(y == ry);
    } else {
      CHECK(u.denom == 1);
      CHECK(u.x == ref->x);
      CHECK(u.y == ref->y);
    }
  }
}

TEST_CASE("fundamental unit spot values") {
  const QuadraticUnit e2 = fundamental_unit(2);
  CHECK(e2.x == 1);
  CHECK(e2.y == 1);
  CHECK(e2.norm == -1);
  const QuadraticUnit e5 = fundamental_unit(5);
  CHECK(e5.denom == 2);
  CHECK(e5.norm == -1);
  const QuadraticUnit e94 = fundamental_unit(94);
  CHECK(e94.x == 2143295);
  CHECK(e94.y == 221064);
  CHECK(e94.norm == 1);
  CHECK(continued_fraction_period(2) == 1);
  CHECK(continued_fraction_period(94) == 16);
  CHECK_THROWS(fundamental_unit(4));
  CHECK_THROWS(fundamental_unit(-5));
  CHECK_THROWS(fundamental_unit(1));
}

TEST_CASE("Pell equation holds for larger radicands") {
  for (std::int64_t d : {110, 2 * 197 * 179, 2 * 181 * 163, 197 * 179, 358, 35263, 7919}) {
    const QuadraticUnit u = fundamental_unit(d);
    CHECK(Int(u.x * u.x - d * u.y * u.y) == u.norm * u.denom * u.denom);
  }
}

TEST_CASE("classification") {
  CHECK(classify_pair(5, 11).tag == Condition::Cond1);
  CHECK(classify_pair(5, 3).tag == Condition::Cond2);
  CHECK(classify_pair(13, 3).tag == Condition::Cond1);
  CHECK(classify_pair(13, 11).tag == Condition::Cond2);
  CHECK(classify_pair(5, 7).tag == Condition::NotApplicable);
  CHECK(classify_pair(7, 3).tag == Condition::NotApplicable);
  CHECK(classify_pair(5, 11).reason.find("(p/q) = 1") != std::string::npos);
  for (Condition c : {Condition::Cond1, Condition::Cond2, Condition::NotApplicable}) {
    CHECK(parse_condition(to_string(c)) == c);
  }
  for (RadicandTag t : {RadicandTag::TwoPQ, RadicandTag::PQ, RadicandTag::TwoQ, RadicandTag::Q}) {
    CHECK(parse_radicand_tag(to_string(t)) == t);
  }
  CHECK(radicand_of(RadicandTag::TwoPQ, 5, 11) == 110);
  CHECK(radicand_of(RadicandTag::TwoQ, 5, 11) == 22);
}

TEST_CASE("lemma decomposition for (5, 11)") {
  const ConditionClass c = classify_pair(5, 11);
  const DecompositionWitness w = lemma_decompose(5, 11, RadicandTag::TwoPQ, c);
  // eps_110 = 21 + 2 sqrt(110) and 2 eps_110 = (2 sqrt 5 + sqrt 22)^2.
  CHECK(w.radicand == 110);
  CHECK(w.case_id == "(2) lower");
  CHECK(w.multiplier == 2);
  CHECK(abs(w.u1) == 2);
  CHECK(w.surd1 == 5);
  CHECK(abs(w.u2) == 1);
  CHECK(w.surd2 == 22);
  CHECK(w.relation == "2 = 22*u2^2 - 5*u1^2");
  CHECK(witness_identity_holds(w));
  int holding = 0;
  for (const auto& s : w.candidates) holding += s.holds;
  CHECK(holding == 1);
  CHECK_FALSE(w.excluded_shapes.empty());

  CHECK(lemma_decompose(5, 11, RadicandTag::PQ, c).case_id == "(3) upper");
  CHECK(lemma_decompose(5, 11, RadicandTag::TwoQ, c).case_id == "(1) lower");
  CHECK(lemma_decompose(5, 11, RadicandTag::Q, c).case_id == "(1) lower");
}

TEST_CASE("lemma decomposition cases by condition") {
  for (std::int64_t p : {5, 13, 29, 37, 53}) {
    for (std::int64_t q : {3, 11, 19, 43}) {
      const ConditionClass c = classify_pair(p, q);
      const bool c1 = c.tag == Condition::Cond1;
      CAPTURE(p);
      CAPTURE(q);
      const auto w2pq = lemma_decompose(p, q, RadicandTag::TwoPQ, c);
      const auto wpq = lemma_decompose(p, q, RadicandTag::PQ, c);
      CHECK(w2pq.case_id == (c1 ? "(2) lower" : "(3) lower"));
      CHECK(wpq.case_id == (c1 ? "(3) upper" : "(1) upper"));
      for (const auto& w : {w2pq, wpq, lemma_decompose(p, q, RadicandTag::TwoQ, c),
                            lemma_decompose(p, q, RadicandTag::Q, c)}) {
        CHECK(witness_identity_holds(w));
      }
    }
  }
  CHECK_THROWS_AS(lemma_decompose(5, 7, RadicandTag::Q, classify_pair(5, 7)), std::invalid_argument);
}
