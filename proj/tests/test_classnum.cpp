#include <doctest.h>

#include "mqunits/classnum.hpp"
#include "oracles.hpp"

using namespace mqu;

namespace {

KurodaInstance instance(int degree, int v, int q_log2, const std::vector<std::int64_t>& h2) {
  KurodaInstance k{degree, v, {}, q_log2};
  for (std::size_t i = 0; i < h2.size(); ++i) k.subfield_h2.emplace_back(static_cast<std::int64_t>(i), h2[i]);
  return k;
}

}  // namespace

TEST_CASE("Kuroda formula instances") {
  CHECK(kuroda_h2(instance(8, 9, 6, {1, 1, 1, 2, 1, 2, 2})) == 1);
  CHECK(kuroda_value(instance(8, 9, 5, {1, 1, 1, 2, 1, 2, 2})) == Rat(1, 2));
  CHECK_THROWS_AS(kuroda_h2(instance(8, 9, 5, {1, 1, 1, 2, 1, 2, 2})), Falsified);
  const std::vector<std::int64_t> cond2 = {1, 1, 1, 1, 2, 1, 1, 2, 2, 1, 2, 2, 2, 2, 4};
  CHECK(kuroda_h2(instance(16, 16, 8, cond2)) == 2);
  CHECK(kuroda_h2(instance(16, 16, 7, cond2)) == 1);
  CHECK(kuroda_h2(instance(4, 2, 1, {1, 1, 2})) == 1);
  CHECK_THROWS_AS(kuroda_value(instance(8, 9, 6, {1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(kuroda_value(instance(5, 2, 1, {1, 1, 2})), std::invalid_argument);
}

TEST_CASE("Kuroda instances from computed class numbers") {
  ClassNumberMemo memo;
  const KurodaInstance k8 = kuroda_degree8(5, 11, 6, memo);
  CHECK(k8.v_exponent == 9);
  CHECK(k8.subfield_h2.size() == 7);
  CHECK(kuroda_h2(k8) == 1);
  const KurodaInstance k16 = kuroda_degree16(5, 11, 8, memo);
  CHECK(k16.v_exponent == 16);
  CHECK(kuroda_h2(k16) == 4);
  CHECK(kuroda_value(kuroda_degree16(5, 11, 7, memo)) == 2);
  CHECK(kuroda_h2(kuroda_degree16(5, 3, 8, memo)) == 2);
  CHECK(kuroda_h2(kuroda_degree4(5, 11, 1, memo)) == 1);
  CHECK(kuroda_radicands(8, 5, 11) == std::vector<std::int64_t>{2, 5, 11, 10, 22, 55, 110});
}

TEST_CASE("quadratic h2 claims") {
  ClassNumberMemo memo;
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 3}, {5, 11}, {13, 3}, {29, 43}}) {
    const auto claims = crosscheck_quadratic_h2(classify_pair(p, q), memo);
    CHECK(claims.size() == 15);
    for (const auto& c : claims) {
      CAPTURE(c.label);
      CHECK(c.pass);
      // Independent value from the analytic formulas.
      const std::int64_t D = fundamental_discriminant(c.radicand);
      if (D < 0) {
        std::int64_t h = oracle::class_number_imaginary_analytic(D), h2 = 1;
        while (h % 2 == 0) h /= 2, h2 *= 2;
        CHECK(c.computed == h2);
      }
    }
  }
  const auto c53 = crosscheck_quadratic_h2(classify_pair(5, 3), memo);
  CHECK(c53.back().label == "-2pq");
  CHECK(c53.back().computed == 4);  // h(-120) = 4
  CHECK_THROWS(crosscheck_quadratic_h2(classify_pair(5, 7), memo));
}

TEST_CASE("structure predictions") {
  ClassNumberMemo memo;
  const StructureReport a = predict_structures(classify_pair(5, 11), memo);
  CHECK(a.m == 2);
  CHECK(to_string(a.cl2_L) == "Z/8");
  CHECK(to_string(a.gal_F2) == "Q_3");
  CHECK(a.gal_F2.order() == 8);
  CHECK(to_string(a.gal_k2) == "Q_4");
  CHECK(to_string(a.cl2_F) == "(2,2)");
  CHECK(to_string(a.cl2_genus_base) == "(2,2)");
  CHECK(a.h2_Ln_log2(1) == 2);
  CHECK(a.h2_Ln_log2(5) == 6);
  CHECK(a.iwasawa == std::make_pair(1, 1));

  const StructureReport b = predict_structures(classify_pair(5, 3), memo);
  CHECK(b.m == 1);
  CHECK(to_string(b.cl2_L) == "Z/4");
  CHECK(to_string(b.gal_F2) == "Z/4");
  CHECK(b.h2_Ln_log2(3) == 3);
  CHECK(b.iwasawa == std::make_pair(1, 0));

  const StructureReport c = predict_structures(classify_pair(13, 3), memo);
  CHECK(c.m == 2);  // h(-39) = 4
  for (int n = 1; n < 10; ++n) CHECK(c.h2_Ln_log2(n + 1) == c.h2_Ln_log2(n) + 1);
  CHECK_THROWS_AS(predict_structures(classify_pair(5, 7), memo), std::invalid_argument);
}

TEST_CASE("group labels") {
  for (const char* s : {"1", "Z/2", "Z/64", "(2,2)", "Q_3", "Q_7", "D_4", "S_5"}) {
    CHECK(to_string(parse_group_label(s)) == s);
  }
  CHECK(GroupLabel::cyclic(0) == GroupLabel::trivial());
  CHECK_THROWS(GroupLabel::quaternion(2));
  CHECK_THROWS(parse_group_label("Z/6"));
  CHECK_THROWS(parse_group_label("Q_x"));
  CHECK_THROWS(parse_group_label("G"));
}
