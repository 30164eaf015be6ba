#include <doctest.h>

#include "mqunits/units.hpp"

using namespace mqu;

namespace {

ExponentMap em(std::initializer_list<std::pair<const std::int64_t, Rat>> l) { return ExponentMap(l); }

bool closed(const FsuResult& f) {
  const std::size_t n = f.generators.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    FieldElement prod = FieldElement::rational(f.field, Rat(1));
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) prod = prod * f.generators[i].witness;
    }
    if (sqrt_in_field(prod)) return false;
  }
  return true;
}

void check_fsu(const FsuResult& f) {
  for (const auto& g : f.generators) {
    CHECK(verify_unit_expr(g, f.field, f.torsion_order));
    const Rat n = absolute_norm(g.witness);
    CHECK((n == 1 || n == -1));
  }
  const auto m = exponent_matrix(f.generators, f.base_radicands);
  const Rat det = determinant(m);
  CHECK(det != 0);
  CHECK(abs(det) * (Int(1) << f.q_index_log2) == torsion_index(f.field, f.torsion_order));
}

}  // namespace

TEST_CASE("quadratic FSU and the trivial index") {
  const FsuResult f = fsu_quadratic(110);
  CHECK(f.generators.size() == 1);
  CHECK(f.q_index_log2 == 0);
  CHECK(unit_index(f) == 1);
  CHECK(f.torsion_label() == "-1");
  check_fsu(f);
}

TEST_CASE("determinant and lattices") {
  const std::vector<std::vector<Rat>> id = {{1, 0}, {0, 1}};
  const std::vector<std::vector<Rat>> half = {{1, 0}, {Rat(1, 2), Rat(1, 2)}};
  CHECK(determinant(id) == 1);
  CHECK(determinant(half) == Rat(1, 2));
  CHECK(same_lattice(id, {{1, 1}, {0, 1}}));
  CHECK_FALSE(same_lattice(id, half));
  CHECK(determinant({{1, 2}, {2, 4}}) == 0);
}

TEST_CASE("biquadratic predictions agree with the generic algorithm") {
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 11}, {5, 3}, {13, 3}, {13, 11}, {29, 19}}) {
    const ConditionClass c = classify_pair(p, q);
    for (auto [a, b] : biquadratic_configurations(p, q)) {
      CAPTURE(a);
      CAPTURE(b);
      const FsuResult f = fsu_biquadratic(SquarefreeInt(a), SquarefreeInt(b), c);
      const FsuResult g = fsu_real(FieldBasis({a, b}));
      check_fsu(f);
      check_fsu(g);
      CHECK(same_lattice(exponent_matrix(f.generators, f.base_radicands),
                         exponent_matrix(g.generators, f.base_radicands)));
      CHECK(f.q_index_log2 == (a == 2 && b == q ? 2 : 1));
      CHECK(closed(f));
    }
  }
}

TEST_CASE("degree 8 FSU for (5, 11)") {
  const ConditionClass c = classify_pair(5, 11);
  const FieldBasis k({2, 5, 11});
  const FsuResult f = wada_fsu(k, {fsu_biquadratic(SquarefreeInt(2), SquarefreeInt(5), c),
                                   fsu_biquadratic(SquarefreeInt(2), SquarefreeInt(11), c),
                                   fsu_biquadratic(SquarefreeInt(2), SquarefreeInt(55), c)});
  CHECK(f.q_index_log2 == 6);
  CHECK(unit_index(f) == 64);
  CHECK(same_generator_labels(f.generators, theorem_real_list(c)));
  check_fsu(f);
  CHECK(closed(f));
  const FsuResult g = fsu_real(k);
  CHECK(same_lattice(exponent_matrix(f.generators, f.base_radicands), exponent_matrix(g.generators, f.base_radicands)));
  CHECK(closed(g));

  bool has_fourth = false;
  for (const auto& u : f.generators) {
    if (u.exponents == em({{5, Rat(1, 2)}, {22, Rat(1, 4)}, {55, Rat(1, 4)}, {110, Rat(1, 4)}})) has_fourth = true;
  }
  CHECK(has_fourth);
}

TEST_CASE("degree 8 FSU for (5, 3) has the Cond2 fourth root") {
  const ConditionClass c = classify_pair(5, 3);
  const FsuResult f = fsu_real(FieldBasis({2, 5, 3}));
  CHECK(f.q_index_log2 == 6);
  CHECK(same_generator_labels(f.generators, theorem_real_list(c)));
  const auto expected = em({{2, Rat(1, 2)}, {5, Rat(1, 2)}, {3, Rat(1, 4)}, {15, Rat(1, 4)}, {30, Rat(1, 4)}});
  bool found = false;
  for (const auto& u : f.generators) found = found || u.exponents == expected;
  CHECK(found);
}

TEST_CASE("Azizi extension") {
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 11}, {5, 3}}) {
    const ConditionClass c = classify_pair(p, q);
    const FsuResult real = fsu_real(FieldBasis({2, p, q}));
    const AziziResult a = azizi_extend(real, FieldBasis({2, p, q, -1}));
    REQUIRE(a.epsilon);
    CHECK(a.epsilon->exponents == em({{2, Rat(1)}, {q, Rat(1, 2)}, {2 * q, Rat(1, 2)}}));
    CHECK(a.n0 == 3);
    CHECK(a.fsu.torsion_order == (q == 3 ? 24 : 8));
    CHECK(a.fsu.q_index_log2 == 8);
    CHECK(same_generator_labels(a.fsu.generators, theorem_cm_list(c)));
    check_fsu(a.fsu);
    const FieldElement two_plus = FieldElement::rational(real.field, Rat(2)) + FieldElement::sqrt_of(real.field, 2);
    CHECK(*a.square_root * *a.square_root == two_plus * a.epsilon->witness);
  }
}

TEST_CASE("Azizi extension without a qualifying unit keeps the generators") {
  const FsuResult real = fsu_quadratic(5);
  const AziziResult a = azizi_extend(real, FieldBasis({5, -1}));
  CHECK_FALSE(a.epsilon);
  CHECK(a.fsu.torsion_order == 4);
  CHECK(a.fsu.generators.size() == 1);
  CHECK(a.fsu.generators[0].exponents == real.generators[0].exponents);
  CHECK(a.fsu.q_index_log2 == 0);

  // The Hasse index of Q(sqrt(2pq), i) is 1.
  const AziziResult h = azizi_extend(fsu_quadratic(110), FieldBasis({110, -1}));
  CHECK_FALSE(h.epsilon);
  CHECK(h.fsu.q_index_log2 == 0);

  CHECK_THROWS_AS(azizi_extend(real, FieldBasis({-1, 5})), std::invalid_argument);
}

TEST_CASE("unit_from_exponents and verification") {
  const FieldBasis b({2, 5, 11});
  CHECK(unit_from_exponents(b, em({{55, Rat(1, 2)}})));
  CHECK_FALSE(unit_from_exponents(b, em({{2, Rat(1, 2)}})));
  const auto r = unit_from_exponents(b, em({{11, Rat(1, 2)}}));
  REQUIRE(r);
  UnitExpr u{0, em({{11, Rat(1, 2)}}), *r};
  CHECK(u.root_degree() == 2);
  CHECK(verify_unit_expr(u, b, 2));
  u.witness = -u.witness;
  CHECK(verify_unit_expr(u, b, 2));  // a square root is defined up to sign
  u.witness = u.witness * FieldElement::sqrt_of(b, 2);
  CHECK_FALSE(verify_unit_expr(u, b, 2));
}

TEST_CASE("labels") {
  CHECK(unit_label(em({{5, Rat(1, 2)}, {22, Rat(1, 4)}}), 5, 11) == "eps_p^(1/2)*eps_2q^(1/4)");
  CHECK(unit_label({}, 5, 11) == "1");
  CHECK(radicand_label(110, 5, 11) == "2pq");
  CHECK(radicand_label(7, 5, 11) == "7");
}

TEST_CASE("norm tables reproduce for both conditions") {
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{5, 11}, {13, 3}, {5, 19}, {5, 3}, {13, 11}, {29, 11}}) {
    const ConditionClass c = classify_pair(p, q);
    const NormTable t = norm_table(FieldBasis({2, p, q}), c);
    CAPTURE(p);
    CAPTURE(q);
    CHECK(t.mismatches == 0);
    CHECK(t.rows.size() == 8);
    CHECK(t.sign_exponents.size() == 5);
    std::size_t cells = 0;
    for (const auto& r : t.rows) cells += r.cells.size();
    CHECK(cells == 6 * 9 + 2 * 6);
  }
  CHECK_THROWS(norm_table(FieldBasis({2, 5, 11}), classify_pair(5, 7)));
}
