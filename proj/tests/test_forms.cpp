#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "mqunits/quadratic.hpp"
#include "oracles.hpp"

using namespace mqu;

namespace {

long double log_unit(std::int64_t d) {
  const QuadraticUnit u = fundamental_unit(d);
  const long double x = u.x.get_d(), y = u.y.get_d();
  return std::log((x + y * std::sqrt(static_cast<long double>(d))) / u.denom);
}

}  // namespace

TEST_CASE("fundamental discriminants against brute force") {
  for (std::int64_t D = -2000; D <= 2000; ++D) {
    CAPTURE(D);
    CHECK(is_fundamental_discriminant(D) == oracle::fundamental_brute(D));
  }
  CHECK(fundamental_discriminant(-1) == -4);
  CHECK(fundamental_discriminant(-55) == -55);
  CHECK(fundamental_discriminant(-110) == -440);
  CHECK(fundamental_discriminant(5) == 5);
  CHECK(fundamental_discriminant(2) == 8);
}

TEST_CASE("imaginary class numbers match the analytic formula") {
  for (std::int64_t D = -3; D >= -3000; --D) {
    if (!oracle::fundamental_brute(D)) continue;
    CAPTURE(D);
    const ClassNumberReport r = class_number_imaginary(D);
    CHECK(r.h == oracle::class_number_imaginary_analytic(D));
    std::int64_t prod = 1;
    for (std::int64_t f : r.group_structure) prod *= f;
    CHECK(prod == r.h);
    std::int64_t two_part = 1;
    for (std::int64_t h = r.h; h % 2 == 0; h /= 2) two_part *= 2;
    CHECK(r.h2 == two_part);
    // Genus theory: the 2-rank is one less than the number of prime discriminant factors.
    int primes = 0;
    std::int64_t n = -D;
    if (n % 4 == 0) {
      ++primes;
      while (n % 2 == 0) n /= 2;
    }
    for (std::int64_t k = 3; k <= n; k += 2) {
      if (n % k == 0) {
        ++primes;
        while (n % k == 0) n /= k;
      }
    }
    CHECK(r.two_rank == primes - 1);
  }
}

TEST_CASE("real class numbers match Dirichlet's formula") {
  for (std::int64_t d = 2; d <= 700; ++d) {
    if (!oracle::squarefree_brute(d)) continue;
    const std::int64_t D = fundamental_discriminant(d);
    CAPTURE(d);
    const ClassNumberReport r = class_number_real(d);
    CHECK(r.discriminant == D);
    CHECK(r.h == oracle::class_number_real_analytic(D, log_unit(d)));
    const int norm = fundamental_unit(d).norm;
    CHECK(r.narrow_h == (norm == 1 ? 2 * r.h : r.h));
  }
}

TEST_CASE("class number spot values") {
  auto im = [](std::int64_t D) { return class_number_imaginary(D); };
  CHECK(im(-15).h == 2);
  CHECK(im(-15).group_structure == std::vector<std::int64_t>{2});
  CHECK(im(-23).h == 3);
  CHECK(im(-120).h == 4);
  CHECK(im(-440).h == 12);
  CHECK(im(-440).h2 == 4);
  CHECK(im(-55).h == 4);
  CHECK(im(-55).group_structure == std::vector<std::int64_t>{4});
  CHECK(im(-4).h == 1);
  CHECK(class_number_real(55).h == 2);
  CHECK(class_number_real(79).h == 3);
  CHECK(class_number_real(82).h == 4);
  CHECK(class_number_real(15).narrow_h == 4);
  CHECK_THROWS(class_number_imaginary(-8 * 9));
  CHECK_THROWS(class_number_real(1));
}

TEST_CASE("reduced definite forms are closed under composition") {
  for (std::int64_t D : {-23, -55, -260, -120, -440, -1155, -4 * 5 * 7 * 11}) {
    CAPTURE(D);
    const auto forms = reduced_definite_forms(D);
    const std::set<Form> set(forms.begin(), forms.end());
    CHECK(static_cast<std::int64_t>(forms.size()) == class_number_imaginary(D).h);
    const Form e = identity_form(D);
    CHECK(set.count(e) == 1);
    for (const Form& f : forms) {
      CHECK(f.discriminant() == D);
      CHECK(std::gcd(std::gcd(f.a, f.b), f.c) == 1);
      CHECK(reduce_definite(compose_definite(f, e)) == f);
      for (const Form& g : forms) {
        const Form h = reduce_definite(compose_definite(f, g));
        CHECK(set.count(h) == 1);
        CHECK(h == reduce_definite(compose_definite(g, f)));
      }
    }
  }
}

TEST_CASE("indefinite reduction cycles stay inside the reduced set") {
  for (std::int64_t D : {5 * 4 * 2 + 0, 220, 440, 221, 1155}) {
    if (!is_fundamental_discriminant(D)) continue;
    const auto forms = reduced_indefinite_forms(D);
    const std::set<Form> set(forms.begin(), forms.end());
    for (const Form& f : forms) {
      CHECK(is_reduced_indefinite(f));
      CHECK(f.discriminant() == D);
      CHECK(set.count(rho_indefinite(f)) == 1);
    }
  }
}

TEST_CASE("memo returns the same reports and is keyed by discriminant") {
  ClassNumberMemo memo;
  const ClassNumberReport a = memo.get(-110);
  CHECK(a.discriminant == -440);
  CHECK(memo.get(-110) == a);
  CHECK(memo.size() == 1);
  memo.get(10);
  CHECK(memo.snapshot().count(40) == 1);
}
