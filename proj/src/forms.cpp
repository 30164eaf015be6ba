#include <algorithm>
#include <numeric>
#include <set>

#include "mqunits/quadratic.hpp"

namespace mqu {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t isqrt64(std::int64_t n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), Int(static_cast<long>(n)).get_mpz_t());
  return r.get_si();
}

void check_discriminant(std::int64_t D) {
  if (D == 0 || D > kMaxAbsDiscriminant || D < -kMaxAbsDiscriminant) {
    throw std::domain_error("discriminant outside supported range: " + std::to_string(D));
  }
  if (!is_fundamental_discriminant(D)) {
    throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
  }
}

// Invariant factors of a finite abelian group given by an element list and
// a power map.
std::vector<std::int64_t> invariant_factors(const std::vector<Form>& elems, const Form& id,
                                            std::int64_t h) {
  auto power = [&](const Form& f, std::int64_t e) {
    Form result = id;
    Form base = f;
    while (e > 0) {
      if (e & 1) result = compose_definite(result, base);
      base = compose_definite(base, base);
      e >>= 1;
    }
    return result;
  };
  // For each prime l | h, the counts |G[l^k]| determine the l-part.
  std::vector<std::vector<std::int64_t>> per_prime;  // cyclic l-factors, descending
  std::int64_t rest = h;
  for (std::int64_t l = 2; rest > 1; ++l) {
    if (rest % l != 0) continue;
    int e = 0;
    while (rest % l == 0) {
      rest /= l;
      ++e;
    }
    std::vector<int> log_counts{0};  // log_l |G[l^k]|
    std::int64_t lk = 1;
    for (int k = 1; k <= e; ++k) {
      lk *= l;
      std::int64_t n = 0;
      for (const Form& f : elems) {
        if (power(f, lk) == id) ++n;
      }
      int lg = 0;
      while (n % l == 0 && n > 1) {
        n /= l;
        ++lg;
      }
      log_counts.push_back(lg);
      if (lg == e) break;
    }
    // Number of cyclic factors of order >= l^k is log|G[l^k]| - log|G[l^(k-1)]|.
    std::vector<int> at_least;
    for (std::size_t k = 1; k < log_counts.size(); ++k) {
      at_least.push_back(log_counts[k] - log_counts[k - 1]);
    }
    std::vector<std::int64_t> factors;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
      const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
      std::int64_t order = 1;
      for (std::size_t j = 0; j <= k; ++j) order *= l;
      for (int c = 0; c < at_least[k] - next; ++c) factors.push_back(order);
    }
    std::sort(factors.rbegin(), factors.rend());
    per_prime.push_back(factors);
  }
  // Combine l-parts into invariant factors d1 | d2 | ... (listed descending).
  std::size_t width = 0;
  for (const auto& v : per_prime) width = std::max(width, v.size());
  std::vector<std::int64_t> out(width, 1);
  for (const auto& v : per_prime) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] *= v[i];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::int64_t two_part(std::int64_t h) {
  std::int64_t r = 1;
  while (h % 2 == 0) {
    h /= 2;
    r *= 2;
  }
  return r;
}

}  // namespace

std::int64_t fundamental_discriminant(std::int64_t squarefree_d) {
  if (squarefree_d == 0 || squarefree_d == 1 || !is_squarefree(squarefree_d)) {
    throw std::invalid_argument("fundamental_discriminant: bad radicand " +
                                std::to_string(squarefree_d));
  }
  return mod_pos(squarefree_d, 4) == 1 ? squarefree_d : 4 * squarefree_d;
}

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t r = mod_pos(D, 4);
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t m4 = mod_pos(m, 4);
  return (m4 == 2 || m4 == 3) && is_squarefree(m);
}

Form reduce_definite(Form f) {
  if (f.a <= 0 || f.discriminant() >= 0) throw std::invalid_argument("reduce_definite: not positive definite");
  for (;;) {
    if (f.b > f.a || f.b <= -f.a) {
      // Translate b into (-a, a].
      const std::int64_t k = floor_div(f.a - f.b, 2 * f.a);
      const std::int64_t nb = f.b + 2 * k * f.a;
      f.c = f.a * k * k + f.b * k + f.c;
      f.b = nb;
    }
    if (f.a > f.c) {
      f = Form{f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

Form identity_form(std::int64_t D) {
  const std::int64_t b = mod_pos(D, 2);
  return Form{1, b, (b * b - D) / 4};
}

Form compose_definite(const Form& f, const Form& g) {
  const std::int64_t D = f.discriminant();
  if (g.discriminant() != D) throw std::invalid_argument("compose_definite: discriminants differ");
  const Int a1(static_cast<long>(f.a)), b1(static_cast<long>(f.b));
  const Int a2(static_cast<long>(g.a)), b2(static_cast<long>(g.b));
  const Int beta = (b1 + b2) / 2;
  Int g1, s, t;
  mpz_gcdext(g1.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a1.get_mpz_t(), a2.get_mpz_t());
  Int e, x, w;
  mpz_gcdext(e.get_mpz_t(), x.get_mpz_t(), w.get_mpz_t(), g1.get_mpz_t(), beta.get_mpz_t());
  const Int u = x * s, v = x * t;
  const Int Dz(static_cast<long>(D));
  const Int a3 = a1 * a2 / (e * e);
  Int b3 = (u * a1 * b2 + v * a2 * b1 + w * ((b1 * b2 + Dz) / 2)) / e;
  const Int m = 2 * a3;
  b3 = b3 % m;
  if (sgn(b3) < 0) b3 += m;
  const Int c3 = (b3 * b3 - Dz) / (4 * a3);
  return reduce_definite(Form{a3.get_si(), b3.get_si(), c3.get_si()});
}

std::vector<Form> reduced_definite_forms(std::int64_t D) {
  if (D >= 0 || mod_pos(D, 4) > 1) throw std::invalid_argument("reduced_definite_forms: bad D");
  std::vector<Form> out;
  const std::int64_t amax = isqrt64(-D / 3);
  for (std::int64_t a = 1; a <= amax; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (mod_pos(b - D, 2) != 0) continue;
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

bool is_reduced_indefinite(const Form& f) {
  const std::int64_t D = f.discriminant();
  if (D <= 0 || f.a == 0) return false;
  // 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, with D a non-square.
  const std::int64_t s = isqrt64(D);
  if (s * s == D) return false;
  if (f.b <= 0 || f.b > s) return false;
  const std::int64_t two_a = 2 * (f.a < 0 ? -f.a : f.a);
  // sqrt(D) - b < 2|a|  <=>  D < (2|a| + b)^2 ; 2|a| < sqrt(D) + b  <=>  (2|a| - b)^2 < D or 2|a| <= b
  const Int Dz(static_cast<long>(D));
  const Int lo = Int(static_cast<long>(two_a + f.b));
  if (!(Dz < lo * lo)) return false;
  if (two_a > f.b) {
    const Int hi = Int(static_cast<long>(two_a - f.b));
    if (!(hi * hi < Dz)) return false;
  }
  return true;
}

Form rho_indefinite(const Form& f) {
  const std::int64_t D = f.discriminant();
  const std::int64_t s = isqrt64(D);
  const std::int64_t m = 2 * (f.c < 0 ? -f.c : f.c);
  // Largest r <= floor(sqrt(D)) with r = -b (mod 2|c|).
  const std::int64_t r = s - mod_pos(s + f.b, m);
  const Int num = Int(static_cast<long>(r)) * r - Int(static_cast<long>(D));
  const Int c = num / (4 * Int(static_cast<long>(f.c)));
  return Form{f.c, r, c.get_si()};
}

std::vector<Form> reduced_indefinite_forms(std::int64_t D) {
  if (D <= 0 || mod_pos(D, 4) > 1) throw std::invalid_argument("reduced_indefinite_forms: bad D");
  std::vector<Form> out;
  const std::int64_t s = isqrt64(D);
  for (std::int64_t b = 1; b <= s; ++b) {
    if (mod_pos(b - D, 2) != 0) continue;
    const std::int64_t ac = (D - b * b) / 4;  // a * |c| with a c < 0
    for (std::int64_t a = 1; a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      for (std::int64_t aa : {a, ac / a}) {
        for (int sign : {1, -1}) {
          Form f{sign * aa, b, -sign * (ac / aa)};
          if (std::gcd(std::gcd(aa, b), ac / aa) != 1) continue;
          if (is_reduced_indefinite(f)) out.push_back(f);
        }
        if (aa == ac / aa) break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ClassNumberReport class_number_imaginary(std::int64_t D) {
  if (D >= 0) throw std::invalid_argument("class_number_imaginary: D must be negative");
  check_discriminant(D);
  const std::vector<Form> forms = reduced_definite_forms(D);
  ClassNumberReport r;
  r.discriminant = D;
  r.radicand = mod_pos(D, 4) == 0 ? D / 4 : D;
  r.h = static_cast<std::int64_t>(forms.size());
  r.narrow_h = r.h;
  r.h2 = two_part(r.h);
  r.group_structure = invariant_factors(forms, identity_form(D), r.h);
  for (std::int64_t f : r.group_structure) {
    if (f % 2 == 0) ++r.two_rank;
  }
  return r;
}

ClassNumberReport class_number_real(std::int64_t d) {
  if (d <= 1) throw std::invalid_argument("class_number_real: d must exceed 1");
  const std::int64_t D = fundamental_discriminant(d);
  check_discriminant(D);
  const std::vector<Form> forms = reduced_indefinite_forms(D);
  std::set<Form> unseen(forms.begin(), forms.end());
  std::int64_t cycles = 0;
  while (!unseen.empty()) {
    const Form start = *unseen.begin();
    Form f = start;
    do {
      if (unseen.erase(f) == 0) throw std::logic_error("class_number_real: cycle left reduced set");
      f = rho_indefinite(f);
    } while (f != start);
    ++cycles;
  }
  ClassNumberReport r;
  r.discriminant = D;
  r.radicand = d;
  r.narrow_h = cycles;
  const QuadraticUnit eps = fundamental_unit(d);
  r.h = eps.norm == 1 ? cycles / 2 : cycles;
  if (eps.norm == 1 && cycles % 2 != 0) throw std::logic_error("class_number_real: odd narrow class number");
  r.h2 = two_part(r.h);
  return r;
}

ClassNumberReport class_number_of_radicand(std::int64_t d) {
  if (d < 0) return class_number_imaginary(fundamental_discriminant(d));
  return class_number_real(d);
}

ClassNumberReport ClassNumberMemo::get(std::int64_t squarefree_d) {
  const std::int64_t D = fundamental_discriminant(squarefree_d);
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(D); it != entries_.end()) return it->second;
  }
  ClassNumberReport r = class_number_of_radicand(squarefree_d);
  std::lock_guard lock(mutex_);
  entries_.emplace(D, r);
  return r;
}

std::map<std::int64_t, ClassNumberReport> ClassNumberMemo::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

void ClassNumberMemo::insert(const ClassNumberReport& r) {
  std::lock_guard lock(mutex_);
  entries_.emplace(r.discriminant, r);
}

std::size_t ClassNumberMemo::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace mqu
