#include "mqunits/arith.hpp"

#include <array>
#include <cstdlib>
#include <mutex>

namespace mqu {
namespace {

constexpr std::uint32_t kSieveBound = 1u << 20;
constexpr std::int64_t kMaxTrialInput = 1'000'000'000'000'000'000LL;

const std::vector<std::uint32_t>& sieve_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSieveBound + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kSieveBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kSieveBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

SquarefreeInt::SquarefreeInt(std::int64_t value) : value_(value) {
  if (value == 0) throw std::invalid_argument("squarefree integer must be nonzero");
  if (!is_squarefree(value)) {
    throw std::invalid_argument("not squarefree: " + std::to_string(value));
  }
}

SquarefreeDecomposition squarefree_decompose(std::int64_t n) {
  if (n == 0) throw std::invalid_argument("squarefree_decompose: zero input");
  if (n > kMaxTrialInput || n < -kMaxTrialInput) {
    throw std::domain_error("squarefree_decompose: input outside supported range");
  }
  const int sign = n < 0 ? -1 : 1;
  std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
  std::int64_t part = 1;
  std::int64_t factor = 1;
  for (std::uint32_t p : sieve_primes()) {
    if (std::uint64_t{p} * p > m) break;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) factor *= p;
    if (e % 2 == 1) part *= p;
  }
  if (m > 1) {
    // Cofactor has no prime below the sieve bound; it is p, p^2 or p*p'.
    Int cm{static_cast<unsigned long>(m)};
    if (auto r = perfect_square_root(cm); r && m > std::uint64_t{kSieveBound} * kSieveBound) {
      factor *= static_cast<std::int64_t>(r->get_ui());
    } else {
      part *= static_cast<std::int64_t>(m);
    }
  }
  // The constructor re-validates, so build the value directly.
  return SquarefreeDecomposition{SquarefreeInt(sign * part), factor};
}

bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  std::uint64_t m = static_cast<std::uint64_t>(n < 0 ? -n : n);
  for (std::uint32_t p : sieve_primes()) {
    const std::uint64_t pp = std::uint64_t{p} * p;
    if (pp > m) return true;
    if (m % pp == 0) return false;
    if (m % p == 0) m /= p;
  }
  // Remaining cofactor has only primes above the sieve bound.
  return !is_perfect_square(Int{static_cast<unsigned long>(m)});
}

std::optional<Int> perfect_square_root(const Int& n) {
  if (sgn(n) < 0) return std::nullopt;
  Int root;
  Int rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (sgn(rem) != 0) return std::nullopt;
  return root;
}

int kronecker_symbol(std::int64_t a, std::int64_t n) {
  if (n == 0) throw std::invalid_argument("kronecker_symbol: modulus must be nonzero");
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (a % 2 == 0) return 0;
    const std::int64_t r8 = ((a % 8) + 8) % 8;
    if ((twos & 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a/n) for odd positive n.
  std::int64_t x = ((a % n) + n) % n;
  std::int64_t m = n;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const std::int64_t r8 = m % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound <= kSieveBound) {
    for (std::uint32_t p : sieve_primes()) {
      if (p > bound) break;
      out.push_back(p);
    }
    return out;
  }
  for (std::uint64_t n = 2; n <= bound; ++n) {
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

int valuation(const Int& n, unsigned long prime) {
  if (sgn(n) == 0) throw std::invalid_argument("valuation of zero");
  Int m = abs(n);
  int e = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), prime)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), prime);
    ++e;
  }
  return e;
}

std::optional<int> exact_log2(const Int& n) {
  if (sgn(n) <= 0) return std::nullopt;
  if (mpz_popcount(n.get_mpz_t()) != 1) return std::nullopt;
  return static_cast<int>(mpz_scan1(n.get_mpz_t(), 0));
}

Int pow10(unsigned exponent) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

RationalInterval sqrt_interval_digits(const Int& n, unsigned digits) {
  if (sgn(n) <= 0) throw std::invalid_argument("sqrt_interval: n must be positive");
  if (auto r = perfect_square_root(n)) return {Rat(*r), Rat(*r)};
  const Int scale = pow10(digits);
  Int scaled = n * scale * scale;
  Int root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rat lo(root, scale);
  Rat hi(root + 1, scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

RationalInterval sqrt_interval(const Int& n, const Rat& eps) {
  if (sgn(eps) <= 0) throw std::invalid_argument("sqrt_interval: eps must be positive");
  for (unsigned digits = 8;; digits *= 2) {
    RationalInterval iv = sqrt_interval_digits(n, digits);
    if (iv.width() <= eps) return iv;
  }
}

std::string to_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  Rat r;
  if (slash == std::string::npos) {
    r = Rat(Int(text));
  } else {
    r = Rat(Int(text.substr(0, slash)), Int(text.substr(slash + 1)));
    if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + text);
    r.canonicalize();
  }
  return r;
}

}  // namespace mqu
