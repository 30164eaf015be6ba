#pragma once

// Exact integer and rational primitives shared by every other module.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mqu {

using Int = mpz_class;
using Rat = mpq_class;

/// Raised when a computed object contradicts a predicted mathematical claim.
/// The pipeline turns these into failed checks; library callers may let them
/// propagate.
class Falsified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonzero integer with no repeated prime factor.
class SquarefreeInt {
 public:
  explicit SquarefreeInt(std::int64_t value);

  std::int64_t value() const { return value_; }

  friend bool operator==(const SquarefreeInt&, const SquarefreeInt&) = default;
  friend auto operator<=>(const SquarefreeInt&, const SquarefreeInt&) = default;

 private:
  std::int64_t value_;
};

struct SquarefreeDecomposition {
  SquarefreeInt squarefree;
  std::int64_t factor;  // n = squarefree * factor^2, factor > 0
};

/// Trial division against the shared sieve. Supports |n| <= 1e18.
SquarefreeDecomposition squarefree_decompose(std::int64_t n);

bool is_squarefree(std::int64_t n);

/// Nonnegative k with k*k == n, or nullopt (negative input gives nullopt).
std::optional<Int> perfect_square_root(const Int& n);

inline bool is_perfect_square(const Int& n) { return perfect_square_root(n).has_value(); }

/// Kronecker symbol (a/n). Throws std::invalid_argument for n == 0.
int kronecker_symbol(std::int64_t a, std::int64_t n);

/// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Ascending primes p <= bound.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Exponent of `prime` in n (n != 0).
int valuation(const Int& n, unsigned long prime);

/// Floor of log2 when n is an exact power of two, otherwise nullopt.
std::optional<int> exact_log2(const Int& n);

struct RationalInterval {
  Rat lo;
  Rat hi;

  Rat width() const { return hi - lo; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const RationalInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
};

/// Interval [lo, hi] with lo^2 <= n <= hi^2 and hi - lo <= eps, from scaled
/// integer square roots on the ladder of 8, 16, 32, ... decimal digits.
RationalInterval sqrt_interval(const Int& n, const Rat& eps);

/// One rung of that ladder: [isqrt(n 10^2k) / 10^k, (isqrt(n 10^2k) + 1) / 10^k].
RationalInterval sqrt_interval_digits(const Int& n, unsigned digits);

Int pow10(unsigned exponent);

std::string to_string(const Rat& r);
Rat parse_rational(const std::string& text);

}  // namespace mqu
