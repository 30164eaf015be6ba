#pragma once

// Multiquadratic fields Q(sqrt(g1), ..., sqrt(gk)) with exact rational
// coordinates over the basis of square roots of the reduced subset products.
// Basis slot S (a bitmask over the generators) holds the principal root of
// r_S = squarefree part of prod_{i in S} g_i, so sqrt(-a) = i sqrt(a).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mqunits/arith.hpp"
#include "mqunits/quadratic.hpp"

namespace mqu {

class FieldBasis {
 public:
  /// Throws std::invalid_argument unless the generators are squarefree,
  /// different from 1 and independent modulo squares. At most 5 generators.
  explicit FieldBasis(std::vector<std::int64_t> generators);

  const std::vector<std::int64_t>& generators() const { return data_->generators; }
  std::size_t rank() const { return data_->generators.size(); }
  std::size_t degree() const { return data_->radicands.size(); }
  bool is_cm() const { return data_->cm; }

  std::int64_t radicand(std::size_t mask) const { return data_->radicands[mask]; }
  const std::vector<std::int64_t>& radicands() const { return data_->radicands; }
  std::optional<std::size_t> mask_of(std::int64_t squarefree_radicand) const;

  /// sqrt(r_S) sqrt(r_T) = factor * sqrt(r_{S xor T}).
  std::int64_t product_factor(std::size_t s, std::size_t t) const {
    return data_->factors[s * degree() + t];
  }

  friend bool operator==(const FieldBasis& a, const FieldBasis& b) {
    return a.data_ == b.data_ || a.data_->generators == b.data_->generators;
  }

 private:
  struct Data {
    std::vector<std::int64_t> generators;
    std::vector<std::int64_t> radicands;
    std::vector<std::int64_t> factors;
    bool cm = false;
  };
  std::shared_ptr<const Data> data_;
};

std::string to_string(const FieldBasis& b);

/// Signs of the generator roots; slot S is scaled by the product over S.
struct Automorphism {
  std::vector<int> signs;

  static Automorphism identity(const FieldBasis& b) { return {std::vector<int>(b.rank(), 1)}; }
  bool is_identity() const;
  friend bool operator==(const Automorphism&, const Automorphism&) = default;
};

/// Negates the roots of the listed generators and fixes the others, e.g. {2}
/// sends sqrt(2) to -sqrt(2).
Automorphism flip(const FieldBasis& b, const std::vector<std::int64_t>& flipped_generators);

class FieldElement {
 public:
  explicit FieldElement(FieldBasis basis);
  FieldElement(FieldBasis basis, std::vector<Rat> coords);

  static FieldElement rational(const FieldBasis& b, const Rat& r);
  /// Principal sqrt(n) for any nonzero integer n whose squarefree part is a basis radicand.
  static FieldElement sqrt_of(const FieldBasis& b, std::int64_t n);
  static FieldElement from_unit(const FieldBasis& b, const QuadraticUnit& u);

  const FieldBasis& basis() const { return basis_; }
  const std::vector<Rat>& coords() const { return coords_; }
  const Rat& coord(std::size_t mask) const { return coords_[mask]; }
  /// Coefficient of sqrt(r) for a basis radicand r.
  Rat coeff(std::int64_t radicand) const;

  bool is_zero() const;
  bool is_rational() const;
  /// All coordinates sit on positive radicands.
  bool is_real() const;

  FieldElement operator-() const;
  friend FieldElement operator+(const FieldElement& u, const FieldElement& v);
  friend FieldElement operator-(const FieldElement& u, const FieldElement& v);
  friend FieldElement operator*(const FieldElement& u, const FieldElement& v);
  friend FieldElement operator*(const Rat& r, const FieldElement& u);
  friend bool operator==(const FieldElement& u, const FieldElement& v);

 private:
  FieldBasis basis_;
  std::vector<Rat> coords_;
};

FieldElement multiply(const FieldElement& u, const FieldElement& v);
FieldElement power(const FieldElement& u, std::int64_t e);
FieldElement invert(const FieldElement& u);
FieldElement apply_automorphism(const FieldElement& u, const Automorphism& t);
/// u * t(u); throws std::logic_error if the result is not fixed by t.
FieldElement relative_norm(const FieldElement& u, const Automorphism& t);
/// Product of all conjugates, a rational number.
Rat absolute_norm(const FieldElement& u);

/// Sign of the real value of u when sqrt(g_i) is sent to signs[i] * sqrt(g_i).
/// Requires u real and nonzero.
int sign_at_embedding(const FieldElement& u, const Automorphism& signs);
int sign_at_identity(const FieldElement& u);
/// Numeric value at the identity embedding, to within 10^-digits.
RationalInterval enclose(const FieldElement& u, unsigned digits);

std::optional<FieldElement> sqrt_in_field(const FieldElement& u);
std::optional<FieldElement> fourth_root_in_field(const FieldElement& u);

/// Primitive n-th root of unity for n in {3, 4, 8, 24}.
FieldElement zeta(int n, const FieldBasis& b);
/// Order of the group of roots of unity in the field.
int torsion_order(const FieldBasis& b);

/// Re-express u in a basis containing every radicand u uses.
FieldElement embed(const FieldElement& u, const FieldBasis& target);

/// "c/d*sqrt(r)" terms in mask order joined by " + "; zero is "0/1*sqrt(1)".
std::string to_string(const FieldElement& u);
FieldElement parse_field_element(const std::string& text, const FieldBasis& b);

/// Checks (u1 sqrt(surd1) + u2 sqrt(surd2))^2 == multiplier * eps_d exactly.
bool witness_identity_holds(const DecompositionWitness& w);

}  // namespace mqu
