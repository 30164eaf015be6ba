#pragma once

// Real quadratic units, prime-pair classification, the Pell decomposition
// witnesses of the norm +1 units, and class numbers of quadratic fields.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mqunits/arith.hpp"

namespace mqu {

/// Fundamental unit (x + y sqrt(d)) / denom of the maximal order of Q(sqrt(d)).
struct QuadraticUnit {
  std::int64_t d = 0;
  Int x;
  Int y;
  int denom = 1;  // 2 only in the semi-integer case d = 1 (mod 4)
  int norm = 1;

  Rat rational_part() const { return Rat(x, denom); }
  Rat surd_part() const { return Rat(y, denom); }

  friend bool operator==(const QuadraticUnit&, const QuadraticUnit&) = default;
};

/// Continued fraction of sqrt(d), or of (1 + sqrt(d))/2 when d = 1 (mod 4).
QuadraticUnit fundamental_unit(std::int64_t d);

/// Length of the period found while computing the fundamental unit.
int continued_fraction_period(std::int64_t d);

enum class Condition { Cond1, Cond2, NotApplicable };

struct ConditionClass {
  Condition tag = Condition::NotApplicable;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::string reason;

  bool applicable() const { return tag != Condition::NotApplicable; }
  friend bool operator==(const ConditionClass&, const ConditionClass&) = default;
};

std::string to_string(Condition c);
Condition parse_condition(const std::string& s);

/// p = 5 (mod 8), q = 3 (mod 8), split by the Legendre symbol (p/q).
ConditionClass classify_pair(std::int64_t p, std::int64_t q);

enum class RadicandTag { TwoPQ, PQ, TwoQ, Q };

std::string to_string(RadicandTag t);
RadicandTag parse_radicand_tag(const std::string& s);
std::int64_t radicand_of(RadicandTag t, std::int64_t p, std::int64_t q);

/// One system x+1 = plus_shape * u^2, x-1 = minus_shape * v^2 tested against
/// the unit coordinate x.
struct CandidateSystem {
  std::string id;
  std::int64_t plus_shape = 1;
  std::int64_t minus_shape = 1;
  bool holds = false;

  friend bool operator==(const CandidateSystem&, const CandidateSystem&) = default;
};

/// Integers realizing sqrt(multiplier * eps) = u1 sqrt(surd1) + u2 sqrt(surd2).
struct DecompositionWitness {
  RadicandTag radicand_tag = RadicandTag::TwoPQ;
  std::int64_t radicand = 0;
  std::string case_id;
  Int u1;
  Int u2;
  std::int64_t surd1 = 1;
  std::int64_t surd2 = 1;
  int multiplier = 2;  // 1 when the unit itself is the square
  std::string relation;  // e.g. "2 = 2q*u2^2 - p*u1^2" with p, q substituted
  std::vector<CandidateSystem> candidates;
  std::vector<std::string> excluded_shapes;  // shapes ruled out up front, all verified absent

  friend bool operator==(const DecompositionWitness&, const DecompositionWitness&) = default;
};

/// Throws Falsified when the predicted system is not the unique one that holds.
DecompositionWitness lemma_decompose(std::int64_t p, std::int64_t q, RadicandTag tag,
                                     const ConditionClass& cond);

struct ClassNumberReport {
  std::int64_t discriminant = 0;  // fundamental discriminant
  std::int64_t radicand = 0;      // squarefree d with Q(sqrt(d))
  std::int64_t h = 0;
  std::int64_t h2 = 0;
  std::int64_t narrow_h = 0;      // real fields only; equals h for imaginary ones
  int two_rank = 0;               // imaginary fields only
  std::vector<std::int64_t> group_structure;  // invariant factors, imaginary only

  bool imaginary() const { return discriminant < 0; }
  friend bool operator==(const ClassNumberReport&, const ClassNumberReport&) = default;
};

inline constexpr std::int64_t kMaxAbsDiscriminant = 80'000'000;

std::int64_t fundamental_discriminant(std::int64_t squarefree_d);
bool is_fundamental_discriminant(std::int64_t D);

/// Reduced positive definite forms and their group under Gauss composition.
ClassNumberReport class_number_imaginary(std::int64_t D);

/// Wide class number from the cycles of reduced indefinite forms.
ClassNumberReport class_number_real(std::int64_t d);

/// Dispatches on the sign of the squarefree radicand.
ClassNumberReport class_number_of_radicand(std::int64_t d);

/// Append-only memo keyed by fundamental discriminant; safe to share.
class ClassNumberMemo {
 public:
  ClassNumberReport get(std::int64_t squarefree_d);
  std::map<std::int64_t, ClassNumberReport> snapshot() const;
  void insert(const ClassNumberReport& r);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::int64_t, ClassNumberReport> entries_;
};

// Binary quadratic forms a x^2 + b xy + c y^2 with small coefficients.
struct Form {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  friend auto operator<=>(const Form&, const Form&) = default;
};

Form reduce_definite(Form f);
Form compose_definite(const Form& f, const Form& g);
Form identity_form(std::int64_t D);
std::vector<Form> reduced_definite_forms(std::int64_t D);

bool is_reduced_indefinite(const Form& f);
Form rho_indefinite(const Form& f);
std::vector<Form> reduced_indefinite_forms(std::int64_t D);

}  // namespace mqu
