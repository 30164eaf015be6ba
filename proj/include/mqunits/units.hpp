#pragma once

// Fundamental systems of units of real multiquadratic fields and their
// extensions by i, expressed over the fundamental units of the real
// quadratic subfields.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mqunits/field.hpp"
#include "mqunits/quadratic.hpp"

namespace mqu {

/// Exponents of base units eps_d, keyed by d; absent keys are zero.
using ExponentMap = std::map<std::int64_t, Rat>;

/// witness^D = zeta^torsion_exponent * prod eps_d^(D e_d), where D is the
/// least common denominator of the exponents and zeta generates the torsion.
struct UnitExpr {
  int torsion_exponent = 0;
  ExponentMap exponents;
  FieldElement witness;

  int root_degree() const;
  friend bool operator==(const UnitExpr&, const UnitExpr&) = default;
};

struct FsuResult {
  FieldBasis field;
  int torsion_order = 2;
  std::vector<std::int64_t> base_radicands;  // positive radicands, basis mask order
  std::vector<UnitExpr> generators;
  int q_index_log2 = 0;

  std::string torsion_label() const;
  friend bool operator==(const FsuResult&, const FsuResult&) = default;
};

/// Generator of the roots of unity of the field (order 2, 4, 6, 8, 12 or 24).
FieldElement torsion_generator(const FieldBasis& b, int order);

/// Positive radicands of the nontrivial basis slots.
std::vector<std::int64_t> real_base_radicands(const FieldBasis& b);

/// The positive real root of prod eps_d^(D e_d) of degree D, if it lies in b.
std::optional<FieldElement> unit_from_exponents(const FieldBasis& b, const ExponentMap& e);

/// Checks the defining relation of u, including the torsion exponent.
bool verify_unit_expr(const UnitExpr& u, const FieldBasis& b, int torsion_order);

/// Dense rows over `columns`; throws std::invalid_argument on a foreign key.
std::vector<std::vector<Rat>> exponent_matrix(const std::vector<UnitExpr>& gens,
                                              const std::vector<std::int64_t>& columns);
Rat determinant(std::vector<std::vector<Rat>> m);
/// Row lattices of two nonsingular square matrices coincide.
bool same_lattice(const std::vector<std::vector<Rat>>& a, const std::vector<std::vector<Rat>>& b);

/// (W_K : W) where W is generated by the roots of unity of the quadratic subfields.
int torsion_index(const FieldBasis& b, int torsion_order);

/// -log2|det| plus log2 of the torsion index; throws std::logic_error unless
/// the index is a power of two.
int unit_index_log2(const FsuResult& fsu);
Int unit_index(const FsuResult& fsu);

FsuResult fsu_quadratic(std::int64_t d);

/// The biquadratic configurations (p,q), (2,q), (p,2q), (q,2p), (2,pq), (2,p).
std::vector<std::pair<std::int64_t, std::int64_t>> biquadratic_configurations(std::int64_t p, std::int64_t q);

/// Predicted exponent lists for Q(sqrt(d1), sqrt(d2)).
std::vector<ExponentMap> predicted_biquadratic(std::int64_t d1, std::int64_t d2, const ConditionClass& cond);

/// Materializes the predicted list; throws Falsified when a root is missing.
FsuResult fsu_biquadratic(const SquarefreeInt& d1, const SquarefreeInt& d2, const ConditionClass& cond);

/// Joins three subfield FSUs and adjoins square roots until no nontrivial
/// subset product of the generators is a square.
FsuResult wada_fsu(const FieldBasis& field, const std::vector<FsuResult>& subfield_fsus);

/// Recursive form: the three subfields drop, respectively, the last
/// generator, the one before it, and replace both by their product.
FsuResult fsu_real(const FieldBasis& field);

struct AziziResult {
  FsuResult fsu;
  int n0 = 1;                          // 2^n0 = 2-part of the torsion order
  std::optional<UnitExpr> epsilon;     // the unit with (2 + mu) eps a square
  std::vector<std::size_t> subset;     // indices of the real generators in eps
  std::optional<FieldElement> square_root;  // of (2 + mu) eps, in the real field
};

/// Throws Falsified when more than one subset qualifies.
AziziResult azizi_extend(const FsuResult& real_fsu, const FieldBasis& cm_basis);

/// Generators listed in the theorems for the degree 8 real field (2, p, q).
std::vector<ExponentMap> theorem_real_list(const ConditionClass& cond);
/// Same for the field with i adjoined, exponents only (torsion parts dropped).
std::vector<ExponentMap> theorem_cm_list(const ConditionClass& cond);

/// Multisets of exponent maps agree.
bool same_generator_labels(const std::vector<UnitExpr>& gens, const std::vector<ExponentMap>& expected);

/// "eps_p^(1/2)*eps_2q^(1/4)" with symbolic labels for the pair (p, q).
std::string unit_label(const ExponentMap& e, std::int64_t p, std::int64_t q);
std::string radicand_label(std::int64_t d, std::int64_t p, std::int64_t q);

// Norm tables.
struct NormCell {
  std::string column;    // "tau1", ..., "1+tau2tau3"
  std::string expected;  // as printed, e.g. "(-1)^u*eps_p"
  std::string computed;  // concrete form, e.g. "-eps_p"
  bool pass = false;
};

struct NormRow {
  std::string unit;  // e.g. "sqrt(eps_q)"
  std::vector<NormCell> cells;
};

struct NormTable {
  Condition condition = Condition::NotApplicable;
  std::vector<NormRow> rows;
  std::map<std::string, int> sign_exponents;  // u, v, r, s, t in {0, 1}
  int mismatches = 0;
};

NormTable norm_table(const FieldBasis& field, const ConditionClass& cond);

}  // namespace mqu
