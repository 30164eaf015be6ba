#pragma once

// Kuroda-type 2-class number formulas for the multiquadratic fields built on
// a prime pair, and the class group structures they imply.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mqunits/arith.hpp"
#include "mqunits/quadratic.hpp"

namespace mqu {

/// h2 = 2^(q_log2 - v_exponent) * prod of the subfield h2 values.
struct KurodaInstance {
  int degree = 4;
  int v_exponent = 2;
  std::vector<std::pair<std::int64_t, std::int64_t>> subfield_h2;  // (radicand, h2)
  int q_log2 = 0;
};

/// Exact value of the formula, possibly non-integral.
Rat kuroda_value(const KurodaInstance& k);
/// Throws Falsified unless the value is a positive integer.
std::int64_t kuroda_h2(const KurodaInstance& k);

/// Radicands of the quadratic subfields in formula order.
std::vector<std::int64_t> kuroda_radicands(int degree, std::int64_t p, std::int64_t q);

/// Q(sqrt(d1), sqrt(d2)) with subfields d1, d2, d1 d2.
KurodaInstance kuroda_degree4(std::int64_t d1, std::int64_t d2, int q_log2, ClassNumberMemo& memo);
/// Q(sqrt(2), sqrt(p), sqrt(q)).
KurodaInstance kuroda_degree8(std::int64_t p, std::int64_t q, int q_log2, ClassNumberMemo& memo);
/// Q(sqrt(2), sqrt(p), sqrt(q), i).
KurodaInstance kuroda_degree16(std::int64_t p, std::int64_t q, int q_log2, ClassNumberMemo& memo);

struct GroupLabel {
  enum class Kind { Trivial, Cyclic, Type22, Quaternion, Dihedral, Semidihedral };
  Kind kind = Kind::Trivial;
  int log2_order = 0;

  static GroupLabel trivial() { return {}; }
  static GroupLabel cyclic(int log2_order);
  static GroupLabel type22() { return {Kind::Type22, 2}; }
  static GroupLabel quaternion(int log2_order);

  Int order() const;
  friend bool operator==(const GroupLabel&, const GroupLabel&) = default;
};

/// "1", "Z/8", "(2,2)", "Q_3", "D_4", "S_4".
std::string to_string(const GroupLabel& g);
GroupLabel parse_group_label(const std::string& text);

struct StructureReport {
  int m = 0;                    // h2(-pq) = 2^m
  GroupLabel cl2_genus_base;    // Q(sqrt(2pq), i)
  GroupLabel cl2_L;             // Q(sqrt(2), sqrt(pq), i)
  GroupLabel cl2_F;             // Q(sqrt(p), sqrt(2q), i)
  GroupLabel cl2_K;             // Q(sqrt(2p), sqrt(q), i)
  GroupLabel gal_F2;            // second 2-class group of F (and of K)
  GroupLabel gal_k2;            // second 2-class group of Q(sqrt(2pq), i)
  int h2_Ln_plus_log2 = 0;
  std::pair<int, int> iwasawa{1, 0};  // (lambda, nu)

  /// log2 h2(L_n) = n + m - 1 for L_n = Q(sqrt(p), sqrt(q), zeta_{2^(n+2)}).
  int h2_Ln_log2(int n) const;
  friend bool operator==(const StructureReport&, const StructureReport&) = default;
};

/// Throws std::invalid_argument for pairs outside both conditions and
/// Falsified for Cond2 with h2(-pq) != 2.
StructureReport predict_structures(const ConditionClass& cond, ClassNumberMemo& memo);

struct H2Claim {
  std::int64_t radicand = 0;
  std::string label;        // "2", "-p", "-2pq", ...
  std::int64_t claimed = 0;  // 0 when only h2 >= 4 is claimed
  std::int64_t computed = 0;
  bool pass = false;
};

/// The 15 quadratic subfields of Q(sqrt(2), sqrt(p), sqrt(q), i) in formula order.
std::vector<H2Claim> crosscheck_quadratic_h2(const ConditionClass& cond, ClassNumberMemo& memo);

}  // namespace mqu
