#include "mqunits/classnum.hpp"

#include <stdexcept>

namespace mqu {
namespace {

std::string label(std::int64_t d, std::int64_t p, std::int64_t q) {
  const std::int64_t a = d < 0 ? -d : d;
  std::string body;
  if (a == 1) body = "1";
  else if (a == 2) body = "2";
  else if (a == p) body = "p";
  else if (a == q) body = "q";
  else if (a == 2 * p) body = "2p";
  else if (a == 2 * q) body = "2q";
  else if (a == p * q) body = "pq";
  else if (a == 2 * p * q) body = "2pq";
  else body = std::to_string(a);
  return d < 0 ? "-" + body : body;
}

KurodaInstance build(int degree, int v, const std::vector<std::int64_t>& radicands, int q_log2,
                     ClassNumberMemo& memo) {
  KurodaInstance k;
  k.degree = degree;
  k.v_exponent = v;
  k.q_log2 = q_log2;
  for (std::int64_t d : radicands) k.subfield_h2.emplace_back(d, memo.get(d).h2);
  return k;
}

int log2_exact(std::int64_t n) {
  int k = 0;
  while (n > 1 && n % 2 == 0) n /= 2, ++k;
  if (n != 1) throw std::logic_error("not a power of two");
  return k;
}

}  // namespace

Rat kuroda_value(const KurodaInstance& k) {
  const std::size_t expected = k.degree == 4 ? 3 : k.degree == 8 ? 7 : k.degree == 16 ? 15 : 0;
  if (expected == 0 || k.subfield_h2.size() != expected) {
    throw std::invalid_argument("kuroda: degree and subfield count disagree");
  }
  Rat value(1);
  const int e = k.q_log2 - k.v_exponent;
  if (e >= 0) value *= Rat(Int(1) << e);
  else value /= Rat(Int(1) << -e);
  for (const auto& [d, h2] : k.subfield_h2) {
    if (h2 <= 0) throw std::invalid_argument("kuroda: nonpositive h2");
    value *= h2;
  }
  value.canonicalize();
  return value;
}

std::int64_t kuroda_h2(const KurodaInstance& k) {
  const Rat v = kuroda_value(k);
  if (v.get_den() != 1 || v <= 0) {
    throw Falsified("kuroda: degree " + std::to_string(k.degree) + " with q = 2^" + std::to_string(k.q_log2) +
                    " gives " + v.get_str());
  }
  return v.get_num().get_si();
}

std::vector<std::int64_t> kuroda_radicands(int degree, std::int64_t p, std::int64_t q) {
  switch (degree) {
    case 4:
      return {p, q, p * q};
    case 8:
      return {2, p, q, 2 * p, 2 * q, p * q, 2 * p * q};
    case 16:
      return {-1, 2, -2, p, -p, q, -q, 2 * p, -2 * p, 2 * q, -2 * q, p * q, -p * q, 2 * p * q, -2 * p * q};
  }
  throw std::invalid_argument("kuroda: degree must be 4, 8 or 16");
}

KurodaInstance kuroda_degree4(std::int64_t d1, std::int64_t d2, int q_log2, ClassNumberMemo& memo) {
  const std::int64_t d3 = squarefree_decompose(d1 * d2).squarefree.value();
  return build(4, 2, {d1, d2, d3}, q_log2, memo);
}

KurodaInstance kuroda_degree8(std::int64_t p, std::int64_t q, int q_log2, ClassNumberMemo& memo) {
  return build(8, 9, kuroda_radicands(8, p, q), q_log2, memo);
}

KurodaInstance kuroda_degree16(std::int64_t p, std::int64_t q, int q_log2, ClassNumberMemo& memo) {
  return build(16, 16, kuroda_radicands(16, p, q), q_log2, memo);
}

GroupLabel GroupLabel::cyclic(int log2_order) {
  if (log2_order < 0) throw std::invalid_argument("cyclic: negative order exponent");
  return log2_order == 0 ? trivial() : GroupLabel{Kind::Cyclic, log2_order};
}

GroupLabel GroupLabel::quaternion(int log2_order) {
  // Q_2 of order 4 is not quaternion; the generalized family starts at 8.
  if (log2_order < 3) throw std::invalid_argument("quaternion: order must be at least 8");
  return {Kind::Quaternion, log2_order};
}

Int GroupLabel::order() const { return Int(1) << log2_order; }

std::string to_string(const GroupLabel& g) {
  switch (g.kind) {
    case GroupLabel::Kind::Trivial:
      return "1";
    case GroupLabel::Kind::Cyclic:
      return "Z/" + g.order().get_str();
    case GroupLabel::Kind::Type22:
      return "(2,2)";
    case GroupLabel::Kind::Quaternion:
      return "Q_" + std::to_string(g.log2_order);
    case GroupLabel::Kind::Dihedral:
      return "D_" + std::to_string(g.log2_order);
    case GroupLabel::Kind::Semidihedral:
      return "S_" + std::to_string(g.log2_order);
  }
  return "?";
}

GroupLabel parse_group_label(const std::string& text) {
  auto number = [&](std::size_t from) {
    const std::string digits = text.substr(from);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad group label: " + text);
    }
    return std::stoll(digits);
  };
  if (text == "1") return GroupLabel::trivial();
  if (text == "(2,2)") return GroupLabel::type22();
  if (text.rfind("Z/", 0) == 0) return GroupLabel::cyclic(log2_exact(number(2)));
  if (text.size() > 2 && text[1] == '_') {
    const int n = static_cast<int>(number(2));
    switch (text[0]) {
      case 'Q':
        return GroupLabel::quaternion(n);
      case 'D':
        return {GroupLabel::Kind::Dihedral, n};
      case 'S':
        return {GroupLabel::Kind::Semidihedral, n};
    }
  }
  throw std::invalid_argument("bad group label: " + text);
}

int StructureReport::h2_Ln_log2(int n) const {
  if (n < 1) throw std::invalid_argument("h2_Ln: layer must be at least 1");
  return n + m - 1;
}

StructureReport predict_structures(const ConditionClass& cond, ClassNumberMemo& memo) {
  if (!cond.applicable()) throw std::invalid_argument("predict_structures: pair not in Cond1/Cond2");
  const std::int64_t d = -cond.p * cond.q;
  // pq = 7 mod 8, so -pq is its own fundamental discriminant.
  if (fundamental_discriminant(d) != d) throw std::logic_error("predict_structures: -pq not fundamental");
  const ClassNumberReport h = memo.get(d);

  StructureReport s;
  s.m = log2_exact(h.h2);
  if (cond.tag == Condition::Cond2 && s.m != 1) {
    throw Falsified("predict_structures: Cond2 pair with h2(-pq) = " + std::to_string(h.h2));
  }
  if (cond.tag == Condition::Cond1 && s.m < 2) {
    throw Falsified("predict_structures: Cond1 pair with h2(-pq) = " + std::to_string(h.h2));
  }
  s.cl2_genus_base = GroupLabel::type22();
  s.cl2_L = GroupLabel::cyclic(s.m + 1);
  s.cl2_F = GroupLabel::type22();
  s.cl2_K = GroupLabel::type22();
  s.gal_F2 = cond.tag == Condition::Cond1 ? GroupLabel::quaternion(s.m + 1) : GroupLabel::cyclic(2);
  s.gal_k2 = GroupLabel::quaternion(s.m + 2);
  s.h2_Ln_plus_log2 = 0;
  s.iwasawa = {1, s.m - 1};
  return s;
}

std::vector<H2Claim> crosscheck_quadratic_h2(const ConditionClass& cond, ClassNumberMemo& memo) {
  if (!cond.applicable()) throw std::invalid_argument("crosscheck: pair not in Cond1/Cond2");
  const std::int64_t p = cond.p, q = cond.q;
  std::vector<H2Claim> out;
  for (std::int64_t d : kuroda_radicands(16, p, q)) {
    H2Claim c;
    c.radicand = d;
    c.label = label(d, p, q);
    c.computed = memo.get(d).h2;
    const std::string& l = c.label;
    if (l == "2" || l == "p" || l == "q" || l == "2q" || l == "-1" || l == "-2" || l == "-q") c.claimed = 1;
    else if (l == "2p" || l == "pq" || l == "2pq" || l == "-p" || l == "-2p" || l == "-2q") c.claimed = 2;
    else if (l == "-2pq") c.claimed = 4;
    else if (l == "-pq") c.claimed = cond.tag == Condition::Cond2 ? 2 : 0;
    c.pass = c.claimed == 0 ? c.computed >= 4 : c.computed == c.claimed;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mqu
