#include <numeric>

#include "mqunits/units.hpp"

namespace mqu {
namespace {

// A cell is sign * prod eps^e, where the sign is fixed or one of the
// symbols u, v, r, s, t resolved per pair. Exponents use the labels
// 2, p, q, 2p, 2q, pq, 2pq.
struct CellSpec {
  int sign = 1;
  char symbol = 0;
  std::vector<std::pair<const char*, Rat>> e;
  bool blank = false;
};

struct RowSpec {
  std::vector<std::pair<const char*, Rat>> unit;
  std::vector<CellSpec> cells;  // tau1, tau2, tau3, then the six norms
};

const char* const kColumns[] = {"tau1",      "tau2",      "tau3",      "1+tau1",    "1+tau2",
                                "1+tau3",    "1+tau1tau2", "1+tau1tau3", "1+tau2tau3"};

CellSpec c(int sign, std::vector<std::pair<const char*, Rat>> e = {}) { return {sign, 0, std::move(e), false}; }
CellSpec sym(char s, std::vector<std::pair<const char*, Rat>> e) { return {1, s, std::move(e), false}; }
const CellSpec blank{1, 0, {}, true};

std::vector<RowSpec> table_rows(Condition cond) {
  const Rat h(1, 2), f(1, 4), one(1), two(2);
  const Rat mh(-1, 2), mf(-1, 4), mone(-1);
  const bool c1 = cond == Condition::Cond1;
  std::vector<RowSpec> rows;
  rows.push_back({{{"2", one}},
                  {c(-1, {{"2", mone}}), c(1, {{"2", one}}), c(1, {{"2", one}}), c(-1), c(1, {{"2", two}}),
                   c(1, {{"2", two}}), c(-1), c(-1), c(1, {{"2", two}})}});
  rows.push_back({{{"p", one}},
                  {c(1, {{"p", one}}), c(-1, {{"p", mone}}), c(1, {{"p", one}}), c(1, {{"p", two}}), c(-1),
                   c(1, {{"p", two}}), c(-1), c(1, {{"p", two}}), c(-1)}});
  rows.push_back({{{"q", h}},
                  {c(-1, {{"q", h}}), c(1, {{"q", h}}), c(-1, {{"q", mh}}), c(-1, {{"q", one}}), c(1, {{"q", one}}),
                   c(-1), c(-1, {{"q", one}}), c(1), c(-1)}});
  rows.push_back({{{"2q", h}},
                  {c(1, {{"2q", mh}}), c(1, {{"2q", h}}), c(-1, {{"2q", mh}}), c(1), c(1, {{"2q", one}}), c(-1),
                   c(1), c(-1, {{"2q", one}}), c(-1)}});
  if (c1) {
    rows.push_back({{{"pq", h}},
                    {c(1, {{"pq", h}}), c(-1, {{"pq", mh}}), c(1, {{"pq", mh}}), c(1, {{"pq", one}}), c(-1), c(1),
                     c(-1), c(1), c(-1, {{"pq", one}})}});
    rows.push_back({{{"2pq", h}},
                    {c(1, {{"2pq", mh}}), c(1, {{"2pq", mh}}), c(-1, {{"2pq", mh}}), c(1), c(1), c(-1),
                     c(1, {{"2pq", one}}), c(-1, {{"2pq", one}}), c(-1, {{"2pq", one}})}});
  } else {
    rows.push_back({{{"pq", h}},
                    {c(-1, {{"pq", h}}), c(-1, {{"pq", mh}}), c(1, {{"pq", mh}}), c(-1, {{"pq", one}}), c(-1), c(1),
                     c(1), c(-1), c(-1, {{"pq", one}})}});
    rows.push_back({{{"2pq", h}},
                    {c(-1, {{"2pq", mh}}), c(1, {{"2pq", mh}}), c(-1, {{"2pq", mh}}), c(-1), c(1), c(-1),
                     c(-1, {{"2pq", one}}), c(1, {{"2pq", one}}), c(-1, {{"2pq", one}})}});
  }
  rows.push_back({{{"2", h}, {"p", h}, {"2p", h}},
                  {sym('u', {{"p", h}, {"2", mh}, {"2p", mh}}), sym('v', {{"2", h}, {"p", mh}, {"2p", mh}}),
                   c(1, {{"2", h}, {"p", h}, {"2p", h}}), sym('u', {{"p", one}}), sym('v', {{"2", one}}),
                   c(1, {{"2", one}, {"p", one}, {"2p", one}}), blank, blank, blank}});
  if (c1) {
    rows.push_back({{{"p", h}, {"2q", f}, {"pq", f}, {"2pq", f}},
                    {sym('r', {{"p", h}, {"pq", f}, {"2q", mf}, {"2pq", mf}}),
                     sym('s', {{"2q", f}, {"p", mh}, {"pq", mf}, {"2pq", mf}}),
                     sym('t', {{"p", h}, {"2q", mf}, {"pq", mf}, {"2pq", mf}}), sym('r', {{"p", one}, {"pq", h}}),
                     sym('s', {{"2q", h}}), sym('t', {{"p", one}}), blank, blank, blank}});
  } else {
    rows.push_back({{{"2", h}, {"p", h}, {"q", f}, {"pq", f}, {"2pq", f}},
                    {sym('r', {{"p", h}, {"q", f}, {"pq", f}, {"2", mh}, {"2pq", mf}}),
                     sym('s', {{"2", h}, {"q", f}, {"p", mh}, {"pq", mf}, {"2pq", mf}}),
                     sym('t', {{"2", h}, {"p", h}, {"q", mf}, {"pq", mf}, {"2pq", mf}}),
                     sym('r', {{"p", one}, {"q", h}, {"pq", h}}), sym('s', {{"2", one}, {"q", h}}),
                     sym('t', {{"2", one}, {"p", one}}), blank, blank, blank}});
  }
  return rows;
}

std::int64_t resolve(const char* label, std::int64_t p, std::int64_t q) {
  const std::string l(label);
  if (l == "2") return 2;
  if (l == "p") return p;
  if (l == "q") return q;
  if (l == "2p") return 2 * p;
  if (l == "2q") return 2 * q;
  if (l == "pq") return p * q;
  if (l == "2pq") return 2 * p * q;
  throw std::logic_error("norm table: unknown label " + l);
}

ExponentMap to_map(const std::vector<std::pair<const char*, Rat>>& e, std::int64_t p, std::int64_t q) {
  ExponentMap m;
  for (const auto& [l, x] : e) m[resolve(l, p, q)] += x;
  return m;
}

std::string with_sign(const std::string& sign, const std::string& body) {
  if (body == "1") return sign.empty() ? "1" : sign + "1";
  return sign + body;
}

}  // namespace

NormTable norm_table(const FieldBasis& field, const ConditionClass& cond) {
  if (!cond.applicable()) throw std::invalid_argument("norm_table: pair not in Cond1/Cond2");
  const std::int64_t p = cond.p, q = cond.q;
  if (field.generators() != std::vector<std::int64_t>{2, p, q}) {
    throw std::invalid_argument("norm_table: field must be Q(sqrt(2), sqrt(p), sqrt(q))");
  }
  const Automorphism t1 = flip(field, {2}), t2 = flip(field, {p}), t3 = flip(field, {q});
  const Automorphism t12 = flip(field, {2, p}), t13 = flip(field, {2, q}), t23 = flip(field, {p, q});
  const Automorphism* conj[] = {&t1, &t2, &t3, &t1, &t2, &t3, &t12, &t13, &t23};

  NormTable table;
  table.condition = cond.tag;
  for (const RowSpec& spec : table_rows(cond.tag)) {
    const ExponentMap ue = to_map(spec.unit, p, q);
    NormRow row;
    row.unit = unit_label(ue, p, q);
    auto unit = unit_from_exponents(field, ue);
    if (!unit) throw Falsified("norm_table: " + row.unit + " is not in " + to_string(field));
    for (std::size_t col = 0; col < spec.cells.size(); ++col) {
      const CellSpec& cs = spec.cells[col];
      if (cs.blank) continue;
      NormCell cell;
      cell.column = kColumns[col];
      const ExponentMap e = to_map(cs.e, p, q);
      const std::string body = unit_label(e, p, q);
      cell.expected = cs.symbol ? "(-1)^" + std::string(1, cs.symbol) + "*" + body
                                : with_sign(cs.sign < 0 ? "-" : "", body);
      FieldElement value = apply_automorphism(*unit, *conj[col]);
      if (col >= 3) value = *unit * value;
      const int s = sign_at_identity(value);
      cell.computed = with_sign(s < 0 ? "-" : "", body);

      std::int64_t D = 1;
      for (const auto& [d, x] : e) D = std::lcm(D, x.get_den().get_si());
      FieldElement rhs = FieldElement::rational(field, Rat(1));
      for (const auto& [d, x] : e) {
        rhs = rhs * power(FieldElement::from_unit(field, fundamental_unit(d)), Int(x * D).get_si());
      }
      if (D % 2 == 1 && s < 0) rhs = -rhs;
      bool ok = power(value, D) == rhs;
      if (cs.symbol) {
        const std::string key(1, cs.symbol);
        const int bit = s < 0 ? 1 : 0;
        auto [it, inserted] = table.sign_exponents.emplace(key, bit);
        if (!inserted && it->second != bit) ok = false;
      } else if (s != cs.sign) {
        ok = false;
      }
      cell.pass = ok;
      if (!ok) ++table.mismatches;
      row.cells.push_back(std::move(cell));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mqu
