#include "mqunits/quadratic.hpp"

#include <map>
#include <utility>

namespace mqu {
namespace {

struct CfResult {
  QuadraticUnit unit;
  int period = 0;
};

// Expansion of (p0 + sqrt(d)) / q0 with the (P, Q) recurrence. The complete
// quotient at index 1 is reduced, so the period starts there.
CfResult expand(std::int64_t d, std::int64_t p0, std::int64_t q0) {
  const Int D(static_cast<long>(d));
  Int s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());

  Int P(static_cast<long>(p0));
  Int Q(static_cast<long>(q0));
  Int h_prev(1), h_prev2(0);
  Int k_prev(0), k_prev2(1);
  std::map<std::pair<Int, Int>, int> seen;
  std::vector<Int> hs, ks;

  for (int i = 0;; ++i) {
    if (i >= 1) {
      auto key = std::make_pair(P, Q);
      if (auto it = seen.find(key); it != seen.end()) {
        if (it->second != 1) throw std::logic_error("continued fraction period does not start at 1");
        const int period = i - 1;
        const Int& h = hs[static_cast<std::size_t>(period - 1)];
        const Int& k = ks[static_cast<std::size_t>(period - 1)];
        QuadraticUnit u;
        u.d = d;
        u.norm = period % 2 == 0 ? 1 : -1;
        if (q0 == 1) {
          u.x = h;
          u.y = k;
          u.denom = 1;
        } else {
          u.x = 2 * h - k;
          u.y = k;
          u.denom = 2;
          if (mpz_even_p(u.x.get_mpz_t()) && mpz_even_p(u.y.get_mpz_t())) {
            u.x /= 2;
            u.y /= 2;
            u.denom = 1;
          }
        }
        return {u, period};
      }
      seen.emplace(std::move(key), i);
    }
    Int a = (P + s) / Q;  // floor, Q > 0 throughout
    if (sgn(Q) <= 0) throw std::logic_error("continued fraction: nonpositive Q");
    Int h = a * h_prev + h_prev2;
    Int k = a * k_prev + k_prev2;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    hs.push_back(h);
    ks.push_back(k);
    Int P_next = a * Q - P;
    Q = (D - P_next * P_next) / Q;
    P = P_next;
  }
}

CfResult compute_unit(std::int64_t d) {
  if (d <= 1) throw std::invalid_argument("fundamental_unit: d must exceed 1");
  if (!is_squarefree(d)) throw std::invalid_argument("fundamental_unit: d not squarefree");
  CfResult r = (d % 4 == 1) ? expand(d, 1, 2) : expand(d, 0, 1);
  const QuadraticUnit& u = r.unit;
  if (u.x * u.x - Int(static_cast<long>(d)) * u.y * u.y != u.norm * u.denom * u.denom) {
    throw std::logic_error("fundamental_unit: Pell identity failed for d=" + std::to_string(d));
  }
  return r;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

}  // namespace

QuadraticUnit fundamental_unit(std::int64_t d) { return compute_unit(d).unit; }

int continued_fraction_period(std::int64_t d) { return compute_unit(d).period; }

std::string to_string(Condition c) {
  switch (c) {
    case Condition::Cond1: return "Cond1";
    case Condition::Cond2: return "Cond2";
    case Condition::NotApplicable: return "NotApplicable";
  }
  return "NotApplicable";
}

Condition parse_condition(const std::string& s) {
  if (s == "Cond1") return Condition::Cond1;
  if (s == "Cond2") return Condition::Cond2;
  if (s == "NotApplicable") return Condition::NotApplicable;
  throw std::invalid_argument("unknown condition tag: " + s);
}

ConditionClass classify_pair(std::int64_t p, std::int64_t q) {
  if (p == q) throw std::invalid_argument("classify_pair: p and q must differ");
  if (p < 3 || q < 3 || !is_prime(static_cast<std::uint64_t>(p)) ||
      !is_prime(static_cast<std::uint64_t>(q))) {
    throw std::invalid_argument("classify_pair: p and q must be odd primes");
  }
  ConditionClass c;
  c.p = p;
  c.q = q;
  if (p % 8 != 5) {
    c.reason = "p = " + std::to_string(p % 8) + " (mod 8), need 5";
    return c;
  }
  if (q % 8 != 3) {
    c.reason = "q = " + std::to_string(q % 8) + " (mod 8), need 3";
    return c;
  }
  const int symbol = kronecker_symbol(p, q);
  c.tag = symbol == 1 ? Condition::Cond1 : Condition::Cond2;
  c.reason = "p = 5 (mod 8), q = 3 (mod 8), (p/q) = " + std::to_string(symbol);
  return c;
}

std::string to_string(RadicandTag t) {
  switch (t) {
    case RadicandTag::TwoPQ: return "2pq";
    case RadicandTag::PQ: return "pq";
    case RadicandTag::TwoQ: return "2q";
    case RadicandTag::Q: return "q";
  }
  return "?";
}

RadicandTag parse_radicand_tag(const std::string& s) {
  if (s == "2pq") return RadicandTag::TwoPQ;
  if (s == "pq") return RadicandTag::PQ;
  if (s == "2q") return RadicandTag::TwoQ;
  if (s == "q") return RadicandTag::Q;
  throw std::invalid_argument("unknown radicand tag: " + s);
}

std::int64_t radicand_of(RadicandTag t, std::int64_t p, std::int64_t q) {
  switch (t) {
    case RadicandTag::TwoPQ: return 2 * p * q;
    case RadicandTag::PQ: return p * q;
    case RadicandTag::TwoQ: return 2 * q;
    case RadicandTag::Q: return q;
  }
  return 0;
}

DecompositionWitness lemma_decompose(std::int64_t p, std::int64_t q, RadicandTag tag,
                                     const ConditionClass& cond) {
  if (!cond.applicable()) throw std::invalid_argument("lemma_decompose: pair not in Cond1/Cond2");
  if (cond.p != p || cond.q != q) throw std::invalid_argument("lemma_decompose: condition mismatch");
  const bool c1 = cond.tag == Condition::Cond1;
  const std::int64_t d = radicand_of(tag, p, q);

  // Unordered shape pairs {A, B} with A*B = d up to squares; "upper" means
  // x+1 = A*u^2 and x-1 = B*v^2, "lower" the swap.
  struct Shapes {
    std::int64_t a, b;
  };
  std::vector<Shapes> systems;
  std::string predicted;
  DecompositionWitness w;
  w.radicand_tag = tag;
  w.radicand = d;
  // Which side feeds u1 / u2, and the surds of the identity.
  bool u1_from_minus = true;
  switch (tag) {
    case RadicandTag::TwoPQ:
      systems = {{1, 2 * p * q}, {p, 2 * q}, {2 * p, q}};
      if (c1) {
        predicted = "(2) lower";
        w.surd1 = p;
        w.surd2 = 2 * q;
        w.relation = "2 = " + format_int(2 * q) + "*u2^2 - " + format_int(p) + "*u1^2";
      } else {
        predicted = "(3) lower";
        w.surd1 = 2 * p;
        w.surd2 = q;
        w.relation = "2 = -" + format_int(2 * p) + "*u1^2 + " + format_int(q) + "*u2^2";
      }
      w.multiplier = 2;
      u1_from_minus = true;
      break;
    case RadicandTag::PQ:
      systems = {{p, q}, {1, p * q}, {2 * p, 2 * q}};
      w.surd1 = p;
      w.surd2 = q;
      u1_from_minus = false;
      if (c1) {
        predicted = "(3) upper";
        w.multiplier = 1;
        w.relation = "1 = " + format_int(p) + "*u1^2 - " + format_int(q) + "*u2^2";
      } else {
        predicted = "(1) upper";
        w.multiplier = 2;
        w.relation = "2 = " + format_int(p) + "*u1^2 - " + format_int(q) + "*u2^2";
      }
      break;
    case RadicandTag::TwoQ:
      systems = {{1, 2 * q}, {2, q}};
      predicted = "(1) lower";
      w.surd1 = 1;
      w.surd2 = 2 * q;
      w.multiplier = 2;
      w.relation = "2 = -u1^2 + " + format_int(2 * q) + "*u2^2";
      u1_from_minus = true;
      break;
    case RadicandTag::Q:
      systems = {{1, q}, {2, 2 * q}};
      predicted = "(1) lower";
      w.surd1 = 1;
      w.surd2 = q;
      w.multiplier = 2;
      w.relation = "2 = -u1^2 + " + format_int(q) + "*u2^2";
      u1_from_minus = true;
      break;
  }

  const QuadraticUnit eps = fundamental_unit(d);
  if (eps.norm != 1) {
    throw Falsified("lemma_decompose: N(eps_" + std::to_string(d) + ") = -1");
  }
  if (eps.denom != 1) throw Falsified("lemma_decompose: eps_" + std::to_string(d) + " not integral");
  const Int xp = eps.x + 1;
  const Int xm = eps.x - 1;
  const Int D(static_cast<long>(d));

  // Shapes excluded before any case analysis: 2(x+-1) and 2d(x+-1) are non-squares.
  for (const auto& [label, value] :
       {std::pair<std::string, Int>{"2(x+1)", 2 * xp}, {"2(x-1)", 2 * xm},
        {"2d(x+1)", 2 * D * xp}, {"2d(x-1)", 2 * D * xm}}) {
    if (is_perfect_square(value)) {
      throw Falsified("lemma_decompose: " + label + " is a square for d=" + std::to_string(d));
    }
    w.excluded_shapes.push_back(label);
  }

  auto quotient_square = [](const Int& value, std::int64_t shape) -> std::optional<Int> {
    const Int s(static_cast<long>(shape));
    if (!mpz_divisible_p(value.get_mpz_t(), s.get_mpz_t())) return std::nullopt;
    return perfect_square_root(Int(value / s));
  };

  std::vector<std::string> holding;
  Int u_plus, u_minus;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const std::string n = "(" + std::to_string(i + 1) + ")";
    for (bool upper : {true, false}) {
      CandidateSystem cs;
      cs.id = n + (upper ? " upper" : " lower");
      cs.plus_shape = upper ? systems[i].a : systems[i].b;
      cs.minus_shape = upper ? systems[i].b : systems[i].a;
      auto rp = quotient_square(xp, cs.plus_shape);
      auto rm = quotient_square(xm, cs.minus_shape);
      cs.holds = rp && rm;
      if (cs.holds) {
        holding.push_back(cs.id);
        if (cs.id == predicted) {
          u_plus = *rp;
          u_minus = *rm;
        }
      }
      w.candidates.push_back(cs);
    }
  }
  if (holding.size() != 1 || holding.front() != predicted) {
    std::string got;
    for (const auto& h : holding) got += (got.empty() ? "" : ", ") + h;
    throw Falsified("lemma_decompose: eps_" + std::to_string(d) + " predicted system " + predicted +
                    ", holding: [" + got + "]");
  }
  w.case_id = predicted;
  w.u1 = u1_from_minus ? u_minus : u_plus;
  w.u2 = u1_from_minus ? u_plus : u_minus;

  // The relation between the witnesses, as stated for each case.
  const Int P(static_cast<long>(p)), Qv(static_cast<long>(q));
  const Int sq1 = w.u1 * w.u1, sq2 = w.u2 * w.u2;
  bool relation_ok = false;
  switch (tag) {
    case RadicandTag::TwoPQ:
      relation_ok = c1 ? (2 * Qv * sq2 - P * sq1 == 2) : (-2 * P * sq1 + Qv * sq2 == 2);
      break;
    case RadicandTag::PQ:
      relation_ok = (P * sq1 - Qv * sq2 == (c1 ? 1 : 2));
      break;
    case RadicandTag::TwoQ:
      relation_ok = (-sq1 + 2 * Qv * sq2 == 2);
      break;
    case RadicandTag::Q:
      relation_ok = (-sq1 + Qv * sq2 == 2);
      break;
  }
  if (!relation_ok) throw Falsified("lemma_decompose: relation " + w.relation + " fails");
  // y = u1 u2 (or 2 u1 u2 when both shapes carry the factor 2).
  const Int coupled = w.u1 * w.u2 * ((tag == RadicandTag::PQ && c1) ? 2 : 1);
  if (coupled != eps.y) throw Falsified("lemma_decompose: witnesses do not reproduce y");
  return w;
}

}  // namespace mqu
