#include "mqunits/units.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mqu {
namespace {

std::int64_t lcm_denominators(const ExponentMap& e) {
  std::int64_t d = 1;
  for (const auto& [r, x] : e) {
    const std::int64_t den = x.get_den().get_si();
    d = std::lcm(d, den);
  }
  return d;
}

ExponentMap cleaned(ExponentMap e) {
  for (auto it = e.begin(); it != e.end();) {
    if (sgn(it->second) == 0) it = e.erase(it);
    else ++it;
  }
  return e;
}

ExponentMap add(const ExponentMap& a, const ExponentMap& b, const Rat& scale_b = Rat(1)) {
  ExponentMap out = a;
  for (const auto& [r, x] : b) out[r] += scale_b * x;
  return cleaned(std::move(out));
}

ExponentMap scaled(const ExponentMap& a, const Rat& s) {
  ExponentMap out;
  for (const auto& [r, x] : a) out[r] = x * s;
  return cleaned(std::move(out));
}

FieldElement positive(const FieldElement& u) { return sign_at_identity(u) < 0 ? -u : u; }

// prod eps_d^(n_d) for integer exponents n_d.
FieldElement integral_product(const FieldBasis& b, const ExponentMap& n) {
  FieldElement acc = FieldElement::rational(b, Rat(1));
  for (const auto& [d, x] : n) {
    if (x.get_den() != 1) throw std::logic_error("integral_product: fractional exponent");
    acc = acc * power(FieldElement::from_unit(b, fundamental_unit(d)), x.get_num().get_si());
  }
  return acc;
}

std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) s.push_back(i);
      }
      out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

int rank_of(std::vector<std::vector<Rat>> m) {
  int rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < m.size(); ++c) {
    std::size_t piv = static_cast<std::size_t>(rank);
    while (piv < m.size() && sgn(m[piv][c]) == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(rank)]);
    const auto& prow = m[static_cast<std::size_t>(rank)];
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < m.size(); ++r) {
      if (sgn(m[r][c]) == 0) continue;
      const Rat f = m[r][c] / prow[c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * prow[j];
    }
    ++rank;
  }
  return rank;
}

std::vector<Rat> dense(const ExponentMap& e, const std::vector<std::int64_t>& columns) {
  std::vector<Rat> row(columns.size());
  for (const auto& [r, x] : e) {
    auto it = std::find(columns.begin(), columns.end(), r);
    if (it == columns.end()) throw std::invalid_argument("exponent on foreign radicand " + std::to_string(r));
    row[static_cast<std::size_t>(it - columns.begin())] = x;
  }
  return row;
}

std::vector<std::vector<Rat>> inverse(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(m[piv][c]) == 0) ++piv;
    if (piv == n) throw std::invalid_argument("inverse: singular matrix");
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    const Rat d = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      const Rat f = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

UnitExpr make_unit(const FieldBasis& b, const ExponentMap& e, FieldElement w) {
  return UnitExpr{0, cleaned(e), embed(w, b)};
}

// Basis of the Z-span of the generators, tracking witnesses through the row
// operations.
std::vector<UnitExpr> reduce_lattice(const FieldBasis& b, std::vector<UnitExpr> rows,
                                     const std::vector<std::int64_t>& columns) {
  std::int64_t scale = 1;
  for (const auto& u : rows) scale = std::lcm(scale, lcm_denominators(u.exponents));
  auto entry = [&](const UnitExpr& u, std::size_t c) {
    auto it = u.exponents.find(columns[c]);
    return it == u.exponents.end() ? Int(0) : Int(it->second * scale);
  };
  auto combine = [&](UnitExpr& target, const UnitExpr& source, const Int& k) {
    // target <- target * source^(-k)
    target.exponents = add(target.exponents, source.exponents, Rat(-k));
    target.witness = target.witness * power(source.witness, -k.get_si());
  };
  std::vector<UnitExpr> out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (;;) {
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (sgn(entry(rows[i], c)) != 0) live.push_back(i);
      }
      if (live.empty()) break;
      std::size_t piv = live[0];
      for (std::size_t i : live) {
        if (abs(entry(rows[i], c)) < abs(entry(rows[piv], c))) piv = i;
      }
      if (live.size() == 1) {
        out.push_back(rows[piv]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(piv));
        break;
      }
      const Int pv = entry(rows[piv], c);
      for (std::size_t i : live) {
        if (i == piv) continue;
        Int k;
        mpz_fdiv_q(k.get_mpz_t(), Int(entry(rows[i], c)).get_mpz_t(), pv.get_mpz_t());
        combine(rows[i], rows[piv], k);
      }
    }
  }
  for (const auto& r : rows) {
    // Leftovers have zero exponents, so their witnesses are roots of unity.
    if (!r.exponents.empty()) throw std::logic_error("reduce_lattice: residual exponents");
    if (!(power(r.witness, 24) == FieldElement::rational(b, Rat(1)))) {
      throw std::logic_error("reduce_lattice: relation witness is not torsion");
    }
  }
  for (auto& u : out) u.witness = positive(u.witness);
  return out;
}

FsuResult finish(FsuResult f) {
  f.q_index_log2 = unit_index_log2(f);
  return f;
}

}  // namespace

int UnitExpr::root_degree() const { return static_cast<int>(lcm_denominators(exponents)); }

std::string FsuResult::torsion_label() const {
  return torsion_order == 2 ? "-1" : "zeta" + std::to_string(torsion_order);
}

FieldElement torsion_generator(const FieldBasis& b, int order) {
  switch (order) {
    case 2: return FieldElement::rational(b, Rat(-1));
    case 4: return zeta(4, b);
    case 6: return -zeta(3, b);
    case 8: return zeta(8, b);
    case 12: return zeta(4, b) * zeta(3, b);
    case 24: return zeta(24, b);
    default: throw std::domain_error("torsion_generator: unsupported order " + std::to_string(order));
  }
}

std::vector<std::int64_t> real_base_radicands(const FieldBasis& b) {
  std::vector<std::int64_t> out;
  for (std::size_t s = 1; s < b.degree(); ++s) {
    if (b.radicand(s) > 0) out.push_back(b.radicand(s));
  }
  return out;
}

std::optional<FieldElement> unit_from_exponents(const FieldBasis& b, const ExponentMap& e) {
  const std::int64_t D = lcm_denominators(e);
  if (std::popcount(static_cast<std::uint64_t>(D)) != 1) throw std::domain_error("unit_from_exponents: root degree not a power of 2");
  FieldElement x = integral_product(b, scaled(e, Rat(D)));
  for (std::int64_t k = D; k > 1; k /= 2) {
    auto r = sqrt_in_field(x);
    if (!r) return std::nullopt;
    x = positive(*r);
  }
  return x;
}

bool verify_unit_expr(const UnitExpr& u, const FieldBasis& b, int torsion_order) {
  const FieldElement w = embed(u.witness, b);
  const std::int64_t D = lcm_denominators(u.exponents);
  FieldElement rhs = integral_product(b, scaled(u.exponents, Rat(D)));
  if (u.torsion_exponent != 0) rhs = power(torsion_generator(b, torsion_order), u.torsion_exponent) * rhs;
  return power(w, D) == rhs;
}

std::vector<std::vector<Rat>> exponent_matrix(const std::vector<UnitExpr>& gens,
                                              const std::vector<std::int64_t>& columns) {
  std::vector<std::vector<Rat>> m;
  for (const auto& g : gens) m.push_back(dense(g.exponents, columns));
  return m;
}

Rat determinant(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  Rat det(1);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c].size() != n) throw std::invalid_argument("determinant: matrix not square");
    std::size_t piv = c;
    while (piv < n && sgn(m[piv][c]) == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      const Rat f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

bool same_lattice(const std::vector<std::vector<Rat>>& a, const std::vector<std::vector<Rat>>& b) {
  if (a.size() != b.size()) return false;
  const Rat da = determinant(a), db = determinant(b);
  if (sgn(da) == 0 || sgn(db) == 0 || abs(da) != abs(db)) return false;
  const auto binv = inverse(b);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rat x(0);
      for (std::size_t k = 0; k < n; ++k) x += a[i][k] * binv[k][j];
      if (x.get_den() != 1) return false;
    }
  }
  return true;
}

int torsion_index(const FieldBasis& b, int torsion_order) {
  int sub = 2;
  for (std::int64_t r : b.radicands()) {
    if (r == -1) sub = std::lcm(sub, 4);
    if (r == -3) sub = std::lcm(sub, 6);
  }
  if (torsion_order % sub != 0) throw std::logic_error("torsion_index: subfield roots of unity not contained");
  return torsion_order / sub;
}

int unit_index_log2(const FsuResult& fsu) {
  if (fsu.generators.size() != fsu.base_radicands.size()) {
    throw std::logic_error("unit_index: generator count differs from unit rank");
  }
  const Rat det = determinant(exponent_matrix(fsu.generators, fsu.base_radicands));
  if (sgn(det) == 0) throw std::logic_error("unit_index: singular exponent matrix");
  const Rat index = Rat(torsion_index(fsu.field, fsu.torsion_order)) / abs(det);
  if (index.get_den() != 1) throw std::logic_error("unit_index: index " + to_string(index) + " is not integral");
  auto lg = exact_log2(index.get_num());
  if (!lg) throw std::logic_error("unit_index: index " + to_string(index) + " is not a power of two");
  return *lg;
}

Int unit_index(const FsuResult& fsu) {
  Int r(1);
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(unit_index_log2(fsu)));
  return r;
}

FsuResult fsu_quadratic(std::int64_t d) {
  const FieldBasis b({d});
  if (d <= 1) throw std::invalid_argument("fsu_quadratic: real fields only");
  FsuResult f{b, 2, real_base_radicands(b), {}, 0};
  f.generators.push_back(make_unit(b, {{d, Rat(1)}}, FieldElement::from_unit(b, fundamental_unit(d))));
  return finish(std::move(f));
}

std::vector<std::pair<std::int64_t, std::int64_t>> biquadratic_configurations(std::int64_t p, std::int64_t q) {
  return {{p, q}, {2, q}, {p, 2 * q}, {q, 2 * p}, {2, p * q}, {2, p}};
}

std::vector<ExponentMap> predicted_biquadratic(std::int64_t d1, std::int64_t d2, const ConditionClass& cond) {
  if (!cond.applicable()) throw std::invalid_argument("predicted_biquadratic: pair not in Cond1/Cond2");
  const std::int64_t p = cond.p, q = cond.q;
  const bool c1 = cond.tag == Condition::Cond1;
  const Rat h(1, 2);
  auto is = [&](std::int64_t a, std::int64_t b) { return (d1 == a && d2 == b) || (d1 == b && d2 == a); };
  if (is(p, q)) {
    if (c1) return {{{p, 1}}, {{q, 1}}, {{p * q, h}}};
    return {{{p, 1}}, {{q, 1}}, {{q, h}, {p * q, h}}};
  }
  if (is(2, q)) return {{{2, 1}}, {{q, h}}, {{2 * q, h}}};
  if (is(p, 2 * q)) {
    if (c1) return {{{p, 1}}, {{2 * q, 1}}, {{2 * q, h}, {2 * p * q, h}}};
    return {{{p, 1}}, {{2 * q, 1}}, {{2 * p * q, h}}};
  }
  if (is(q, 2 * p)) {
    if (c1) return {{{q, 1}}, {{2 * p, 1}}, {{2 * p * q, h}}};
    return {{{q, 1}}, {{2 * p, 1}}, {{q, h}, {2 * p * q, h}}};
  }
  if (is(2, p * q)) return {{{2, 1}}, {{p * q, 1}}, {{p * q, h}, {2 * p * q, h}}};
  if (is(2, p)) return {{{2, 1}}, {{p, 1}}, {{2, h}, {p, h}, {2 * p, h}}};
  throw std::invalid_argument("predicted_biquadratic: unknown configuration (" + std::to_string(d1) + ", " +
                              std::to_string(d2) + ")");
}

FsuResult fsu_biquadratic(const SquarefreeInt& d1, const SquarefreeInt& d2, const ConditionClass& cond) {
  const auto predicted = predicted_biquadratic(d1.value(), d2.value(), cond);
  const FieldBasis b({d1.value(), d2.value()});
  FsuResult f{b, 2, real_base_radicands(b), {}, 0};
  for (const auto& e : predicted) {
    auto w = unit_from_exponents(b, e);
    if (!w) {
      throw Falsified("fsu_biquadratic: " + unit_label(e, cond.p, cond.q) + " is not in " + to_string(b));
    }
    f.generators.push_back(make_unit(b, e, *w));
  }
  return finish(std::move(f));
}

FsuResult wada_fsu(const FieldBasis& field, const std::vector<FsuResult>& subfield_fsus) {
  if (field.is_cm()) throw std::invalid_argument("wada_fsu: real fields only");
  if (subfield_fsus.size() != 3) throw std::invalid_argument("wada_fsu: need three subfield FSUs");
  const auto columns = real_base_radicands(field);

  std::vector<UnitExpr> gens;
  std::vector<UnitExpr> dependent;
  for (const auto& sub : subfield_fsus) {
    for (const auto& g : sub.generators) {
      UnitExpr u = make_unit(field, g.exponents, g.witness);
      const bool duplicate = std::any_of(gens.begin(), gens.end(),
                                         [&](const UnitExpr& x) { return x.exponents == u.exponents; });
      if (duplicate) continue;
      auto m = exponent_matrix(gens, columns);
      const int before = rank_of(m);
      m.push_back(dense(u.exponents, columns));
      if (rank_of(m) > before) gens.push_back(std::move(u));
      else dependent.push_back(std::move(u));
    }
  }
  if (!dependent.empty()) {
    for (auto& u : dependent) gens.push_back(std::move(u));
    gens = reduce_lattice(field, std::move(gens), columns);
  }
  if (gens.size() != columns.size()) {
    throw std::logic_error("wada_fsu: subfield units have rank " + std::to_string(gens.size()) + ", expected " +
                           std::to_string(columns.size()));
  }
  for (auto& g : gens) g.witness = positive(g.witness);

  const auto subsets = subsets_by_size(gens.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& s : subsets) {
      FieldElement prod = FieldElement::rational(field, Rat(1));
      ExponentMap e;
      for (std::size_t i : s) {
        prod = prod * gens[i].witness;
        e = add(e, gens[i].exponents);
      }
      auto r = sqrt_in_field(prod);
      if (!r) continue;
      gens[s.back()] = UnitExpr{0, scaled(e, Rat(1, 2)), positive(*r)};
      changed = true;
      break;
    }
  }
  FsuResult f{field, 2, columns, std::move(gens), 0};
  return finish(std::move(f));
}

FsuResult fsu_real(const FieldBasis& field) {
  const auto& g = field.generators();
  if (field.is_cm()) throw std::invalid_argument("fsu_real: real fields only");
  if (g.empty()) throw std::invalid_argument("fsu_real: rational field has no free units");
  if (g.size() == 1) return fsu_quadratic(g[0]);
  const std::size_t k = g.size();
  std::vector<std::int64_t> head(g.begin(), g.end() - 2);
  std::vector<std::int64_t> k1 = head, k2 = head, k3 = head;
  k1.push_back(g[k - 2]);
  k2.push_back(g[k - 1]);
  k3.push_back(squarefree_decompose(g[k - 2] * g[k - 1]).squarefree.value());
  return wada_fsu(field, {fsu_real(FieldBasis(k1)), fsu_real(FieldBasis(k2)), fsu_real(FieldBasis(k3))});
}

AziziResult azizi_extend(const FsuResult& real_fsu, const FieldBasis& cm_basis) {
  const FieldBasis& real = real_fsu.field;
  std::vector<std::int64_t> expect = real.generators();
  expect.push_back(-1);
  if (cm_basis.generators() != expect) {
    throw std::invalid_argument("azizi_extend: CM basis must be the real basis with -1 appended");
  }
  const int order = torsion_order(cm_basis);
  AziziResult out{real_fsu, 0, std::nullopt, {}, std::nullopt};
  for (int o = order; o % 2 == 0; o /= 2) ++out.n0;
  FieldElement mu(real);
  FieldElement xi(cm_basis);
  if (out.n0 == 2) {
    xi = zeta(4, cm_basis);
  } else if (out.n0 == 3) {
    mu = FieldElement::sqrt_of(real, 2);
    xi = zeta(8, cm_basis);
  } else {
    throw std::domain_error("azizi_extend: 2-power torsion 2^" + std::to_string(out.n0) + " not supported");
  }
  const FieldElement two_plus_mu = FieldElement::rational(real, Rat(2)) + mu;

  const auto& gens = real_fsu.generators;
  std::size_t hits = 0;
  for (const auto& s : subsets_by_size(gens.size())) {
    FieldElement prod = FieldElement::rational(real, Rat(1));
    ExponentMap e;
    for (std::size_t i : s) {
      prod = prod * gens[i].witness;
      e = add(e, gens[i].exponents);
    }
    auto r = sqrt_in_field(two_plus_mu * prod);
    if (!r) continue;
    if (++hits > 1) throw Falsified("azizi_extend: more than one unit eps with (2+mu) eps a square");
    out.epsilon = UnitExpr{0, e, prod};
    out.subset = s;
    out.square_root = positive(*r);
  }

  FsuResult f{cm_basis, order, real_base_radicands(cm_basis), {}, 0};
  for (const auto& g : gens) f.generators.push_back(make_unit(cm_basis, g.exponents, g.witness));
  if (out.epsilon) {
    const FieldElement target = xi * embed(out.epsilon->witness, cm_basis);
    auto w = sqrt_in_field(target);
    if (!w) throw Falsified("azizi_extend: xi * eps is not a square in " + to_string(cm_basis));
    UnitExpr u{0, scaled(out.epsilon->exponents, Rat(1, 2)), *w};
    const std::int64_t D = lcm_denominators(u.exponents);
    const FieldElement ratio = power(*w, D) * invert(integral_product(cm_basis, scaled(u.exponents, Rat(D))));
    const FieldElement z = torsion_generator(cm_basis, order);
    FieldElement zt = FieldElement::rational(cm_basis, Rat(1));
    bool found = false;
    for (int t = 0; t < order; ++t, zt = zt * z) {
      if (zt == ratio) {
        u.torsion_exponent = t;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("azizi_extend: twisted generator is off by a non-torsion factor");
    f.generators[out.subset.back()] = std::move(u);
  }
  out.fsu = finish(std::move(f));
  return out;
}

std::vector<ExponentMap> theorem_real_list(const ConditionClass& cond) {
  if (!cond.applicable()) throw std::invalid_argument("theorem_real_list: pair not in Cond1/Cond2");
  const std::int64_t p = cond.p, q = cond.q;
  const Rat h(1, 2), f(1, 4);
  std::vector<ExponentMap> l{{{2, 1}}, {{p, 1}}, {{q, h}}, {{2 * q, h}}, {{p * q, h}}, {{2, h}, {p, h}, {2 * p, h}}};
  if (cond.tag == Condition::Cond1) {
    l.push_back({{p, h}, {2 * q, f}, {p * q, f}, {2 * p * q, f}});
  } else {
    l.push_back({{2, h}, {p, h}, {q, f}, {p * q, f}, {2 * p * q, f}});
  }
  return l;
}

std::vector<ExponentMap> theorem_cm_list(const ConditionClass& cond) {
  auto l = theorem_real_list(cond);
  const std::int64_t q = cond.q;
  l.erase(std::find(l.begin(), l.end(), ExponentMap{{2 * q, Rat(1, 2)}}));
  l.push_back({{2, Rat(1, 2)}, {q, Rat(1, 4)}, {2 * q, Rat(1, 4)}});
  return l;
}

bool same_generator_labels(const std::vector<UnitExpr>& gens, const std::vector<ExponentMap>& expected) {
  if (gens.size() != expected.size()) return false;
  std::vector<ExponentMap> a, b;
  for (const auto& g : gens) a.push_back(cleaned(g.exponents));
  for (const auto& e : expected) b.push_back(cleaned(e));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::string radicand_label(std::int64_t d, std::int64_t p, std::int64_t q) {
  if (d == 2) return "2";
  if (d == p) return "p";
  if (d == q) return "q";
  if (d == 2 * p) return "2p";
  if (d == 2 * q) return "2q";
  if (d == p * q) return "pq";
  if (d == 2 * p * q) return "2pq";
  return std::to_string(d);
}

std::string unit_label(const ExponentMap& e, std::int64_t p, std::int64_t q) {
  std::string out;
  for (const auto& [d, x] : cleaned(e)) {
    if (!out.empty()) out += "*";
    out += "eps_" + radicand_label(d, p, q);
    if (x != 1) {
      out += "^";
      out += x.get_den() == 1 ? x.get_num().get_str() : "(" + x.get_str() + ")";
    }
  }
  return out.empty() ? "1" : out;
}

}  // namespace mqu
