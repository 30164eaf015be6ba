#include "mqunits/field.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace mqu {
namespace {

using Coords = std::vector<Rat>;

std::int64_t squarefree_part(std::int64_t n) { return squarefree_decompose(n).squarefree.value(); }

void require_same(const FieldBasis& a, const FieldBasis& b) {
  if (!(a == b)) throw std::invalid_argument("field basis mismatch: " + to_string(a) + " vs " + to_string(b));
}

// Arithmetic restricted to the prefix field on the first `level` generators,
// whose slots are the masks below 2^level.
Coords mul_level(const FieldBasis& b, const Coords& x, const Coords& y) {
  const std::size_t n = x.size();
  Coords out(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (sgn(x[s]) == 0) continue;
    for (std::size_t t = 0; t < n; ++t) {
      if (sgn(y[t]) == 0) continue;
      const std::int64_t f = b.product_factor(s, t);
      out[s ^ t] += x[s] * y[t] * Rat(static_cast<long>(f));
    }
  }
  return out;
}

bool all_zero(const Coords& x) {
  return std::all_of(x.begin(), x.end(), [](const Rat& r) { return sgn(r) == 0; });
}

Coords sub(const Coords& x, const Coords& y) {
  Coords out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Coords scale(const Coords& x, const Rat& r) {
  Coords out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * r;
  return out;
}

// Splits u = a + c sqrt(d) over the top generator of the prefix field.
void split(const FieldBasis& b, const Coords& u, Coords& a, Coords& c) {
  const std::size_t h = u.size() / 2;
  a.assign(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(h));
  c.resize(h);
  for (std::size_t s = 0; s < h; ++s) {
    c[s] = u[s | h] / Rat(static_cast<long>(b.product_factor(s, h)));
  }
}

Coords join(const FieldBasis& b, const Coords& a, const Coords& c) {
  const std::size_t h = a.size();
  Coords u(2 * h);
  for (std::size_t s = 0; s < h; ++s) {
    u[s] = a[s];
    u[s | h] = c[s] * Rat(static_cast<long>(b.product_factor(s, h)));
  }
  return u;
}

Coords invert_level(const FieldBasis& b, const Coords& u) {
  if (u.size() == 1) return {1 / u[0]};
  // u * conj(u) lies in the prefix field one step down.
  Coords a, c;
  split(b, u, a, c);
  const Rat d(static_cast<long>(b.radicand(u.size() / 2)));
  const Coords n = sub(mul_level(b, a, a), scale(mul_level(b, c, c), d));
  const Coords ninv = invert_level(b, n);
  Coords neg_c = scale(c, Rat(-1));
  return join(b, mul_level(b, a, ninv), mul_level(b, neg_c, ninv));
}

std::optional<Rat> rational_sqrt(const Rat& r) {
  if (sgn(r) < 0) return std::nullopt;
  auto n = perfect_square_root(r.get_num());
  if (!n) return std::nullopt;
  auto d = perfect_square_root(r.get_den());
  if (!d) return std::nullopt;
  return Rat(*n, *d);
}

std::optional<Coords> sqrt_level(const FieldBasis& b, const Coords& u) {
  if (u.size() == 1) {
    auto r = rational_sqrt(u[0]);
    if (!r) return std::nullopt;
    return Coords{*r};
  }
  const std::size_t h = u.size() / 2;
  const Rat d(static_cast<long>(b.radicand(h)));
  Coords a, c;
  split(b, u, a, c);
  auto verified = [&](const Coords& w) -> std::optional<Coords> {
    if (mul_level(b, w, w) == u) return w;
    return std::nullopt;
  };
  if (all_zero(c)) {
    if (auto s = sqrt_level(b, a)) return verified(join(b, *s, Coords(h)));
    if (auto v = sqrt_level(b, scale(a, d))) {
      return verified(join(b, Coords(h), scale(*v, 1 / d)));
    }
    return std::nullopt;
  }
  const Coords n = sub(mul_level(b, a, a), scale(mul_level(b, c, c), d));
  auto w = sqrt_level(b, n);
  if (!w) return std::nullopt;
  for (int sign : {1, -1}) {
    Coords half(h);
    for (std::size_t s = 0; s < h; ++s) half[s] = (a[s] + sign * (*w)[s]) / 2;
    if (all_zero(half)) continue;
    auto s = sqrt_level(b, half);
    if (!s) continue;
    const Coords t = scale(mul_level(b, c, invert_level(b, *s)), Rat(1, 2));
    if (auto r = verified(join(b, *s, t))) return r;
  }
  return std::nullopt;
}

}  // namespace

FieldBasis::FieldBasis(std::vector<std::int64_t> generators) {
  if (generators.size() > 5) throw std::invalid_argument("FieldBasis: at most 5 generators");
  auto data = std::make_shared<Data>();
  for (std::int64_t g : generators) {
    if (g == 0 || g == 1 || !is_squarefree(g)) {
      throw std::invalid_argument("FieldBasis: bad generator " + std::to_string(g));
    }
    if (g < 0) data->cm = true;
  }
  data->generators = std::move(generators);
  const std::size_t n = std::size_t{1} << data->generators.size();
  data->radicands.assign(n, 1);
  for (std::size_t s = 1; s < n; ++s) {
    const int low = std::countr_zero(s);
    data->radicands[s] = squarefree_part(data->radicands[s & (s - 1)] * data->generators[static_cast<std::size_t>(low)]);
    if (data->radicands[s] == 1) {
      throw std::invalid_argument("FieldBasis: generators are dependent modulo squares");
    }
  }
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (data->radicands[s] == data->radicands[t]) {
        throw std::invalid_argument("FieldBasis: generators are dependent modulo squares");
      }
    }
  }
  data->factors.resize(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const std::int64_t rs = data->radicands[s], rt = data->radicands[t];
      const std::int64_t q = rs * rt / data->radicands[s ^ t];
      auto f = perfect_square_root(Int(static_cast<long>(q)));
      if (!f) throw std::logic_error("FieldBasis: product table is not square");
      const std::int64_t sign = (rs < 0 && rt < 0) ? -1 : 1;
      data->factors[s * n + t] = sign * f->get_si();
    }
  }
  data_ = std::move(data);
}

std::optional<std::size_t> FieldBasis::mask_of(std::int64_t r) const {
  const auto& rs = data_->radicands;
  auto it = std::find(rs.begin(), rs.end(), r);
  if (it == rs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - rs.begin());
}

std::string to_string(const FieldBasis& b) {
  std::string s = "Q(";
  for (std::size_t i = 0; i < b.rank(); ++i) {
    if (i) s += ", ";
    s += "sqrt(" + std::to_string(b.generators()[i]) + ")";
  }
  return s + ")";
}

bool Automorphism::is_identity() const {
  return std::all_of(signs.begin(), signs.end(), [](int s) { return s == 1; });
}

Automorphism flip(const FieldBasis& b, const std::vector<std::int64_t>& flipped) {
  Automorphism t = Automorphism::identity(b);
  for (std::int64_t g : flipped) {
    auto it = std::find(b.generators().begin(), b.generators().end(), g);
    if (it == b.generators().end()) {
      throw std::invalid_argument("flip: " + std::to_string(g) + " is not a generator of " + to_string(b));
    }
    t.signs[static_cast<std::size_t>(it - b.generators().begin())] = -1;
  }
  return t;
}

FieldElement::FieldElement(FieldBasis basis) : basis_(std::move(basis)), coords_(basis_.degree()) {}

FieldElement::FieldElement(FieldBasis basis, std::vector<Rat> coords)
    : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (coords_.size() != basis_.degree()) throw std::invalid_argument("FieldElement: wrong coordinate count");
  for (auto& c : coords_) c.canonicalize();
}

FieldElement FieldElement::rational(const FieldBasis& b, const Rat& r) {
  FieldElement u(b);
  u.coords_[0] = r;
  return u;
}

FieldElement FieldElement::sqrt_of(const FieldBasis& b, std::int64_t n) {
  if (n == 0) return FieldElement(b);
  const auto dec = squarefree_decompose(n);
  auto mask = b.mask_of(dec.squarefree.value());
  if (!mask) throw std::invalid_argument("sqrt(" + std::to_string(n) + ") is not in " + to_string(b));
  FieldElement u(b);
  u.coords_[*mask] = Rat(static_cast<long>(dec.factor));
  return u;
}

FieldElement FieldElement::from_unit(const FieldBasis& b, const QuadraticUnit& u) {
  return rational(b, u.rational_part()) + u.surd_part() * sqrt_of(b, u.d);
}

Rat FieldElement::coeff(std::int64_t radicand) const {
  auto mask = basis_.mask_of(radicand);
  if (!mask) throw std::invalid_argument("coeff: radicand " + std::to_string(radicand) + " not in basis");
  return coords_[*mask];
}

bool FieldElement::is_zero() const { return all_zero(coords_); }

bool FieldElement::is_rational() const {
  return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rat& r) { return sgn(r) == 0; });
}

bool FieldElement::is_real() const {
  for (std::size_t s = 0; s < coords_.size(); ++s) {
    if (basis_.radicand(s) < 0 && sgn(coords_[s]) != 0) return false;
  }
  return true;
}

FieldElement FieldElement::operator-() const { return FieldElement(basis_, scale(coords_, Rat(-1))); }

FieldElement operator+(const FieldElement& u, const FieldElement& v) {
  require_same(u.basis_, v.basis_);
  Coords out(u.coords_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u.coords_[i] + v.coords_[i];
  return FieldElement(u.basis_, std::move(out));
}

FieldElement operator-(const FieldElement& u, const FieldElement& v) {
  require_same(u.basis_, v.basis_);
  return FieldElement(u.basis_, sub(u.coords_, v.coords_));
}

FieldElement operator*(const FieldElement& u, const FieldElement& v) {
  require_same(u.basis_, v.basis_);
  return FieldElement(u.basis_, mul_level(u.basis_, u.coords_, v.coords_));
}

FieldElement operator*(const Rat& r, const FieldElement& u) { return FieldElement(u.basis_, scale(u.coords_, r)); }

bool operator==(const FieldElement& u, const FieldElement& v) {
  return u.basis_ == v.basis_ && u.coords_ == v.coords_;
}

FieldElement multiply(const FieldElement& u, const FieldElement& v) { return u * v; }

FieldElement power(const FieldElement& u, std::int64_t e) {
  FieldElement base = e < 0 ? invert(u) : u;
  std::uint64_t n = static_cast<std::uint64_t>(e < 0 ? -e : e);
  FieldElement result = FieldElement::rational(u.basis(), Rat(1));
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

FieldElement invert(const FieldElement& u) {
  if (u.is_zero()) throw std::invalid_argument("invert: zero element");
  return FieldElement(u.basis(), invert_level(u.basis(), u.coords()));
}

FieldElement apply_automorphism(const FieldElement& u, const Automorphism& t) {
  if (t.signs.size() != u.basis().rank()) throw std::invalid_argument("apply_automorphism: incomplete sign map");
  Coords out = u.coords();
  for (std::size_t s = 0; s < out.size(); ++s) {
    int sign = 1;
    for (std::size_t i = 0; i < t.signs.size(); ++i) {
      if ((s >> i) & 1) sign *= t.signs[i];
    }
    if (sign < 0) out[s] = -out[s];
  }
  return FieldElement(u.basis(), std::move(out));
}

FieldElement relative_norm(const FieldElement& u, const Automorphism& t) {
  FieldElement n = u * apply_automorphism(u, t);
  if (!(apply_automorphism(n, t) == n)) throw std::logic_error("relative_norm: result not fixed");
  return n;
}

Rat absolute_norm(const FieldElement& u) {
  FieldElement n = u;
  for (std::size_t i = 0; i < u.basis().rank(); ++i) {
    Automorphism t = Automorphism::identity(u.basis());
    t.signs[i] = -1;
    n = n * apply_automorphism(n, t);
  }
  if (!n.is_rational()) throw std::logic_error("absolute_norm: result not rational");
  return n.coord(0);
}

RationalInterval enclose(const FieldElement& u, unsigned digits) {
  if (!u.is_real()) throw std::invalid_argument("enclose: element is not real");
  RationalInterval acc{Rat(0), Rat(0)};
  for (std::size_t s = 0; s < u.coords().size(); ++s) {
    const Rat& c = u.coord(s);
    if (sgn(c) == 0) continue;
    const RationalInterval r = sqrt_interval_digits(Int(static_cast<long>(u.basis().radicand(s))), digits);
    if (sgn(c) > 0) {
      acc.lo += c * r.lo;
      acc.hi += c * r.hi;
    } else {
      acc.lo += c * r.hi;
      acc.hi += c * r.lo;
    }
  }
  return acc;
}

int sign_at_identity(const FieldElement& u) {
  if (u.is_zero()) throw std::invalid_argument("sign_at_identity: zero element");
  for (unsigned digits = 8;; digits *= 2) {
    const RationalInterval iv = enclose(u, digits);
    if (sgn(iv.lo) > 0) return 1;
    if (sgn(iv.hi) < 0) return -1;
  }
}

int sign_at_embedding(const FieldElement& u, const Automorphism& signs) {
  return sign_at_identity(apply_automorphism(u, signs));
}

std::optional<FieldElement> sqrt_in_field(const FieldElement& u) {
  if (u.is_zero()) throw std::invalid_argument("sqrt_in_field: zero element");
  auto w = sqrt_level(u.basis(), u.coords());
  if (!w) return std::nullopt;
  FieldElement r(u.basis(), std::move(*w));
  if (!(r * r == u)) throw std::logic_error("sqrt_in_field: re-squaring failed");
  return r;
}

std::optional<FieldElement> fourth_root_in_field(const FieldElement& u) {
  auto s = sqrt_in_field(u);
  if (!s) return std::nullopt;
  for (const FieldElement& branch : {*s, -*s}) {
    if (auto r = sqrt_in_field(branch)) {
      if (!(power(*r, 4) == u)) throw std::logic_error("fourth_root_in_field: re-expansion failed");
      return r;
    }
  }
  return std::nullopt;
}

FieldElement zeta(int n, const FieldBasis& b) {
  const FieldElement one = FieldElement::rational(b, Rat(1));
  switch (n) {
    case 3:
      return Rat(1, 2) * (FieldElement::sqrt_of(b, -3) - one);
    case 4:
      return FieldElement::sqrt_of(b, -1);
    case 8:
      return Rat(1, 2) * (FieldElement::sqrt_of(b, 2) + FieldElement::sqrt_of(b, -2));
    case 24:
      return zeta(8, b) * zeta(3, b);
    default:
      throw std::invalid_argument("zeta: unsupported order " + std::to_string(n));
  }
}

int torsion_order(const FieldBasis& b) {
  if (!b.is_cm()) return 2;
  int order = 2;
  FieldElement x = FieldElement::rational(b, Rat(-1));
  while (auto r = sqrt_in_field(x)) {
    order *= 2;
    x = *r;
  }
  if (sqrt_in_field(FieldElement::rational(b, Rat(-3)))) order *= 3;
  return order;
}

FieldElement embed(const FieldElement& u, const FieldBasis& target) {
  if (u.basis() == target) return u;
  FieldElement out(target);
  Coords c(target.degree());
  for (std::size_t s = 0; s < u.coords().size(); ++s) {
    if (sgn(u.coord(s)) == 0) continue;
    const std::int64_t r = u.basis().radicand(s);
    auto mask = target.mask_of(r);
    if (!mask) throw std::invalid_argument("embed: sqrt(" + std::to_string(r) + ") not in " + to_string(target));
    c[*mask] = u.coord(s);
  }
  return FieldElement(target, std::move(c));
}

std::string to_string(const FieldElement& u) {
  std::string out;
  for (std::size_t s = 0; s < u.coords().size(); ++s) {
    if (sgn(u.coord(s)) == 0) continue;
    if (!out.empty()) out += " + ";
    out += to_string(u.coord(s)) + "*sqrt(" + std::to_string(u.basis().radicand(s)) + ")";
  }
  return out.empty() ? "0/1*sqrt(1)" : out;
}

FieldElement parse_field_element(const std::string& text, const FieldBasis& b) {
  Coords c(b.degree());
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("parse_field_element: " + why + " in \"" + text + "\"");
  };
  while (true) {
    const std::size_t star = text.find("*sqrt(", pos);
    if (star == std::string::npos) fail("missing *sqrt(");
    const std::size_t close = text.find(')', star);
    if (close == std::string::npos) fail("missing )");
    const Rat coeff = parse_rational(text.substr(pos, star - pos));
    const std::int64_t r = std::stoll(text.substr(star + 6, close - star - 6));
    auto mask = b.mask_of(r);
    if (!mask) fail("radicand " + std::to_string(r) + " not in basis");
    c[*mask] += coeff;
    pos = close + 1;
    if (pos == text.size()) break;
    if (text.compare(pos, 3, " + ") != 0) fail("expected \" + \"");
    pos += 3;
  }
  return FieldElement(b, std::move(c));
}

bool witness_identity_holds(const DecompositionWitness& w) {
  // Smallest field holding both surds and the radicand.
  std::vector<std::int64_t> gens;
  auto add = [&](std::int64_t r) {
    if (r == 1) return;
    try {
      std::vector<std::int64_t> trial = gens;
      trial.push_back(r);
      FieldBasis test(trial);
      gens = std::move(trial);
    } catch (const std::invalid_argument&) {
    }
  };
  add(w.surd1);
  add(w.surd2);
  add(w.radicand);
  const FieldBasis b(gens);
  const FieldElement lhs = Rat(w.u1) * FieldElement::sqrt_of(b, w.surd1) + Rat(w.u2) * FieldElement::sqrt_of(b, w.surd2);
  const FieldElement eps = FieldElement::from_unit(b, fundamental_unit(w.radicand));
  return lhs * lhs == Rat(w.multiplier) * eps;
}

}  // namespace mqu
