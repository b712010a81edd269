#include "odelin/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>

namespace odelin {

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : factors) d += f.second;
  return d;
}

std::uint32_t Monomial::exponent_of(SymbolId v) const {
  for (const auto& [s, e] : factors) {
    if (s == v) return e;
    if (s > v) break;
  }
  return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  while (i != a.factors.end() || j != b.factors.end()) {
    if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) {
      r.factors.push_back(*i++);
    } else if (i == a.factors.end() || j->first < i->first) {
      r.factors.push_back(*j++);
    } else {
      r.factors.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return r;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  auto i = a.factors.begin();
  auto j = b.factors.begin();
  while (i != a.factors.end() || j != b.factors.end()) {
    if (j == b.factors.end() || (i != a.factors.end() && i->first < j->first)) return true;
    if (i == a.factors.end() || j->first < i->first) return false;
    if (i->second != j->second) return i->second > j->second;
    ++i;
    ++j;
  }
  return false;
}

class PolyBuilder {
 public:
  void add(const Monomial& m, const mpq_class& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = acc_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }
  Poly build() {
    Poly p;
    for (auto& [m, c] : acc_) {
      if (sgn(c) != 0) p.terms_.push_back(Term{m, c});
    }
    return p;
  }
  static Poly from_sorted(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    return p;
  }

 private:
  std::map<Monomial, mpq_class, GrlexGreater> acc_;
};

Poly::Poly(const mpq_class& c) {
  if (sgn(c) != 0) terms_.push_back(Term{Monomial{}, c});
}

Poly Poly::symbol(SymbolId v) {
  return PolyBuilder::from_sorted({Term{Monomial{{{v, 1}}}, mpq_class(1)}});
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.factors.empty());
}

mpq_class Poly::constant_value() const { return terms_.empty() ? mpq_class(0) : terms_.front().coeff; }

std::vector<SymbolId> Poly::symbols() const {
  std::set<SymbolId> s;
  for (const Term& t : terms_) {
    for (const auto& f : t.monomial.factors) s.insert(f.first);
  }
  return {s.begin(), s.end()};
}

unsigned Poly::degree_in(SymbolId v) const {
  unsigned d = 0;
  for (const Term& t : terms_) d = std::max(d, t.monomial.exponent_of(v));
  return d;
}

std::vector<Poly> Poly::coefficients_in(SymbolId v) const {
  std::vector<PolyBuilder> parts(degree_in(v) + 1);
  for (const Term& t : terms_) {
    Monomial rest;
    std::uint32_t e = 0;
    for (const auto& f : t.monomial.factors) {
      if (f.first == v) {
        e = f.second;
      } else {
        rest.factors.push_back(f);
      }
    }
    parts[e].add(rest, t.coeff);
  }
  std::vector<Poly> out;
  out.reserve(parts.size());
  for (auto& b : parts) out.push_back(b.build());
  return out;
}

Poly Poly::from_coefficients(SymbolId v, const std::vector<Poly>& coeffs) {
  PolyBuilder b;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    Monomial vk;
    if (k > 0) vk.factors.emplace_back(v, static_cast<std::uint32_t>(k));
    for (const Term& t : coeffs[k].terms()) b.add(t.monomial * vk, t.coeff);
  }
  return b.build();
}

Poly Poly::operator-() const { return scaled(mpq_class(-1)); }

Poly Poly::scaled(const mpq_class& c) const {
  if (sgn(c) == 0) return {};
  Poly r = *this;
  for (Term& t : r.terms_) t.coeff *= c;
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].monomial == o.terms_[i].monomial) || terms_[i].coeff != o.terms_[i].coeff) return false;
  }
  return true;
}

namespace {

Poly merge(const Poly& a, const Poly& b, int sign) {
  std::vector<Term> out;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && grlex_greater(ta[i].monomial, tb[j].monomial))) {
      out.push_back(ta[i++]);
    } else if (i == ta.size() || grlex_greater(tb[j].monomial, ta[i].monomial)) {
      Term t = tb[j++];
      if (sign < 0) t.coeff = -t.coeff;
      out.push_back(std::move(t));
    } else {
      mpq_class c = sign < 0 ? mpq_class(ta[i].coeff - tb[j].coeff) : mpq_class(ta[i].coeff + tb[j].coeff);
      if (sgn(c) != 0) out.push_back(Term{ta[i].monomial, c});
      ++i;
      ++j;
    }
  }
  return PolyBuilder::from_sorted(std::move(out));
}

bool divides(const Monomial& d, const Monomial& m, Monomial& q) {
  q.factors.clear();
  auto j = d.factors.begin();
  for (const auto& [s, e] : m.factors) {
    while (j != d.factors.end() && j->first < s) return false;
    if (j != d.factors.end() && j->first == s) {
      if (j->second > e) return false;
      if (e > j->second) q.factors.emplace_back(s, e - j->second);
      ++j;
    } else {
      q.factors.emplace_back(s, e);
    }
  }
  return j == d.factors.end();
}

Poly monic(const Poly& p) {
  if (p.is_zero()) return p;
  return p.scaled(mpq_class(1 / p.leading().coeff));
}

Poly monomial_gcd(const Poly& mono, const Poly& other) {
  Monomial g = mono.leading().monomial;
  for (const Term& t : other.terms()) {
    Monomial next;
    for (const auto& [s, e] : g.factors) {
      std::uint32_t k = std::min(e, t.monomial.exponent_of(s));
      if (k > 0) next.factors.emplace_back(s, k);
    }
    g = std::move(next);
    if (g.factors.empty()) break;
  }
  return PolyBuilder::from_sorted({Term{g, mpq_class(1)}});
}

Poly content_in(const Poly& p, SymbolId v) {
  Poly g;
  for (const Poly& c : p.coefficients_in(v)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(mpq_class(1));
  }
  return g;
}

Poly primitive_part(const Poly& p, SymbolId v) {
  Poly c = content_in(p, v);
  if (c.is_constant()) return p;
  auto q = exact_divide(p, c);
  if (!q) throw std::logic_error("primitive_part: content does not divide");
  return *q;
}

// Scaled to integer coefficients with no common factor.
Poly numeric_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  mpz_class g = 0, l = 1;
  for (const Term& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  mpq_class k(l, g);
  k.canonicalize();
  return k == 1 ? p : p.scaled(k);
}

Poly pseudo_remainder(const Poly& a, const Poly& b, SymbolId v) {
  std::vector<Poly> ac = a.coefficients_in(v);
  std::vector<Poly> bc = b.coefficients_in(v);
  const std::size_t db = bc.size() - 1;
  const Poly& lcb = bc[db];
  auto trim = [&ac] {
    while (!ac.empty() && ac.back().is_zero()) ac.pop_back();
  };
  trim();
  while (!ac.empty() && ac.size() - 1 >= db) {
    const std::size_t da = ac.size() - 1;
    Poly la = ac[da];
    for (Poly& c : ac) c = lcb * c;
    for (std::size_t k = 0; k <= db; ++k) ac[k + da - db] = ac[k + da - db] - la * bc[k];
    trim();
  }
  return Poly::from_coefficients(v, ac);
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, 1); }
Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, -1); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b.scaled(a.constant_value());
  if (b.is_constant()) return a.scaled(b.constant_value());
  PolyBuilder acc;
  for (const Term& x : a.terms()) {
    for (const Term& y : b.terms()) acc.add(x.monomial * y.monomial, x.coeff * y.coeff);
  }
  return acc.build();
}

std::optional<Poly> exact_divide(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide by zero polynomial");
  if (a.is_zero()) return Poly{};
  if (b.is_constant()) return a.scaled(mpq_class(1 / b.constant_value()));
  Monomial q;
  if (b.is_monomial()) {
    std::vector<Term> out;
    const Term& bt = b.leading();
    for (const Term& t : a.terms()) {
      if (!divides(bt.monomial, t.monomial, q)) return std::nullopt;
      out.push_back(Term{q, t.coeff / bt.coeff});
    }
    return PolyBuilder::from_sorted(std::move(out));
  }
  Poly r = a;
  PolyBuilder quot;
  const Term& lb = b.leading();
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!divides(lb.monomial, lr.monomial, q)) return std::nullopt;
    mpq_class c = lr.coeff / lb.coeff;
    quot.add(q, c);
    Poly step = PolyBuilder::from_sorted({Term{q, c}});
    r = r - step * b;
  }
  return quot.build();
}

namespace {

// Arithmetic modulo the Mersenne prime 2^61 - 1.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(z & kPrime) + static_cast<std::uint64_t>(z >> 61);
  return r >= kPrime ? r - kPrime : r;
}
std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t r = a + b;
  return r >= kPrime ? r - kPrime : r;
}
std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e > 0; e >>= 1, a = mod_mul(a, a)) {
    if (e & 1) r = mod_mul(r, a);
  }
  return r;
}
std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kPrime - 2); }

std::optional<std::uint64_t> mod_of(const mpq_class& q) {
  const mpz_class m(static_cast<unsigned long>(kPrime));
  mpz_class n = q.get_num() % m, d = q.get_den() % m;
  if (n < 0) n += m;
  if (d == 0) return std::nullopt;
  return mod_mul(n.get_ui(), mod_inv(d.get_ui()));
}

// Image of p in F_p[v] after sending every other symbol s to point(s), or
// nullopt when a coefficient denominator vanishes mod p.
std::optional<std::vector<std::uint64_t>> specialize(const Poly& p, SymbolId v,
                                                     const std::function<std::uint64_t(SymbolId)>& point) {
  std::vector<std::uint64_t> out(p.degree_in(v) + 1, 0);
  for (const Term& t : p.terms()) {
    auto c = mod_of(t.coeff);
    if (!c) return std::nullopt;
    std::uint64_t val = *c;
    std::size_t k = 0;
    for (const auto& [s, e] : t.monomial.factors) {
      if (s == v) k = e;
      else val = mod_mul(val, mod_pow(point(s), e));
    }
    out[k] = mod_add(out[k], val);
  }
  return out;
}

void trim_mod(std::vector<std::uint64_t>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Degree of gcd(a, b) in F_p[v].
std::size_t mod_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  trim_mod(a);
  trim_mod(b);
  while (!b.empty()) {
    if (a.size() < b.size()) {
      std::swap(a, b);
      continue;
    }
    const std::uint64_t inv = mod_inv(b.back());
    while (a.size() >= b.size()) {
      const std::uint64_t k = mod_mul(a.back(), inv);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = mod_sub(a[i + shift], mod_mul(k, b[i]));
      a.pop_back();
      trim_mod(a);
    }
    std::swap(a, b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// True only when gcd(a, b) is certainly constant: for every shared symbol the
// images in F_p keep their degree and are coprime.
bool certainly_coprime(const Poly& a, const Poly& b, const std::vector<SymbolId>& shared) {
  auto point = [](SymbolId s) {
    std::uint64_t z = (static_cast<std::uint64_t>(s) + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return (z ^ (z >> 31)) % kPrime;
  };
  for (SymbolId v : shared) {
    auto ia = specialize(a, v, point);
    auto ib = specialize(b, v, point);
    if (!ia || !ib) return false;
    if (ia->back() == 0 || ib->back() == 0) return false;
    if (mod_gcd_degree(*ia, *ib) != 0) return false;
  }
  return true;
}

Poly gcd_through_coefficients(const Poly& p, SymbolId v, Poly g) {
  std::vector<Poly> cs = p.coefficients_in(v);
  std::sort(cs.begin(), cs.end(), [](const Poly& x, const Poly& y) { return x.terms().size() < y.terms().size(); });
  for (const Poly& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(c, g);
    if (g.is_constant()) return Poly(mpq_class(1));
  }
  return g;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return Poly(mpq_class(1));
  if (a == b) return monic(a);
  if (a.is_monomial()) return monomial_gcd(a, b);
  if (b.is_monomial()) return monomial_gcd(b, a);

  const auto va = a.symbols();
  const auto vb = b.symbols();
  // A variable only one side mentions: fold the other side through its
  // coefficients, starting from the smaller operand.
  for (SymbolId v : va) {
    if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd_through_coefficients(a, v, b);
  }
  for (SymbolId v : vb) {
    if (!std::binary_search(va.begin(), va.end(), v)) return gcd_through_coefficients(b, v, a);
  }
  if (certainly_coprime(a, b, va)) return Poly(mpq_class(1));
  // Same variable set: recurse on the variable where either side has the
  // lowest degree, ties broken by combined degree.
  SymbolId main = va.front();
  std::pair<unsigned, unsigned> best{~0U, ~0U};
  for (SymbolId v : va) {
    const unsigned da = a.degree_in(v), db = b.degree_in(v);
    const std::pair<unsigned, unsigned> key{std::min(da, db), da + db};
    if (key < best) {
      best = key;
      main = v;
    }
  }
  Poly ca = content_in(a, main);
  Poly cb = content_in(b, main);
  Poly pa = ca.is_constant() ? a : *exact_divide(a, ca);
  Poly pb = cb.is_constant() ? b : *exact_divide(b, cb);
  Poly c = gcd(ca, cb);

  if (pa.degree_in(main) < pb.degree_in(main)) std::swap(pa, pb);
  pa = numeric_primitive(pa);
  pb = numeric_primitive(pb);
  Poly g;
  while (true) {
    Poly r = pseudo_remainder(pa, pb, main);
    if (r.is_zero()) {
      g = primitive_part(pb, main);
      break;
    }
    if (r.degree_in(main) == 0) {
      g = Poly(mpq_class(1));
      break;
    }
    pa = std::move(pb);
    pb = numeric_primitive(primitive_part(numeric_primitive(r), main));
  }
  return monic(c * g);
}

namespace {

void normalize_numeric(Poly& num, Poly& den) {
  mpz_class l = 1;
  for (const Poly* p : {&num, &den}) {
    for (const Term& t : p->terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  mpz_class g = 0;
  for (const Poly* p : {&num, &den}) {
    for (const Term& t : p->terms()) {
      mpz_class scaled_num = t.coeff.get_num() * (l / t.coeff.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled_num.get_mpz_t());
    }
  }
  mpq_class factor(l, g);
  factor.canonicalize();
  if (sgn(den.leading().coeff) < 0) factor = -factor;
  if (factor != 1) {
    num = num.scaled(factor);
    den = den.scaled(factor);
  }
}

}  // namespace

RatFunc RatFunc::constant(const mpq_class& c) {
  RatFunc r;
  r.num = Poly(c);
  return r;
}

RatFunc RatFunc::symbol(SymbolId v) {
  RatFunc r;
  r.num = Poly::symbol(v);
  return r;
}

RatFunc RatFunc::make_undefined() {
  RatFunc r;
  r.undefined = true;
  r.den = Poly{};
  return r;
}

RatFunc RatFunc::reduce(Poly num, Poly den) {
  if (den.is_zero()) return make_undefined();
  if (num.is_zero()) return constant(0);
  Poly g = gcd(num, den);
  if (!g.is_constant()) {
    num = *exact_divide(num, g);
    den = *exact_divide(den, g);
  }
  normalize_numeric(num, den);
  RatFunc r;
  r.num = std::move(num);
  r.den = std::move(den);
  return r;
}

namespace {

// For inputs already free of common factors.
RatFunc from_coprime(Poly num, Poly den) {
  if (num.is_zero()) return RatFunc::constant(0);
  normalize_numeric(num, den);
  RatFunc r;
  r.num = std::move(num);
  r.den = std::move(den);
  return r;
}

}  // namespace

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.undefined || b.undefined) return RatFunc::make_undefined();
  if (a.num.is_zero()) return b;
  if (b.num.is_zero()) return a;
  if (a.den == b.den) return RatFunc::reduce(a.num + b.num, a.den);
  Poly g = gcd(a.den, b.den);
  Poly ag = g.is_constant() ? a.den : *exact_divide(a.den, g);
  Poly bg = g.is_constant() ? b.den : *exact_divide(b.den, g);
  return RatFunc::reduce(a.num * bg + b.num * ag, ag * b.den);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) {
  RatFunc nb = b;
  nb.num = -nb.num;
  return a + nb;
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  if (a.undefined || b.undefined) return RatFunc::make_undefined();
  if (a.num.is_zero() || b.num.is_zero()) return RatFunc::constant(0);
  Poly g1 = gcd(a.num, b.den);
  Poly g2 = gcd(b.num, a.den);
  Poly an = g1.is_constant() ? a.num : *exact_divide(a.num, g1);
  Poly bd = g1.is_constant() ? b.den : *exact_divide(b.den, g1);
  Poly bn = g2.is_constant() ? b.num : *exact_divide(b.num, g2);
  Poly ad = g2.is_constant() ? a.den : *exact_divide(a.den, g2);
  return from_coprime(an * bn, ad * bd);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (a.undefined || b.undefined || b.num.is_zero()) return RatFunc::make_undefined();
  RatFunc inv;
  inv.num = b.den;
  inv.den = b.num;
  return a * inv;
}

RatFunc pow(const RatFunc& a, long n) {
  if (a.undefined) return a;
  if (n == 0) return RatFunc::constant(1);
  if (n < 0) {
    if (a.num.is_zero()) return RatFunc::make_undefined();
    RatFunc inv;
    inv.num = a.den;
    inv.den = a.num;
    return pow(from_coprime(inv.num, inv.den), -n);
  }
  Poly num(mpq_class(1)), den(mpq_class(1));
  Poly bn = a.num, bd = a.den;
  auto k = static_cast<unsigned long>(n);
  while (k) {
    if (k & 1UL) {
      num = num * bn;
      den = den * bd;
    }
    k >>= 1U;
    if (k) {
      bn = bn * bn;
      bd = bd * bd;
    }
  }
  return from_coprime(std::move(num), std::move(den));
}

}  // namespace odelin
