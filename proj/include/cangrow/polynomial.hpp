#pragma once

// Monomials, polynomials and the Buchberger engine used to turn an ideal of
// a polynomial ring into the standard-monomial basis of its quotient.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cangrow/errors.hpp"
#include "cangrow/field.hpp"

namespace cangrow {

inline constexpr std::size_t kMaxVars = 12;
inline constexpr unsigned kMaxExponent = 256;

/// Exponent vector. Slots beyond the ambient variable count stay zero, so
/// comparisons over the whole array are well defined.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  static Monomial one() { return {}; }
  static Monomial variable(std::size_t i, unsigned power = 1) {
    Monomial m;
    m.exp[i] = static_cast<std::uint16_t>(power);
    return m;
  }

  unsigned degree() const { return std::accumulate(exp.begin(), exp.end(), 0u); }
  bool is_one() const { return degree() == 0; }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp[i] > other.exp[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned e = unsigned(a.exp[i]) + b.exp[i];
      if (e > kMaxExponent) throw SizeCap("exponent exceeds the cap of " + std::to_string(kMaxExponent));
      m.exp[i] = static_cast<std::uint16_t>(e);
    }
    return m;
  }
  /// a / b, assuming b divides a.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = static_cast<std::uint16_t>(a.exp[i] - b.exp[i]);
    return m;
  }
  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (std::size_t i = 0; i < kMaxVars; ++i) m.exp[i] = std::max(a.exp[i], b.exp[i]);
    return m;
  }
  static bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (a.exp[i] && b.exp[i]) return false;
    return true;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Monomial order; variable precedence is declaration order (x1 > x2 > ...).
struct MonomialOrder {
  enum class Kind { degrevlex, lex };
  Kind kind = Kind::degrevlex;

  /// Negative, zero or positive as a <, =, > b.
  int compare(const Monomial& a, const Monomial& b) const {
    if (kind == Kind::lex) {
      for (std::size_t i = 0; i < kMaxVars; ++i)
        if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i] ? 1 : -1;
      return 0;
    }
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t i = kMaxVars; i-- > 0;)
      if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? 1 : -1;
    return 0;
  }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;
};

template <Field F>
struct Term {
  Monomial mono;
  typename F::value_type coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Polynomial as a list of terms sorted decreasingly in the owning ring's
/// order, with no zero coefficients.
template <Field F>
struct Polynomial {
  std::vector<Term<F>> terms;

  bool is_zero() const { return terms.empty(); }
  const Term<F>& leading() const { return terms.front(); }
  bool is_constant() const { return terms.size() == 1 && terms.front().mono.is_one(); }
  bool has_constant_term() const { return !terms.empty() && terms.back().mono.is_one(); }
  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms) d = std::max(d, t.mono.degree());
    return d;
  }
  bool is_homogeneous() const {
    for (const auto& t : terms)
      if (t.mono.degree() != terms.front().mono.degree()) return false;
    return true;
  }
  bool is_monomial() const { return terms.size() == 1; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// Polynomial ring k[x_1..x_n] with a fixed monomial order.
template <Field F>
class PolyRing {
 public:
  using V = typename F::value_type;
  using Poly = Polynomial<F>;

  PolyRing(const F& field, std::vector<std::string> vars, MonomialOrder order = {})
      : field_(field), vars_(std::move(vars)), order_(order) {
    if (vars_.empty()) throw InvalidArgument("a ring needs at least one variable");
    if (vars_.size() > kMaxVars)
      throw SizeCap("at most " + std::to_string(kMaxVars) + " variables are supported");
  }

  const F& field() const { return field_; }
  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const MonomialOrder& order() const { return order_; }

  Poly zero() const { return {}; }
  Poly constant(const V& c) const { return monomial(Monomial::one(), c); }
  Poly monomial(const Monomial& m, const V& c) const {
    Poly p;
    if (!field_.is_zero(c)) p.terms.push_back({m, c});
    return p;
  }
  Poly variable(std::size_t i) const { return monomial(Monomial::variable(i), field_.one()); }

  /// Builds a polynomial from unsorted terms, merging duplicates.
  Poly from_terms(std::vector<Term<F>> terms) const {
    std::sort(terms.begin(), terms.end(),
              [&](const Term<F>& a, const Term<F>& b) { return order_.greater(a.mono, b.mono); });
    Poly p;
    for (auto& t : terms) {
      if (!p.terms.empty() && p.terms.back().mono == t.mono) {
        p.terms.back().coeff = field_.add(p.terms.back().coeff, t.coeff);
        if (field_.is_zero(p.terms.back().coeff)) p.terms.pop_back();
      } else if (!field_.is_zero(t.coeff)) {
        p.terms.push_back(std::move(t));
      }
    }
    return p;
  }

  /// a*ca + b*cb, merging the sorted term lists.
  Poly linear(const Poly& a, const V& ca, const Poly& b, const V& cb) const {
    Poly out;
    out.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    auto emit = [&](const Monomial& m, V c) {
      if (!field_.is_zero(c)) out.terms.push_back({m, std::move(c)});
    };
    while (i < a.terms.size() || j < b.terms.size()) {
      int cmp = i == a.terms.size() ? -1 : j == b.terms.size() ? 1 : order_.compare(a.terms[i].mono, b.terms[j].mono);
      if (cmp > 0) {
        emit(a.terms[i].mono, field_.mul(ca, a.terms[i].coeff));
        ++i;
      } else if (cmp < 0) {
        emit(b.terms[j].mono, field_.mul(cb, b.terms[j].coeff));
        ++j;
      } else {
        emit(a.terms[i].mono, field_.add(field_.mul(ca, a.terms[i].coeff), field_.mul(cb, b.terms[j].coeff)));
        ++i;
        ++j;
      }
    }
    return out;
  }
  Poly add(const Poly& a, const Poly& b) const { return linear(a, field_.one(), b, field_.one()); }
  Poly sub(const Poly& a, const Poly& b) const { return linear(a, field_.one(), b, field_.neg(field_.one())); }

  /// c * m * p; multiplying by a monomial preserves the order.
  Poly mul_term(const Poly& p, const Monomial& m, const V& c) const {
    Poly out;
    if (field_.is_zero(c)) return out;
    out.terms.reserve(p.terms.size());
    for (const auto& t : p.terms) out.terms.push_back({t.mono * m, field_.mul(c, t.coeff)});
    return out;
  }
  Poly mul(const Poly& a, const Poly& b) const {
    std::vector<Term<F>> terms;
    terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& s : a.terms)
      for (const auto& t : b.terms) terms.push_back({s.mono * t.mono, field_.mul(s.coeff, t.coeff)});
    return from_terms(std::move(terms));
  }
  Poly pow(const Poly& a, unsigned e) const {
    Poly r = constant(field_.one());
    for (unsigned k = 0; k < e; ++k) r = mul(r, a);
    return r;
  }
  Poly monic(const Poly& p) const {
    if (p.is_zero()) return p;
    return mul_term(p, Monomial::one(), field_.inv(p.leading().coeff));
  }

  std::string to_string(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (!m.exp[i]) continue;
      if (!s.empty()) s += "*";
      s += vars_[i];
      if (m.exp[i] > 1) s += "^" + std::to_string(m.exp[i]);
    }
    return s.empty() ? "1" : s;
  }

  /// Prints in the ring-spec grammar: terms joined by + and -, each
  /// optionally led by an integer coefficient.
  std::string to_string(const Poly& p) const {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : p.terms) {
      std::string c = field_.to_string(t.coeff);
      bool negative = !c.empty() && c.front() == '-';
      if (negative) c.erase(0, 1);
      if (first) {
        if (negative) s += "0 - ";
      } else {
        s += negative ? " - " : " + ";
      }
      first = false;
      bool unit = c == "1";
      if (t.mono.is_one()) {
        s += c;
      } else {
        if (!unit) s += c + "*";
        s += to_string(t.mono);
      }
    }
    return s;
  }

 private:
  F field_;
  std::vector<std::string> vars_;
  MonomialOrder order_;
};

/// Reduced, monic Gröbner basis sorted by increasing leading monomial.
template <Field F>
struct GroebnerBasis {
  MonomialOrder order;
  std::vector<Polynomial<F>> generators;

  bool is_unit_ideal() const { return generators.size() == 1 && generators.front().is_constant(); }
  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    for (const auto& g : generators) out.push_back(g.leading().mono);
    return out;
  }
};

/// Full reduction of p modulo the (not necessarily reduced) list G.
template <Field F>
Polynomial<F> reduce_full(const PolyRing<F>& ring, Polynomial<F> p, const std::vector<Polynomial<F>>& G) {
  const F& k = ring.field();
  Polynomial<F> rem;
  while (!p.is_zero()) {
    const Term<F>& lt = p.leading();
    const Polynomial<F>* div = nullptr;
    for (const auto& g : G)
      if (!g.is_zero() && g.leading().mono.divides(lt.mono)) {
        div = &g;
        break;
      }
    if (!div) {
      rem.terms.push_back(lt);
      p.terms.erase(p.terms.begin());
      continue;
    }
    auto c = k.div(lt.coeff, div->leading().coeff);
    p = ring.linear(p, k.one(), ring.mul_term(*div, lt.mono / div->leading().mono, c), k.neg(k.one()));
  }
  return rem;
}

template <Field F>
Polynomial<F> normal_form(const PolyRing<F>& ring, const Polynomial<F>& p, const GroebnerBasis<F>& gb) {
  return reduce_full(ring, p, gb.generators);
}

/// Buchberger's algorithm with the normal selection strategy (pairs by lcm
/// degree, then index) and the coprime-leading-term criterion.
///
/// Throws UnitInIdeal when a constant appears: the quotient would be zero.
template <Field F>
GroebnerBasis<F> buchberger(const PolyRing<F>& ring, const std::vector<Polynomial<F>>& generators) {
  const F& k = ring.field();
  std::vector<Polynomial<F>> G;
  for (const auto& g : generators) {
    if (g.is_zero()) continue;
    if (g.is_constant()) throw UnitInIdeal("the ideal contains a nonzero constant");
    G.push_back(ring.monic(g));
  }
  struct Pair {
    unsigned degree;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  auto add_pairs = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (G[i].is_zero()) continue;
      const auto& a = G[i].leading().mono;
      const auto& b = G[j].leading().mono;
      if (Monomial::coprime(a, b)) continue;
      pairs.push_back({Monomial::lcm(a, b).degree(), i, j});
    }
  };
  for (std::size_t j = 0; j < G.size(); ++j) add_pairs(j);

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return std::tie(a.degree, a.j, a.i) < std::tie(b.degree, b.j, b.i);
    });
    Pair pr = *best;
    pairs.erase(best);
    if (G[pr.i].is_zero() || G[pr.j].is_zero()) continue;
    const auto& gi = G[pr.i];
    const auto& gj = G[pr.j];
    Monomial l = Monomial::lcm(gi.leading().mono, gj.leading().mono);
    auto s = ring.linear(ring.mul_term(gi, l / gi.leading().mono, k.one()), k.one(),
                         ring.mul_term(gj, l / gj.leading().mono, k.one()), k.neg(k.one()));
    auto r = reduce_full(ring, s, G);
    if (r.is_zero()) continue;
    if (r.is_constant()) throw UnitInIdeal("the ideal contains a nonzero constant");
    G.push_back(ring.monic(r));
    add_pairs(G.size() - 1);
  }

  // Minimalize then interreduce.
  std::vector<Polynomial<F>> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& a = G[j].leading().mono;
      const auto& b = G[i].leading().mono;
      if (a.divides(b) && (a != b || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial<F>> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Polynomial<F> tail = minimal[i];
    Term<F> lead = tail.terms.front();
    tail.terms.erase(tail.terms.begin());
    tail = reduce_full(ring, tail, others);
    tail.terms.insert(tail.terms.begin(), lead);
    minimal[i] = ring.monic(tail);
  }
  std::sort(minimal.begin(), minimal.end(), [&](const Polynomial<F>& a, const Polynomial<F>& b) {
    return ring.order().compare(a.leading().mono, b.leading().mono) < 0;
  });
  return GroebnerBasis<F>{ring.order(), std::move(minimal)};
}

/// Whether every variable has a pure power among the leading monomials.
template <Field F>
bool is_zero_dimensional(const GroebnerBasis<F>& gb, std::size_t nvars) {
  for (std::size_t v = 0; v < nvars; ++v) {
    bool found = false;
    for (const auto& g : gb.generators) {
      const auto& m = g.leading().mono;
      if (m.exp[v] > 0 && m.degree() == m.exp[v]) found = true;
    }
    if (!found) return false;
  }
  return true;
}

/// Monomials outside the leading-term ideal, by increasing degree and within a
/// degree by decreasing monomial order. Throws NotArtinian if the quotient is
/// infinite-dimensional and SizeCap if more than `cap` monomials exist.
template <Field F>
std::vector<Monomial> standard_monomials(const GroebnerBasis<F>& gb, std::size_t nvars,
                                         std::size_t cap = std::size_t(-1)) {
  if (!is_zero_dimensional(gb, nvars))
    throw NotArtinian(
        "the ideal is not zero-dimensional; reduce the ring and module modulo a maximal "
        "regular sequence and supply the Artinian quotient instead");
  auto leads = gb.leading_monomials();
  std::vector<Monomial> out;
  // Depth-first over exponent vectors; divisibility is monotone so pruning
  // at the first leading-term multiple is safe.
  Monomial cur;
  auto standard = [&](const Monomial& m) {
    for (const auto& l : leads)
      if (l.divides(m)) return false;
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == nvars) {
      out.push_back(cur);
      if (out.size() > cap) throw SizeCap("quotient dimension exceeds the cap of " + std::to_string(cap));
      return;
    }
    for (unsigned e = 0;; ++e) {
      cur.exp[v] = static_cast<std::uint16_t>(e);
      if (!standard(cur)) break;
      rec(v + 1);
    }
    cur.exp[v] = 0;
  };
  rec(0);
  MonomialOrder order = gb.order;
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return order.compare(a, b) > 0;
  });
  return out;
}

}  // namespace cangrow
