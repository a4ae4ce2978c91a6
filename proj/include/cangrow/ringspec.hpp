#pragma once

// Text formats: the ring spec
//   ring { field: F32003; vars: x,y,z; ideal: x^2, x*y, y^2, z^2 }
// and the module mini-language
//   canonical | k | cyclic(p,...) | ideal(p,...) | coker([[p,...],...])
// Both parse into field-agnostic data (integer coefficients) that is then
// instantiated over a concrete Field.

#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cangrow/algebra.hpp"
#include "cangrow/errors.hpp"
#include "cangrow/field.hpp"
#include "cangrow/module.hpp"
#include "cangrow/polynomial.hpp"

namespace cangrow {

struct RawTerm {
  mpz_class coeff;
  Monomial mono;
};
using RawPoly = std::vector<RawTerm>;

struct RingSpec {
  FieldSpec field;
  std::vector<std::string> vars;
  std::vector<RawPoly> ideal;
};

enum class ModuleKind { canonical, residue_field, cyclic, ideal, coker };

struct ModuleSpec {
  ModuleKind kind = ModuleKind::canonical;
  std::vector<RawPoly> entries;             // cyclic / ideal generators
  std::vector<std::vector<RawPoly>> rows;   // coker matrix, one row per generator
  std::string text;
};

namespace detail {

struct Token {
  enum Kind { ident, integer, punct, end } kind = end;
  std::string text;
  std::size_t line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& what, const Token& at) const { throw ParseError(what, at.line, at.column); }
  [[noreturn]] void fail(const std::string& what) const { fail(what, tok_); }

  void expect_punct(char c) {
    if (tok_.kind != Token::punct || tok_.text[0] != c) fail(std::string("expected '") + c + "'" + found());
    advance();
  }
  void expect_word(const std::string& w) {
    if (tok_.kind != Token::ident || tok_.text != w) fail("expected '" + w + "'" + found());
    advance();
  }
  bool accept_punct(char c) {
    if (tok_.kind == Token::punct && tok_.text[0] == c) {
      advance();
      return true;
    }
    return false;
  }
  std::string found() const {
    if (tok_.kind == Token::end) return ", found end of input";
    return ", found '" + tok_.text + "'";
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) step();
    tok_ = Token{};
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= s_.size()) return;
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      tok_.kind = Token::ident;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        tok_.text += s_[pos_];
        step();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      tok_.kind = Token::integer;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        tok_.text += s_[pos_];
        step();
      }
    } else if (std::string("{}:;,+-*^()[]").find(c) != std::string::npos) {
      tok_.kind = Token::punct;
      tok_.text = std::string(1, c);
      step();
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
  }
  void step() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Token tok_;
};

inline void add_term(RawPoly& p, const RawTerm& t) {
  for (auto& u : p)
    if (u.mono == t.mono) {
      u.coeff += t.coeff;
      return;
    }
  p.push_back(t);
}

inline RawPoly parse_poly(Lexer& lx, const std::vector<std::string>& vars) {
  auto factor = [&](RawTerm& t) {
    Token tok = lx.next();
    if (tok.kind == Token::integer) {
      t.coeff *= mpz_class(tok.text);
      return;
    }
    if (tok.kind != Token::ident) lx.fail("expected a variable or an integer" + std::string(tok.kind == Token::end ? ", found end of input" : ", found '" + tok.text + "'"), tok);
    std::size_t v = vars.size();
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == tok.text) v = i;
    if (v == vars.size()) lx.fail("unknown variable '" + tok.text + "'", tok);
    unsigned e = 1;
    if (lx.accept_punct('^')) {
      Token et = lx.next();
      if (et.kind != Token::integer) lx.fail("expected an exponent", et);
      if (et.text.size() > 4 || std::stoul(et.text) > kMaxExponent)
        lx.fail("exponent exceeds the cap of " + std::to_string(kMaxExponent), et);
      e = static_cast<unsigned>(std::stoul(et.text));
    }
    if (t.mono.exp[v] + e > kMaxExponent) lx.fail("exponent exceeds the cap of " + std::to_string(kMaxExponent), tok);
    t.mono.exp[v] = static_cast<std::uint16_t>(t.mono.exp[v] + e);
  };
  auto term = [&](int sign) {
    RawTerm t{mpz_class(sign), Monomial::one()};
    factor(t);
    while (lx.accept_punct('*')) factor(t);
    return t;
  };
  RawPoly p;
  add_term(p, term(1));
  for (;;) {
    if (lx.accept_punct('+')) {
      add_term(p, term(1));
    } else if (lx.accept_punct('-')) {
      add_term(p, term(-1));
    } else {
      break;
    }
  }
  RawPoly out;
  for (auto& t : p)
    if (t.coeff != 0) out.push_back(t);
  return out;
}

}  // namespace detail

inline RingSpec parse_ring_spec(const std::string& text) {
  detail::Lexer lx(text);
  RingSpec spec;
  lx.expect_word("ring");
  lx.expect_punct('{');
  lx.expect_word("field");
  lx.expect_punct(':');
  {
    detail::Token t = lx.next();
    // "F32003" lexes as a single identifier; "F 32003" as two tokens.
    std::string digits;
    if (t.kind == detail::Token::ident && t.text == "Q") {
      spec.field = FieldSpec::rationals();
    } else if (t.kind == detail::Token::ident && t.text[0] == 'F') {
      digits = t.text.substr(1);
      if (digits.empty()) {
        detail::Token n = lx.next();
        if (n.kind != detail::Token::integer) lx.fail("expected the field characteristic", n);
        digits = n.text;
      }
      for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) lx.fail("expected 'Q' or 'F' followed by a prime", t);
      if (digits.size() > 10 || std::stoull(digits) >= (1ull << 31))
        lx.fail("field characteristic must be a prime below 2^31", t);
      try {
        spec.field = FieldSpec::prime_field(static_cast<std::uint32_t>(std::stoull(digits)));
      } catch (const InvalidArgument& e) {
        lx.fail(e.what(), t);
      }
    } else {
      lx.fail("expected 'Q' or 'F' followed by a prime", t);
    }
  }
  lx.expect_punct(';');
  lx.expect_word("vars");
  lx.expect_punct(':');
  do {
    detail::Token t = lx.next();
    if (t.kind != detail::Token::ident) lx.fail("expected a variable name", t);
    for (const auto& v : spec.vars)
      if (v == t.text) lx.fail("duplicate variable '" + t.text + "'", t);
    if (spec.vars.size() == kMaxVars) lx.fail("at most " + std::to_string(kMaxVars) + " variables are supported", t);
    spec.vars.push_back(t.text);
  } while (lx.accept_punct(','));
  lx.expect_punct(';');
  lx.expect_word("ideal");
  lx.expect_punct(':');
  do {
    spec.ideal.push_back(detail::parse_poly(lx, spec.vars));
  } while (lx.accept_punct(','));
  lx.expect_punct('}');
  if (lx.peek().kind != detail::Token::end) lx.fail("trailing input after the ring spec");
  return spec;
}

inline ModuleSpec parse_module_spec(const std::string& text, const std::vector<std::string>& vars) {
  detail::Lexer lx(text);
  ModuleSpec m;
  m.text = text;
  detail::Token t = lx.next();
  if (t.kind != detail::Token::ident) lx.fail("expected a module: canonical, k, cyclic, ideal or coker", t);
  auto poly_list = [&](char close) {
    std::vector<RawPoly> out;
    do {
      out.push_back(detail::parse_poly(lx, vars));
    } while (lx.accept_punct(','));
    lx.expect_punct(close);
    return out;
  };
  if (t.text == "canonical") {
    m.kind = ModuleKind::canonical;
  } else if (t.text == "k") {
    m.kind = ModuleKind::residue_field;
  } else if (t.text == "cyclic" || t.text == "ideal") {
    m.kind = t.text == "cyclic" ? ModuleKind::cyclic : ModuleKind::ideal;
    lx.expect_punct('(');
    m.entries = poly_list(')');
  } else if (t.text == "coker") {
    m.kind = ModuleKind::coker;
    lx.expect_punct('(');
    lx.expect_punct('[');
    do {
      detail::Token at = lx.peek();
      lx.expect_punct('[');
      m.rows.push_back(poly_list(']'));
      if (m.rows.back().size() != m.rows.front().size()) lx.fail("matrix rows have different lengths", at);
    } while (lx.accept_punct(','));
    lx.expect_punct(']');
    lx.expect_punct(')');
  } else {
    lx.fail("unknown module '" + t.text + "'", t);
  }
  if (lx.peek().kind != detail::Token::end) lx.fail("trailing input after the module spec");
  return m;
}

template <Field F>
F make_field(const FieldSpec& spec);

template <>
inline PrimeField make_field<PrimeField>(const FieldSpec& spec) {
  return PrimeField(spec.p);
}

template <>
inline RationalField make_field<RationalField>(const FieldSpec&) {
  return RationalField();
}

template <Field F>
Polynomial<F> to_polynomial(const PolyRing<F>& P, const RawPoly& raw) {
  std::vector<Term<F>> terms;
  for (const auto& t : raw) terms.push_back({t.mono, P.field().from_mpz(t.coeff)});
  return P.from_terms(std::move(terms));
}

template <Field F>
AlgebraPtr<F> build_algebra(const F& field, const RingSpec& spec, const AlgebraOptions& opts = {}) {
  PolyRing<F> P(field, spec.vars);
  std::vector<Polynomial<F>> gens;
  for (const auto& r : spec.ideal) {
    auto p = to_polynomial(P, r);
    if (!p.is_zero()) gens.push_back(std::move(p));
  }
  if (gens.empty()) throw NotArtinian("the zero ideal has positive dimension; supply an Artinian reduction");
  return ArtinAlgebra<F>::from_quotient(field, spec.vars, gens, opts);
}

template <Field F>
PresentedModule<F> build_module(const AlgebraPtr<F>& R, const ModuleSpec& spec, WorkBudget* budget = nullptr) {
  using Vec = SparseVec<typename F::value_type>;
  const auto& P = R->poly_ring();
  auto elements = [&](const std::vector<RawPoly>& raws) {
    std::vector<Vec> out;
    for (const auto& r : raws) out.push_back(R->element(to_polynomial(P, r)));
    return out;
  };
  PresentedModule<F> M = [&]() {
    switch (spec.kind) {
      case ModuleKind::canonical: return PresentedModule<F>::canonical(R, budget);
      case ModuleKind::residue_field: return PresentedModule<F>::residue_field(R);
      case ModuleKind::cyclic: return PresentedModule<F>::cyclic(R, elements(spec.entries), budget);
      case ModuleKind::ideal: {
        auto gens = elements(spec.entries);
        bool all_zero = true;
        for (const auto& g : gens) all_zero = all_zero && g.empty();
        if (all_zero) throw ZeroModule("the ideal is zero in the ring");
        return PresentedModule<F>::ideal(R, gens, budget);
      }
      case ModuleKind::coker: {
        std::size_t b0 = spec.rows.size(), cols = spec.rows.front().size(), n = R->dim();
        std::vector<Vec> columns(cols);
        for (std::size_t g = 0; g < b0; ++g) {
          auto row = elements(spec.rows[g]);
          for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t k = 0; k < row[j].size(); ++k)
              columns[j].push(static_cast<Index>(g * n + row[j].index[k]), row[j].value[k]);
        }
        return PresentedModule<F>::cokernel(R, b0, columns, budget);
      }
    }
    throw InvalidArgument("unknown module kind");
  }();
  if (spec.kind != ModuleKind::canonical && spec.kind != ModuleKind::residue_field) M.set_description(spec.text);
  return M;
}

}  // namespace cangrow
