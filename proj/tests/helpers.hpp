#pragma once

#include <string>
#include <vector>

#include "cangrow/criteria.hpp"
#include "cangrow/ringspec.hpp"

namespace testing_helpers {

using namespace cangrow;

template <Field F>
Polynomial<F> poly(const PolyRing<F>& P, const std::string& text) {
  detail::Lexer lx(text);
  return to_polynomial(P, detail::parse_poly(lx, P.variables()));
}

template <Field F>
std::vector<Polynomial<F>> polys(const PolyRing<F>& P, const std::vector<std::string>& texts) {
  std::vector<Polynomial<F>> out;
  for (const auto& t : texts) out.push_back(poly(P, t));
  return out;
}

template <Field F = PrimeField>
AlgebraPtr<F> ring(const std::string& spec, const F& field = F(32003)) {
  return build_algebra(field, parse_ring_spec(spec));
}

inline AlgebraPtr<RationalField> ring_q(const std::string& spec) { return build_algebra(RationalField(), parse_ring_spec(spec)); }

template <Field F>
PresentedModule<F> module(const AlgebraPtr<F>& R, const std::string& spec) {
  return build_module(R, parse_module_spec(spec, R->variables()));
}

/// k[x_1..x_e]/(x_i^2 - x_{i+1}^2, x_i x_j): Gorenstein, Hilbert series 1 + e t + t^2.
inline std::string b_ring(int e) {
  std::string vars, ideal;
  for (int i = 1; i <= e; ++i) vars += (i > 1 ? "," : "") + std::string("x") + std::to_string(i);
  for (int i = 1; i < e; ++i)
    ideal += (ideal.empty() ? "" : ", ") + std::string("x") + std::to_string(i) + "^2 - x" + std::to_string(i + 1) + "^2";
  for (int i = 1; i <= e; ++i)
    for (int j = i + 1; j <= e; ++j) ideal += ", x" + std::to_string(i) + "*x" + std::to_string(j);
  return "ring { field: F32003; vars: " + vars + "; ideal: " + ideal + " }";
}

inline const char* kEx26 = "ring { field: F32003; vars: x,y,z; ideal: x^2, x*y, y^2, z^2 }";
inline const char* kEx27 = "ring { field: F32003; vars: x,y; ideal: x^3, y^3 }";
inline const char* kA = "ring { field: F32003; vars: a,b; ideal: a^2, a*b, b^2 }";

/// Coefficients of 1/(1 - e t + t^2) up to t^n.
inline std::vector<std::size_t> inverse_series(int e, std::size_t n) {
  std::vector<long long> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) c[i] = e * c[i - 1] - (i >= 2 ? c[i - 2] : 0);
  return std::vector<std::size_t>(c.begin(), c.end());
}

}  // namespace testing_helpers
