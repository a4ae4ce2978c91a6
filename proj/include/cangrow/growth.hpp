#pragma once

// Betti-sequence analysis: truncated Poincaré series, exact linear recurrence
// fitting, curvature bounds by Sturm isolation, growth classification and the
// Gorenstein-deviation quotient.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cangrow/errors.hpp"
#include "cangrow/field.hpp"
#include "cangrow/linalg.hpp"

namespace cangrow {

using TruncatedSeries = std::vector<mpz_class>;

inline TruncatedSeries to_series(const std::vector<std::size_t>& v) {
  TruncatedSeries s;
  for (auto x : v) s.push_back(mpz_class(static_cast<unsigned long>(x)));
  return s;
}

/// Cauchy product truncated to the shorter length.
inline TruncatedSeries series_product(const TruncatedSeries& a, const TruncatedSeries& b) {
  std::size_t len = std::min(a.size(), b.size());
  TruncatedSeries out(len, 0);
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
  return out;
}

/// Polynomials over Q, coefficient of x^i at index i, no trailing zeros.
namespace qpoly {

using Poly = std::vector<mpq_class>;

inline void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}
inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline mpq_class eval(const Poly& p, const mpq_class& x) {
  mpq_class r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

/// Remainder of a by b (b nonzero).
inline Poly rem(Poly a, const Poly& b) {
  trim(a);
  while (degree(a) >= degree(b)) {
    mpq_class c = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
    trim(a);
  }
  return a;
}

inline Poly quotient(Poly a, const Poly& b) {
  trim(a);
  if (degree(a) < degree(b)) return {};
  Poly q(a.size() - b.size() + 1, 0);
  while (!a.empty() && degree(a) >= degree(b)) {
    mpq_class c = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
    trim(a);
  }
  trim(q);
  return q;
}

inline Poly monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  mpq_class lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline Poly squarefree(const Poly& p) { return monic(quotient(p, gcd(p, derivative(p)))); }

inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    Poly r = rem(chain[chain.size() - 2], chain.back());
    for (auto& c : r) c = -c;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

inline int sign_changes(const std::vector<Poly>& chain, const mpq_class& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sgn(eval(q, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Number of distinct roots in (a, b] of a squarefree p.
inline int roots_in(const std::vector<Poly>& chain, const mpq_class& a, const mpq_class& b) {
  return sign_changes(chain, a) - sign_changes(chain, b);
}

inline std::string to_string(const Poly& p, const std::string& var = "x") {
  if (p.empty()) return "0";
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (sgn(p[i]) == 0) continue;
    mpq_class c = p[i];
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    bool unit = c == 1;
    if (i == 0 || !unit) s += c.get_str();
    if (i > 0) {
      if (!unit) s += "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace qpoly

/// Simplest rational (least denominator) in the closed interval [lo, hi].
inline mpq_class simplest_rational(mpq_class lo, mpq_class hi) {
  if (lo > hi) std::swap(lo, hi);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return 0;
  if (sgn(hi) < 0) return -simplest_rational(-hi, -lo);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (mpq_class(fl) == lo) return lo;
  if (mpq_class(fl + 1) <= hi) return mpq_class(fl + 1);
  // lo, hi share the integer part: recurse on reciprocals of fractional parts.
  mpq_class r = simplest_rational(1 / (hi - fl), 1 / (lo - fl));
  mpq_class out = mpq_class(fl) + 1 / r;
  out.canonicalize();
  return out;
}

struct Recurrence {
  std::vector<mpq_class> coeffs;  // a_1..a_d: b_n = sum a_j b_{n-j}
  std::size_t n0 = 0;             // first n at which it holds
  std::size_t order() const { return coeffs.size(); }
  /// x^d - a_1 x^{d-1} - ... - a_d, ascending coefficients.
  qpoly::Poly characteristic_polynomial() const {
    std::size_t d = coeffs.size();
    qpoly::Poly p(d + 1, 0);
    p[d] = 1;
    for (std::size_t j = 1; j <= d; ++j) p[d - j] = -coeffs[j - 1];
    return p;
  }
};

/// Minimal-order recurrence (then least burn-in n0 <= max_order) satisfied by
/// the tail of the sequence, with at least two equations beyond the unknowns.
inline std::optional<Recurrence> fit_recurrence(const TruncatedSeries& b, std::size_t max_order = 8) {
  std::size_t len = b.size();
  if (len < 4) return std::nullopt;
  std::size_t D = std::min(max_order, (len - 2) / 2);
  RationalField Q;
  for (std::size_t d = 1; d <= D; ++d)
    for (std::size_t n0 = d; n0 <= std::max(d, D); ++n0) {
      if (len < n0 + d + 2) break;
      // Rows n = n0..len-1 of [b_{n-1} .. b_{n-d} | b_n].
      Echelon<RationalField> ech(Q, d + 1);
      for (std::size_t n = n0; n < len; ++n) {
        SparseVec<mpq_class> row;
        for (std::size_t j = 1; j <= d; ++j)
          if (sgn(b[n - j]) != 0) row.push(static_cast<Index>(j - 1), mpq_class(b[n - j]));
        if (sgn(b[n]) != 0) row.push(static_cast<Index>(d), mpq_class(b[n]));
        ech.insert(row);
      }
      if (ech.is_pivot(static_cast<Index>(d))) continue;  // inconsistent
      auto rows = ech.reduced_rows();
      Recurrence r;
      r.coeffs.assign(d, 0);
      r.n0 = n0;
      for (const auto& row : rows) {
        // x_lead + sum_k c_k x_k = rhs (free unknowns set to zero)
        mpq_class rhs = 0;
        for (std::size_t k = 0; k < row.size(); ++k)
          if (row.index[k] == d) rhs = row.value[k];
        r.coeffs[row.index.front()] = rhs;
      }
      return r;
    }
  return std::nullopt;
}

/// Least i0 with b_i < b_{i+1} for every computed i >= i0.
inline std::optional<std::size_t> strictly_increasing_from(const TruncatedSeries& b) {
  if (b.size() < 2 || !(b[b.size() - 2] < b.back())) return std::nullopt;
  std::size_t i0 = b.size() - 2;
  while (i0 > 0 && b[i0 - 1] < b[i0]) --i0;
  return i0;
}

/// Whether the tail from some n0 <= max_order is a polynomial of degree <=
/// max_order in n (some finite difference vanishes identically).
inline bool fits_polynomial(const TruncatedSeries& b, std::size_t max_order = 8) {
  for (std::size_t n0 = 0; n0 <= max_order && n0 < b.size(); ++n0) {
    std::vector<mpz_class> diff(b.begin() + static_cast<std::ptrdiff_t>(n0), b.end());
    for (std::size_t q = 0; q <= max_order && diff.size() >= 3; ++q) {
      std::vector<mpz_class> next;
      for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
      diff = std::move(next);
      if (diff.size() >= 2 && std::all_of(diff.begin(), diff.end(), [](const mpz_class& x) { return sgn(x) == 0; }))
        return true;
    }
  }
  return false;
}

enum class GrowthClass { finite, polynomial_like, exponential_like, inconclusive };

inline std::string to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::finite: return "finite";
    case GrowthClass::polynomial_like: return "polynomial-like";
    case GrowthClass::exponential_like: return "exponential-like";
    case GrowthClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct GrowthOptions {
  std::size_t max_order = 8;
  mpq_class exponential_margin = mpq_class(1, 1000000);  // exponential-like above 1 + margin
  mpq_class isolation_width = mpq_class(1, 1000000000);
};

struct GrowthReport {
  std::optional<Recurrence> recurrence;
  mpq_class curvature_low = 0, curvature_high = 0;
  std::optional<mpq_class> curvature_exact;
  qpoly::Poly curvature_polynomial;  // squarefree, rational roots split off when the root is irrational
  std::string curvature_source;      // "recurrence", "window", "finite" or "none"
  GrowthClass classification = GrowthClass::inconclusive;
  std::optional<std::size_t> strictly_increasing;
  GrowthOptions options;

  double low() const { return curvature_low.get_d(); }
  double high() const { return curvature_high.get_d(); }
};

/// Interval (lo, hi] of width <= width containing the largest real root of p,
/// or nullopt when p has no real root.
inline std::optional<std::pair<mpq_class, mpq_class>> isolate_largest_root(const qpoly::Poly& p, const mpq_class& width) {
  auto sf = qpoly::squarefree(p);
  if (qpoly::degree(sf) < 1) return std::nullopt;
  mpq_class bound = 0;
  for (std::size_t i = 0; i + 1 < sf.size(); ++i) bound = std::max<mpq_class>(bound, abs(sf[i] / sf.back()));
  bound += 1;
  auto chain = qpoly::sturm_chain(sf);
  mpq_class lo = -bound, hi = bound;
  if (qpoly::roots_in(chain, lo, hi) == 0) return std::nullopt;
  while (hi - lo > width) {
    mpq_class mid = (lo + hi) / 2;
    if (qpoly::roots_in(chain, mid, hi) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return std::make_pair(lo, hi);
}

/// Rational bounds lo <= x^(1/n) <= hi with hi - lo <= width.
inline std::pair<mpq_class, mpq_class> nth_root_bounds(const mpz_class& x, std::size_t n, const mpq_class& width) {
  mpq_class lo = 0, hi = mpq_class(x) + 1;
  auto pow = [n](const mpq_class& v) {
    mpq_class r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= v;
    return r;
  };
  mpq_class target(x);
  while (hi - lo > width) {
    mpq_class mid = (lo + hi) / 2;
    if (pow(mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

/// Curvature bounds and classification. `terminated` marks a resolution that
/// stopped, i.e. all later Betti numbers are zero.
inline GrowthReport analyze_growth(TruncatedSeries b, bool terminated = false, GrowthOptions opts = {}) {
  GrowthReport rep;
  rep.options = opts;
  if (terminated) b.push_back(0);
  rep.strictly_increasing = strictly_increasing_from(b);
  bool hit_zero = std::any_of(b.begin(), b.end(), [](const mpz_class& x) { return sgn(x) == 0; });
  if (hit_zero) {
    rep.classification = GrowthClass::finite;
    rep.curvature_source = "finite";
    rep.curvature_exact = mpq_class(0);
    return rep;
  }
  mpq_class one_plus = 1 + opts.exponential_margin;
  bool nondecreasing = std::is_sorted(b.begin(), b.end());

  rep.recurrence = fit_recurrence(b, opts.max_order);
  std::optional<std::pair<mpq_class, mpq_class>> iv;
  if (rep.recurrence) iv = isolate_largest_root(rep.recurrence->characteristic_polynomial(), opts.isolation_width);
  if (iv) {
    rep.curvature_source = "recurrence";
    rep.curvature_low = iv->first;
    rep.curvature_high = iv->second;
    auto sf = qpoly::squarefree(rep.recurrence->characteristic_polynomial());
    mpq_class q = simplest_rational(iv->first, iv->second);
    if (sgn(qpoly::eval(sf, q)) == 0) {
      rep.curvature_exact = q;
      rep.curvature_low = rep.curvature_high = q;
      rep.curvature_polynomial = {-q, 1};
    } else {
      // Split off rational roots so the reported polynomial is as small as we can make it cheaply.
      qpoly::Poly p = sf;
      for (bool changed = true; changed && qpoly::degree(p) > 1;) {
        changed = false;
        for (long num = -64; num <= 64 && !changed; ++num)
          for (long den = 1; den <= 16 && !changed; ++den) {
            mpq_class c(num, den);
            c.canonicalize();
            if (sgn(qpoly::eval(p, c)) == 0) {
              p = qpoly::monic(qpoly::quotient(p, {-c, 1}));
              changed = true;
            }
          }
      }
      rep.curvature_polynomial = p;
    }
    if (rep.curvature_low > one_plus)
      rep.classification = GrowthClass::exponential_like;
    else if (rep.curvature_low <= 1 && 1 <= rep.curvature_high && nondecreasing && fits_polynomial(b, opts.max_order))
      rep.classification = GrowthClass::polynomial_like;
    else
      rep.classification = GrowthClass::inconclusive;
    return rep;
  }

  // Window bounds of b_n^(1/n) over the last half of the data.
  rep.curvature_source = "window";
  std::size_t start = std::max<std::size_t>(1, b.size() / 2);
  bool first = true;
  for (std::size_t n = start; n < b.size(); ++n) {
    auto [lo, hi] = nth_root_bounds(b[n], n, opts.isolation_width);
    if (first || lo < rep.curvature_low) rep.curvature_low = lo;
    if (first || hi > rep.curvature_high) rep.curvature_high = hi;
    first = false;
  }
  if (first) {
    rep.curvature_source = "none";
    return rep;
  }
  if (nondecreasing && fits_polynomial(b, opts.max_order))
    rep.classification = GrowthClass::polynomial_like;
  else if (rep.curvature_low > one_plus)
    rep.classification = GrowthClass::exponential_like;
  return rep;
}

/// Rational interval for curv(omega)/curv(k); exactly zero when omega is free.
struct DeviationInterval {
  mpq_class low = 0, high = 0;
  bool exact_zero = false;
};

inline DeviationInterval deviation_quotient(const GrowthReport& omega, bool omega_free, const GrowthReport& k) {
  DeviationInterval d;
  if (omega_free) {
    d.exact_zero = true;
    return d;
  }
  if (sgn(k.curvature_low) <= 0) throw InvalidArgument("residue-field curvature bound is not positive");
  d.low = omega.curvature_low / k.curvature_high;
  d.high = omega.curvature_high / k.curvature_low;
  return d;
}

}  // namespace cangrow
