#pragma once

// Executable forms of the Betti-bound lemma and the Gorenstein criteria, all in
// the dimension-zero specialization (empty regular sequence), plus the random
// monomial-quotient sampler used by the scans.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "cangrow/algebra.hpp"
#include "cangrow/growth.hpp"
#include "cangrow/module.hpp"
#include "cangrow/resolution.hpp"

namespace cangrow {

template <Field F>
struct GorensteinDeviation {
  std::vector<std::size_t> omega_betti, k_betti;
  GrowthReport omega, k;
  DeviationInterval g;
};

/// curv(omega)/curv(k) from resolutions to `steps`; exactly 0 when omega is free.
template <Field F>
GorensteinDeviation<F> gorenstein_deviation(const AlgebraPtr<F>& R, std::size_t steps,
                                            std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  if (steps < 4) throw InvalidArgument("the deviation needs at least 4 resolution steps");
  if (R->dim() == 1) throw InvalidArgument("the ring is a field: g(R) is undefined");
  auto W = PresentedModule<F>::canonical(R);
  Resolution<F> rw(W), rk(PresentedModule<F>::residue_field(R));
  rw.extend(steps, budget_limit);
  rk.extend(steps, budget_limit);
  GorensteinDeviation<F> out;
  out.omega_betti = rw.betti();
  out.k_betti = rk.betti();
  out.omega = analyze_growth(to_series(rw.betti()), rw.terminated());
  out.k = analyze_growth(to_series(rk.betti()), rk.terminated());
  out.g = deviation_quotient(out.omega, W.is_free(), out.k);
  return out;
}

enum class HypothesisKind { tor, ext };

inline std::string to_string(HypothesisKind k) { return k == HypothesisKind::tor ? "tor" : "ext"; }

struct BoundCheck {
  HypothesisKind kind = HypothesisKind::tor;
  std::size_t n = 1;
  std::pair<std::size_t, std::size_t> window{1, 1};
  bool hypothesis_holds = false;
  std::size_t hypothesis_dim = 0;  // dim Tor_n(M,N) or dim Ext^n(M,N^dual)
  mpq_class ratio = 0;             // l(mM)/mu(M)
  std::size_t b_n = 0, b_prev = 0;
  bool satisfied = false;
  bool equality = false;
  bool m_kills_tensor = false;  // m(M (x) N') = 0, N' the (n-1)-th syzygy of N
  bool m_kills_mM = false;      // m^2 M = 0
  bool degenerate = false;      // b_{n-1}(N) = 0: both sides vanish, the equality clause says nothing
};

/// b_n(N) <= l(mM)/mu(M) * b_{n-1}(N) under Tor_n(M,N) = 0 (tor) or
/// Ext^n(M,N^dual) = 0 (ext). A failing hypothesis is reported, the bound is
/// then evaluated but carries no guarantee.
template <Field F>
BoundCheck betti_bound_check(const PresentedModule<F>& M, const PresentedModule<F>& N, std::size_t n, HypothesisKind kind,
                             std::uint64_t budget = WorkBudget::kDefaultLimit) {
  if (n < 1) throw InvalidArgument("the Betti bound needs n >= 1");
  BoundCheck c;
  c.kind = kind;
  c.n = n;
  c.window = {n, n};
  Resolution<F> resM(M);
  if (kind == HypothesisKind::tor) {
    c.hypothesis_dim = tor_dims(resM, N, n, budget)[n];
  } else {
    auto Nd = N.matlis_dual();
    c.hypothesis_dim = ext_dims(resM, Nd, n, budget)[n];
  }
  c.hypothesis_holds = c.hypothesis_dim == 0;

  std::size_t mu = M.num_generators(), lm = M.m_length();
  c.ratio = mpq_class(static_cast<unsigned long>(lm), static_cast<unsigned long>(mu));
  c.ratio.canonicalize();
  Resolution<F> resN(N);
  resN.extend(n, budget);
  c.b_n = resN.betti_at(n);
  c.b_prev = resN.betti_at(n - 1);
  c.satisfied = mu * c.b_n <= lm * c.b_prev;
  c.equality = mu * c.b_n == lm * c.b_prev;

  // N' = coker(d_{n-1} -> ...) is the (n-1)-th syzygy: coker d_n for n >= 2.
  if (c.b_prev == 0) {
    c.degenerate = true;
    c.m_kills_tensor = true;
  } else {
    PresentedModule<F> Nsyz = N;
    if (n >= 2)
      Nsyz = n <= resN.num_differentials() ? PresentedModule<F>::cokernel(N.ring(), c.b_prev, resN.differential(n))
                                           : PresentedModule<F>::free(N.ring(), c.b_prev);
    std::size_t tensor_len = tor_dims(M, Nsyz, 0, budget)[0];
    c.m_kills_tensor = tensor_len == mu * c.b_prev;
  }
  c.m_kills_mM = M.m_squared_kills();
  return c;
}

enum class CriterionVariant { manygens, genGor, classD };

inline std::string to_string(CriterionVariant v) {
  switch (v) {
    case CriterionVariant::manygens: return "manygens";
    case CriterionVariant::genGor: return "genGor";
    case CriterionVariant::classD: return "classD";
  }
  return "";
}

struct CriterionVerdict {
  CriterionVariant variant = CriterionVariant::manygens;
  bool applies = false;
  bool strict = false;            // l(mM) < mu(M)
  bool inequality_holds = false;  // the inequality as the variant allows it
  std::size_t ext_window = 0;     // Ext^i(M,R) checked for 1..ext_window
  std::size_t ext_vanish_to = 0;
  bool ring_hypothesis = true;    // generically Gorenstein / membership in the class
  std::string ring_hypothesis_note;
  std::optional<std::string> conclusion;  // "criterion-satisfied" or "Gorenstein-certified-inconsistency"
};

template <Field F>
CriterionVerdict gorenstein_criterion(const PresentedModule<F>& M, CriterionVariant variant, std::size_t class_window = 8,
                                      std::uint64_t budget = WorkBudget::kDefaultLimit) {
  const auto& R = M.ring();
  CriterionVerdict v;
  v.variant = variant;
  std::size_t mu = M.num_generators(), lm = M.m_length();
  v.strict = lm < mu;
  auto omega = PresentedModule<F>::canonical(R);
  std::size_t type = R->socle().size();

  switch (variant) {
    case CriterionVariant::manygens: {
      bool aux = false;
      if (lm == mu) {
        std::size_t tensor_len = tor_dims(M, omega, 0, budget)[0];
        bool m_kills_tensor = tensor_len == mu * omega.num_generators();
        aux = !m_kills_tensor || !M.m_squared_kills();
      }
      v.inequality_holds = v.strict || aux;
      v.ext_window = type;
      break;
    }
    case CriterionVariant::genGor:
      // An Artinian ring has the single minimal prime m, so generically
      // Gorenstein means Gorenstein.
      v.ring_hypothesis = R->is_gorenstein();
      v.ring_hypothesis_note = "generically Gorenstein (Artinian: Gorenstein)";
      v.inequality_holds = v.strict;
      if (lm == mu) {
        std::size_t tensor_len = tor_dims(M, omega, 0, budget)[0];
        v.inequality_holds = tensor_len != mu * omega.num_generators() || !M.m_squared_kills();
      }
      v.ext_window = 1;
      break;
    case CriterionVariant::classD: {
      bool codim3 = R->embedding_dim() <= 3;
      bool cube_zero = R->max_ideal_power(3).empty();
      v.ring_hypothesis = codim3 || cube_zero;
      v.ring_hypothesis_note = codim3 ? "codimension <= 3" : cube_zero ? "m^3 = 0" : "class membership not certified";
      v.inequality_holds = lm <= mu;
      v.ext_window = class_window;
      break;
    }
  }

  if (v.ext_window > 0) {
    auto Rmod = PresentedModule<F>::free(R, 1);
    auto ext = ext_dims(M, Rmod, v.ext_window, budget);
    while (v.ext_vanish_to < v.ext_window && ext[v.ext_vanish_to + 1] == 0) ++v.ext_vanish_to;
  }
  v.applies = v.ring_hypothesis && v.inequality_holds && v.ext_vanish_to == v.ext_window;
  if (v.applies) v.conclusion = R->is_gorenstein() ? "criterion-satisfied" : "Gorenstein-certified-inconsistency";
  return v;
}

enum class LescotCase { exceptional_stationary, exponential_strictly_increasing, outside_scope };

inline std::string to_string(LescotCase c) {
  switch (c) {
    case LescotCase::exceptional_stationary: return "exceptional-stationary";
    case LescotCase::exponential_strictly_increasing: return "exponential-strictly-increasing";
    case LescotCase::outside_scope: return "outside-scope";
  }
  return "";
}

struct LescotPrediction {
  LescotCase kind = LescotCase::outside_scope;
  std::size_t e = 0, s = 0;
  bool socle_eq_m2 = false;
  bool e_b0_eq_length = false;
  bool used_syzygy = false;
  std::string note;
};

/// The radical-cube-zero trichotomy. Rings whose residue field has
/// polynomially growing Betti numbers are reported as outside the scope.
template <Field F>
LescotPrediction lescot_classify(const PresentedModule<F>& M, std::size_t probe_steps = 8,
                                 std::uint64_t budget = WorkBudget::kDefaultLimit) {
  const auto& R = M.ring();
  if (!R->max_ideal_power(3).empty()) throw InvalidArgument("the trichotomy needs m^3 = 0");
  if (M.is_free()) throw InvalidArgument("the trichotomy concerns non-free modules");
  LescotPrediction p;
  auto prof = R->profile();
  p.e = prof.embedding_dim;
  p.s = prof.m2_dim;
  p.socle_eq_m2 = prof.socle_dim == prof.m2_dim;  // m^2 is inside the socle when m^3 = 0

  PresentedModule<F> X = M;
  if (!M.m_squared_kills()) {
    X = M.syzygy_module();
    p.used_syzygy = true;
  }
  p.e_b0_eq_length = p.e * X.num_generators() == X.length();

  Resolution<F> rk(PresentedModule<F>::residue_field(R));
  rk.extend(probe_steps, budget);
  auto kgrowth = analyze_growth(to_series(rk.betti()), rk.terminated());
  if (kgrowth.classification == GrowthClass::polynomial_like) {
    p.kind = LescotCase::outside_scope;
    p.note = "residue field Betti numbers grow polynomially";
    return p;
  }
  bool exceptional = p.socle_eq_m2 && p.s + 1 == p.e && p.s >= 2 && p.e_b0_eq_length;
  p.kind = exceptional ? LescotCase::exceptional_stationary : LescotCase::exponential_strictly_increasing;
  return p;
}

struct TachikawaVerdict {
  bool hypothesis = false;  // 2 dim socle(R) > l(R)
  std::size_t socle_dim = 0, length = 0;
  std::size_t window = 0;   // mu(omega)
  std::size_t ext_vanish_to = 0;
  bool ext_vanish = false;
  bool concludes_gorenstein = false;
};

template <Field F>
TachikawaVerdict tachikawa_check(const AlgebraPtr<F>& R, std::uint64_t budget = WorkBudget::kDefaultLimit) {
  TachikawaVerdict v;
  v.socle_dim = R->socle().size();
  v.length = R->dim();
  v.hypothesis = 2 * v.socle_dim > v.length;
  v.window = v.socle_dim;
  if (!v.hypothesis) return v;
  auto omega = PresentedModule<F>::canonical(R);
  auto ext = ext_dims(omega, PresentedModule<F>::free(R, 1), v.window, budget);
  while (v.ext_vanish_to < v.window && ext[v.ext_vanish_to + 1] == 0) ++v.ext_vanish_to;
  v.ext_vanish = v.ext_vanish_to == v.window;
  v.concludes_gorenstein = v.ext_vanish;
  return v;
}

/// Variables i and j != l with x_i x_j and x_i x_l in the monomial ideal.
struct GrowthWitness {
  std::size_t i, j, l;
};

inline std::optional<GrowthWitness> monomial_growth_hypothesis(const std::vector<Monomial>& generators, std::size_t nvars) {
  auto in_ideal = [&](const Monomial& m) {
    for (const auto& g : generators)
      if (g.divides(m)) return true;
    return false;
  };
  for (std::size_t i = 0; i < nvars; ++i)
    for (std::size_t j = 0; j < nvars; ++j)
      for (std::size_t l = j + 1; l < nvars; ++l) {
        Monomial a = Monomial::variable(i) * Monomial::variable(j);
        Monomial b = Monomial::variable(i) * Monomial::variable(l);
        if (in_ideal(a) && in_ideal(b)) return GrowthWitness{i, j, l};
      }
  return std::nullopt;
}

/// b_i^Q(M) <= b_i^R(N) on the common computed window.
inline bool tor_injectivity_consequence(const std::vector<std::size_t>& q_betti, const std::vector<std::size_t>& r_betti) {
  std::size_t len = std::min(q_betti.size(), r_betti.size());
  for (std::size_t i = 0; i < len; ++i)
    if (q_betti[i] > r_betti[i]) return false;
  return true;
}

/// A random Artinian monomial quotient: every monomial of degree 2..D+1 is
/// included with probability `density`, and all monomials of degree D+1 are
/// forced in so that the socle degree is at most D.
struct MonomialSample {
  std::size_t nvars = 0;
  unsigned socle_degree_bound = 0;
  std::vector<Monomial> generators;
};

inline std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
    if (v + 1 == nvars) {
      cur.exp[v] = static_cast<std::uint16_t>(left);
      out.push_back(cur);
      cur.exp[v] = 0;
      return;
    }
    for (unsigned e = left + 1; e-- > 0;) {
      cur.exp[v] = static_cast<std::uint16_t>(e);
      rec(v + 1, left - e);
    }
    cur.exp[v] = 0;
  };
  rec(0, degree);
  return out;
}

/// Drops generators divisible by another one.
inline std::vector<Monomial> minimal_monomials(std::vector<Monomial> gens) {
  std::sort(gens.begin(), gens.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a > b;
  });
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<Monomial> out;
  for (const auto& g : gens) {
    bool redundant = false;
    for (const auto& h : out)
      if (h.divides(g)) redundant = true;
    if (!redundant) out.push_back(g);
  }
  return out;
}

inline MonomialSample sample_monomial_quotient(std::mt19937_64& rng, std::size_t max_vars = 3, unsigned max_socle_degree = 4,
                                               double density = 0.35) {
  MonomialSample s;
  s.nvars = std::uniform_int_distribution<std::size_t>(1, max_vars)(rng);
  s.socle_degree_bound = std::uniform_int_distribution<unsigned>(1, max_socle_degree)(rng);
  std::bernoulli_distribution coin(density);
  std::vector<Monomial> gens;
  for (unsigned d = 2; d <= s.socle_degree_bound; ++d)
    for (const auto& m : monomials_of_degree(s.nvars, d))
      if (coin(rng)) gens.push_back(m);
  for (const auto& m : monomials_of_degree(s.nvars, s.socle_degree_bound + 1)) gens.push_back(m);
  s.generators = minimal_monomials(std::move(gens));
  return s;
}

template <Field F>
AlgebraPtr<F> monomial_quotient(const F& field, const std::vector<std::string>& vars, const std::vector<Monomial>& gens) {
  PolyRing<F> P(field, vars);
  std::vector<Polynomial<F>> polys;
  for (const auto& g : gens) polys.push_back(P.monomial(g, field.one()));
  return ArtinAlgebra<F>::from_quotient(field, vars, polys);
}

inline std::vector<std::string> default_variable_names(std::size_t n) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v", "s", "t", "p", "q", "r", "o"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(names[i]);
  return out;
}

struct ScanSample {
  std::uint64_t seed = 0;
  std::string ring_spec;
  std::size_t dim = 0;
  bool gorenstein = false;
  std::size_t b0 = 0, b1 = 0;
  bool finding = false;  // non-Gorenstein with b1(omega) <= b0(omega)
};

/// b1(omega) vs b0(omega) on one sampled monomial quotient.
template <Field F>
ScanSample scan_one(const F& field, std::uint64_t seed, std::size_t max_vars = 3, unsigned max_socle_degree = 4) {
  std::mt19937_64 rng(seed);
  auto s = sample_monomial_quotient(rng, max_vars, max_socle_degree);
  auto vars = default_variable_names(s.nvars);
  auto R = monomial_quotient(field, vars, s.generators);
  ScanSample out;
  out.seed = seed;
  out.ring_spec = R->spec_text();
  out.dim = R->dim();
  out.gorenstein = R->is_gorenstein();
  auto omega = PresentedModule<F>::canonical(R);
  out.b0 = omega.num_generators();
  out.b1 = omega.num_relations();
  out.finding = !out.gorenstein && out.b1 <= out.b0;
  return out;
}

/// Outcome of one randomized soundness probe: a sampled ring, two sampled
/// modules, every Betti-bound check for n = 1..max_n in both hypothesis
/// forms, and every Gorenstein criterion.
struct ProbeResult {
  std::uint64_t seed = 0;
  std::string ring_spec;
  std::string module_M, module_N;
  bool gorenstein = false;
  std::size_t bound_checks = 0;
  std::size_t hypothesis_verified = 0;
  std::size_t equality_cases = 0;
  std::size_t degenerate_cases = 0;
  std::size_t criterion_satisfied = 0;
  std::vector<std::string> violations;
};

namespace detail {

template <Field F>
AlgebraPtr<F> probe_ring(const F& field, std::mt19937_64& rng) {
  int pick = std::uniform_int_distribution<int>(0, 9)(rng);
  if (pick < 6) {
    auto s = sample_monomial_quotient(rng, 3, 3);
    return monomial_quotient(field, default_variable_names(s.nvars), s.generators);
  }
  std::size_t nv = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  auto vars = default_variable_names(nv);
  PolyRing<F> P(field, vars);
  std::vector<Polynomial<F>> gens;
  if (pick < 8) {
    // Complete intersection of pure powers: Gorenstein.
    for (std::size_t i = 0; i < nv; ++i)
      gens.push_back(P.pow(P.variable(i), std::uniform_int_distribution<unsigned>(2, 3)(rng)));
    return ArtinAlgebra<F>::from_quotient(field, vars, gens);
  }
  if (nv == 1) {
    gens.push_back(P.pow(P.variable(0), std::uniform_int_distribution<unsigned>(2, 5)(rng)));
    return ArtinAlgebra<F>::from_quotient(field, vars, gens);
  }
  // x_1^2 - x_i^2 and x_i x_j: Gorenstein with Hilbert series 1 + e t + t^2,
  // or its non-Gorenstein variant with an extra square killed.
  for (std::size_t i = 0; i + 1 < nv; ++i)
    gens.push_back(P.sub(P.mul(P.variable(i), P.variable(i)), P.mul(P.variable(i + 1), P.variable(i + 1))));
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = i + 1; j < nv; ++j) gens.push_back(P.mul(P.variable(i), P.variable(j)));
  if (pick == 9) gens.push_back(P.pow(P.variable(0), 2));
  return ArtinAlgebra<F>::from_quotient(field, vars, gens);
}

template <Field F>
SparseVec<typename F::value_type> probe_element(const ArtinAlgebra<F>& A, std::mt19937_64& rng) {
  const F& k = A.field();
  std::size_t n = A.dim();
  std::size_t terms = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  Accumulator<F> acc(k, n);
  for (std::size_t t = 0; t < terms; ++t) {
    std::size_t i = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    auto c = k.from_int(std::uniform_int_distribution<int>(1, 5)(rng));
    acc.add_scaled(A.basis_vector(i), c);
  }
  auto v = acc.take();
  if (v.empty()) v = A.basis_vector(n - 1);
  return v;
}

template <Field F>
PresentedModule<F> probe_module(const AlgebraPtr<F>& R, std::mt19937_64& rng) {
  using Mod = PresentedModule<F>;
  const auto& A = *R;
  int pick = std::uniform_int_distribution<int>(0, 5)(rng);
  if (A.dim() == 1) pick = 1;
  std::size_t count = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  std::vector<SparseVec<typename F::value_type>> elems;
  switch (pick) {
    case 0: return Mod::canonical(R);
    case 1: return Mod::residue_field(R);
    case 2: {
      for (std::size_t i = 0; i < count; ++i) elems.push_back(probe_element(A, rng));
      auto M = Mod::cyclic(R, elems);
      M.set_description("cyclic");
      return M;
    }
    case 3: {
      for (std::size_t i = 0; i < count; ++i) elems.push_back(probe_element(A, rng));
      auto M = Mod::ideal(R, elems);
      M.set_description("ideal");
      return M;
    }
    case 4: {
      std::size_t v = std::uniform_int_distribution<std::size_t>(0, A.max_ideal_generators().size() - 1)(rng);
      auto M = Mod::cyclic(R, {A.max_ideal_generators()[v]});
      M.set_description("cyclic-variable");
      return M;
    }
    default: {
      auto M = Mod::canonical(R).matlis_dual();
      if (!M.is_free()) M = M.syzygy_module();
      M.set_description("syzygy");
      return M;
    }
  }
}

}  // namespace detail

template <Field F>
ProbeResult soundness_probe(const F& field, std::uint64_t seed, std::size_t max_n = 3,
                            std::uint64_t budget = WorkBudget::kDefaultLimit) {
  std::mt19937_64 rng(seed);
  auto R = detail::probe_ring(field, rng);
  auto M = detail::probe_module(R, rng);
  auto N = detail::probe_module(R, rng);
  ProbeResult p;
  p.seed = seed;
  p.ring_spec = R->spec_text();
  p.module_M = M.description();
  p.module_N = N.description();
  p.gorenstein = R->is_gorenstein();
  for (std::size_t n = 1; n <= max_n; ++n)
    for (auto kind : {HypothesisKind::tor, HypothesisKind::ext}) {
      auto c = betti_bound_check(M, N, n, kind, budget);
      ++p.bound_checks;
      if (!c.hypothesis_holds) continue;
      ++p.hypothesis_verified;
      std::string where = to_string(kind) + " n=" + std::to_string(n);
      if (!c.satisfied) p.violations.push_back("betti bound fails (" + where + ")");
      if (c.degenerate) {
        ++p.degenerate_cases;
        continue;
      }
      if (c.equality) ++p.equality_cases;
      if (c.equality != (c.m_kills_tensor && c.m_kills_mM))
        p.violations.push_back("equality does not match its two conditions (" + where + ")");
    }
  for (auto v : {CriterionVariant::manygens, CriterionVariant::genGor, CriterionVariant::classD}) {
    auto verdict = gorenstein_criterion(M, v, 6, budget);
    if (!verdict.applies) continue;
    ++p.criterion_satisfied;
    if (!p.gorenstein) p.violations.push_back(to_string(v) + " criterion satisfied on a non-Gorenstein ring");
  }
  auto t = tachikawa_check(R, budget);
  if (t.hypothesis && t.ext_vanish) {
    ++p.criterion_satisfied;
    if (!p.gorenstein) p.violations.push_back("tachikawa criterion satisfied on a non-Gorenstein ring");
  }
  return p;
}

}  // namespace cangrow
