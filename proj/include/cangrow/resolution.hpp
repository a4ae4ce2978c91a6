#pragma once

// Minimal free resolutions, Tor/Ext dimensions, the linearity predicate and
// the G-dimension-zero certificate.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cangrow/algebra.hpp"
#include "cangrow/errors.hpp"
#include "cangrow/linalg.hpp"
#include "cangrow/module.hpp"

namespace cangrow {

/// Incrementally extended minimal free resolution
///   ... -> R^{b_2} --d_2--> R^{b_1} --d_1--> R^{b_0} -> M -> 0.
/// d_i is stored as its columns, vectors of R^{b_{i-1}}.
template <Field F>
class Resolution {
 public:
  using V = typename F::value_type;
  using Vec = SparseVec<V>;

  explicit Resolution(PresentedModule<F> M) : M_(std::move(M)) {
    betti_.push_back(M_.num_generators());
    if (M_.is_free()) {
      terminated_ = true;
    } else {
      diffs_.push_back(M_.presentation());
      betti_.push_back(diffs_.back().size());
    }
  }

  /// Adopts previously computed differentials (e.g. from the cache).
  static Resolution from_differentials(PresentedModule<F> M, std::vector<std::vector<Vec>> diffs, bool terminated) {
    Resolution r(std::move(M));
    if (r.terminated_) return r;
    if (diffs.empty() || diffs.front() != r.diffs_.front()) throw CacheCorrupt("first differential does not match the presentation");
    r.diffs_ = std::move(diffs);
    r.betti_.resize(1);
    for (const auto& d : r.diffs_) r.betti_.push_back(d.size());
    r.terminated_ = terminated;
    return r;
  }

  const PresentedModule<F>& module() const { return M_; }
  const AlgebraPtr<F>& ring() const { return M_.ring(); }

  /// Computes b_0..b_steps, stopping early once a syzygy vanishes.
  void extend(std::size_t steps, std::uint64_t budget_per_step = WorkBudget::kDefaultLimit) {
    const auto& A = *ring();
    while (!terminated_ && length() < steps) {
      WorkBudget budget(budget_per_step);
      const auto& d = diffs_.back();
      std::size_t target = betti_[betti_.size() - 2] * A.dim();
      Accumulator<F> acc(A.field(), std::max<std::size_t>(target, 1));
      auto image = [&A, &acc](std::size_t t, const Vec& v) { return detail::basis_times_free(A, t, v, acc); };
      auto syz = detail::syzygy<F>(A, target, image, d, &budget);
      if (syz.generators.empty()) {
        terminated_ = true;
        break;
      }
      betti_.push_back(syz.generators.size());
      diffs_.push_back(std::move(syz.generators));
    }
  }

  /// Index of the last computed free module.
  std::size_t length() const { return betti_.size() - 1; }
  /// b_0..b_length; the resolution stops there when `terminated()`.
  const std::vector<std::size_t>& betti() const { return betti_; }
  bool terminated() const { return terminated_; }
  std::size_t betti_at(std::size_t i) const {
    if (i < betti_.size()) return betti_[i];
    if (terminated_) return 0;
    throw InvalidArgument("resolution not computed to step " + std::to_string(i));
  }
  /// d_i for i >= 1.
  const std::vector<Vec>& differential(std::size_t i) const { return diffs_.at(i - 1); }
  std::size_t num_differentials() const { return diffs_.size(); }

 private:
  PresentedModule<F> M_;
  std::vector<std::vector<Vec>> diffs_;
  std::vector<std::size_t> betti_;
  bool terminated_ = false;
};

namespace detail {

/// Applies d (columns in R^{rows}) to v in R^{cols}.
template <Field F>
SparseVec<typename F::value_type> apply_over_ring(const ArtinAlgebra<F>& A, const std::vector<SparseVec<typename F::value_type>>& d,
                                                  const SparseVec<typename F::value_type>& v, Accumulator<F>& acc) {
  std::size_t n = A.dim();
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::size_t h = v.index[k] / n, t = v.index[k] % n;
    const auto& col = d[h];
    for (std::size_t e = 0; e < col.size(); ++e) {
      Index g = static_cast<Index>(col.index[e] / n);
      acc.add_scaled(A.product(t, col.index[e] % n), A.field().mul(v.value[k], col.value[e]), g * static_cast<Index>(n));
    }
  }
  return acc.take();
}

/// k-rank of d : R^{cols} -> R^{rows}.
template <Field F>
std::size_t rank_over_k(const ArtinAlgebra<F>& A, const std::vector<SparseVec<typename F::value_type>>& d, std::size_t rows) {
  std::size_t n = A.dim();
  Echelon<F> ech(A.field(), std::max<std::size_t>(rows * n, 1));
  Accumulator<F> acc(A.field(), std::max<std::size_t>(rows * n, 1));
  for (const auto& col : d)
    for (std::size_t t = 0; t < n; ++t) ech.insert(basis_times_free(A, t, col, acc));
  return ech.rank();
}

/// Rank of d (x) N : N^{cols} -> N^{rows}.
template <Field F>
std::size_t tensor_rank(const std::vector<SparseVec<typename F::value_type>>& d, std::size_t rows, const PresentedModule<F>& N,
                        WorkBudget* budget) {
  const auto& A = *N.ring();
  std::size_t n = A.dim(), L = N.length();
  Echelon<F> ech(A.field(), std::max<std::size_t>(rows * L, 1), 0, budget);
  Accumulator<F> acc(A.field(), std::max<std::size_t>(rows * L, 1));
  for (const auto& col : d)
    for (std::size_t j = 0; j < L; ++j) {
      for (std::size_t e = 0; e < col.size(); ++e)
        acc.add_scaled(N.act(col.index[e] % n, j), col.value[e], static_cast<Index>((col.index[e] / n) * L));
      ech.insert(acc.take());
    }
  return ech.rank();
}

/// Rank of Hom(d, N) : N^{rows} -> N^{cols}.
template <Field F>
std::size_t hom_rank(const std::vector<SparseVec<typename F::value_type>>& d, std::size_t rows, const PresentedModule<F>& N,
                     WorkBudget* budget) {
  const auto& A = *N.ring();
  std::size_t n = A.dim(), L = N.length(), cols = d.size();
  struct Entry {
    Index h;
    std::size_t t;
    typename F::value_type c;
  };
  std::vector<std::vector<Entry>> by_row(rows);
  for (std::size_t h = 0; h < cols; ++h)
    for (std::size_t e = 0; e < d[h].size(); ++e)
      by_row[d[h].index[e] / n].push_back({static_cast<Index>(h), d[h].index[e] % n, d[h].value[e]});
  Echelon<F> ech(A.field(), std::max<std::size_t>(cols * L, 1), 0, budget);
  Accumulator<F> acc(A.field(), std::max<std::size_t>(cols * L, 1));
  for (std::size_t g = 0; g < rows; ++g)
    for (std::size_t j = 0; j < L; ++j) {
      for (const auto& en : by_row[g]) acc.add_scaled(N.act(en.t, j), en.c, en.h * static_cast<Index>(L));
      ech.insert(acc.take());
    }
  return ech.rank();
}

}  // namespace detail

/// dim_k Tor_i(M, N) for i = 0..max_i from the resolution of M.
template <Field F>
std::vector<std::size_t> tor_dims(Resolution<F>& res, const PresentedModule<F>& N, std::size_t max_i,
                                  std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  res.extend(max_i + 1, budget_limit);
  std::size_t L = N.length();
  // rank of d_i (x) N for i = 1..max_i+1
  std::vector<std::size_t> rk(max_i + 2, 0);
  for (std::size_t i = 1; i <= max_i + 1 && i <= res.num_differentials(); ++i) {
    WorkBudget budget(budget_limit);
    rk[i] = detail::tensor_rank(res.differential(i), res.betti_at(i - 1), N, &budget);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= max_i; ++i) out.push_back(res.betti_at(i) * L - rk[i] - rk[i + 1]);
  return out;
}

template <Field F>
std::vector<std::size_t> tor_dims(const PresentedModule<F>& M, const PresentedModule<F>& N, std::size_t max_i,
                                  std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  Resolution<F> res(M);
  return tor_dims(res, N, max_i, budget_limit);
}

/// dim_k Ext^i(M, N) for i = 0..max_i from the resolution of M.
template <Field F>
std::vector<std::size_t> ext_dims(Resolution<F>& res, const PresentedModule<F>& N, std::size_t max_i,
                                  std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  res.extend(max_i + 1, budget_limit);
  std::size_t L = N.length();
  // rank of Hom(d_i, N) for i = 1..max_i+1
  std::vector<std::size_t> rk(max_i + 2, 0);
  for (std::size_t i = 1; i <= max_i + 1 && i <= res.num_differentials(); ++i) {
    WorkBudget budget(budget_limit);
    rk[i] = detail::hom_rank(res.differential(i), res.betti_at(i - 1), N, &budget);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= max_i; ++i) out.push_back(res.betti_at(i) * L - rk[i] - rk[i + 1]);
  return out;
}

template <Field F>
std::vector<std::size_t> ext_dims(const PresentedModule<F>& M, const PresentedModule<F>& N, std::size_t max_i,
                                  std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  Resolution<F> res(M);
  return ext_dims(res, N, max_i, budget_limit);
}

/// Homological sanity of a computed resolution.
struct ResolutionCheck {
  bool composes_to_zero = true;
  bool exact = true;
  bool entries_in_m = true;
  std::size_t failed_step = 0;
  bool ok() const { return composes_to_zero && exact && entries_in_m; }
};

template <Field F>
ResolutionCheck verify_resolution(const Resolution<F>& res) {
  const auto& A = *res.ring();
  std::size_t n = A.dim();
  ResolutionCheck c;
  std::vector<std::size_t> ranks(res.num_differentials() + 2, 0);
  for (std::size_t i = 1; i <= res.num_differentials(); ++i) {
    const auto& d = res.differential(i);
    for (const auto& col : d)
      for (std::size_t e = 0; e < col.size(); ++e)
        if (col.index[e] % n == 0 && !A.field().is_zero(col.value[e])) {
          c.entries_in_m = false;
          if (!c.failed_step) c.failed_step = i;
        }
    if (i >= 2) {
      Accumulator<F> acc(A.field(), std::max<std::size_t>(res.betti_at(i - 2) * n, 1));
      for (const auto& col : d)
        if (!detail::apply_over_ring(A, res.differential(i - 1), col, acc).empty()) {
          c.composes_to_zero = false;
          if (!c.failed_step) c.failed_step = i;
        }
    }
    ranks[i] = detail::rank_over_k(A, d, res.betti_at(i - 1));
  }
  // Exactness at F_i: rank d_i + rank d_{i+1} = dim F_i, for interior i.
  for (std::size_t i = 1; i < res.num_differentials(); ++i)
    if (ranks[i] + ranks[i + 1] != res.betti_at(i) * n) {
      c.exact = false;
      if (!c.failed_step) c.failed_step = i;
    }
  // A terminated resolution must be exact at its last free module too.
  if (res.terminated() && res.num_differentials() > 0) {
    std::size_t last = res.num_differentials();
    if (ranks[last] != res.betti_at(last) * n) c.exact = false;
  }
  // Cokernel of d_1 must have the module's length.
  if (res.num_differentials() >= 1 && res.betti_at(0) * n - ranks[1] != res.module().length()) c.exact = false;
  return c;
}

/// Largest t such that F_i/mF_i -> mF_{i-1}/m^2F_{i-1} is injective for all
/// 1 <= i <= t; a resolution that is linear at every computed step returns
/// its length.
template <Field F>
std::size_t linear_to_step(const Resolution<F>& res) {
  const auto& A = *res.ring();
  std::size_t n = A.dim();
  Echelon<F> m2(A.field(), n);
  for (const auto& v : A.max_ideal_power(2)) m2.insert(v);
  for (std::size_t i = 1; i <= res.num_differentials(); ++i) {
    const auto& d = res.differential(i);
    std::size_t rows = res.betti_at(i - 1);
    Echelon<F> ech(A.field(), std::max<std::size_t>(rows * n, 1));
    std::size_t rank = 0;
    for (const auto& col : d) {
      // Reduce each ring entry modulo m^2 (canonical remainder).
      SparseVec<typename F::value_type> proj;
      std::size_t e = 0;
      while (e < col.size()) {
        std::size_t g = col.index[e] / n;
        SparseVec<typename F::value_type> entry;
        while (e < col.size() && col.index[e] / n == g) {
          entry.push(col.index[e] % n, col.value[e]);
          ++e;
        }
        auto rem = m2.reduce(entry);
        for (std::size_t k = 0; k < rem.size(); ++k) proj.push(static_cast<Index>(g * n + rem.index[k]), rem.value[k]);
      }
      if (ech.insert(proj)) ++rank;
    }
    if (rank != d.size()) return i - 1;
  }
  return res.length();
}

template <Field F>
bool is_linear_resolution(const Resolution<F>& res) {
  return linear_to_step(res) == res.length();
}

struct GdimCertificate {
  bool reflexive = false;
  std::size_t ext_M_vanish_to = 0;
  std::size_t ext_Mstar_vanish_to = 0;
  std::size_t depth = 0;
  bool passes() const { return reflexive && ext_M_vanish_to == depth && ext_Mstar_vanish_to == depth; }
};

/// Checks that M -> M** is bijective and Ext^i(M,R), Ext^i(M*,R) vanish for
/// 1 <= i <= depth.
template <Field F>
GdimCertificate gdim_zero_certificate(const PresentedModule<F>& M, std::size_t depth,
                                      std::uint64_t budget_limit = WorkBudget::kDefaultLimit) {
  if (depth < 1) throw InvalidArgument("certificate depth must be at least 1");
  const auto& A = *M.ring();
  const F& k = A.field();
  std::size_t n = A.dim();
  auto Rmod = PresentedModule<F>::free(M.ring(), 1);
  GdimCertificate cert;
  cert.depth = depth;

  auto Mstar = PresentedModule<F>::hom(M, Rmod);
  auto Mss = PresentedModule<F>::hom(Mstar, Rmod);
  // Evaluation M -> R^{mu(M*)}, m -> (phi_j(m))_j, lands in M**.
  const auto& phis = Mstar.generator_images();
  Echelon<F> ech(k, std::max<std::size_t>(phis.size() * n, 1));
  Accumulator<F> acc(k, n);
  std::size_t rank = 0;
  for (Index c : M.basis_coordinates()) {
    std::size_t g = c / n, t = c % n;
    SparseVec<typename F::value_type> img;
    for (std::size_t j = 0; j < phis.size(); ++j) {
      // component g of phi_j, an element of R
      SparseVec<typename F::value_type> comp;
      for (std::size_t e = 0; e < phis[j].size(); ++e)
        if (phis[j].index[e] / n == g) comp.push(phis[j].index[e] % n, phis[j].value[e]);
      acc.add_scaled(comp, k.one());
      auto prod = A.multiply(A.basis_vector(t), acc.take());
      for (std::size_t e = 0; e < prod.size(); ++e) img.push(static_cast<Index>(j * n + prod.index[e]), prod.value[e]);
    }
    if (ech.insert(img)) ++rank;
  }
  cert.reflexive = rank == M.length() && Mss.length() == M.length();

  auto vanish_to = [&](const PresentedModule<F>& X) {
    auto ext = ext_dims(X, Rmod, depth, budget_limit);
    std::size_t t = 0;
    while (t < depth && ext[t + 1] == 0) ++t;
    return t;
  };
  cert.ext_M_vanish_to = vanish_to(M);
  cert.ext_Mstar_vanish_to = vanish_to(Mstar);
  return cert;
}

}  // namespace cangrow
