#pragma once

// Finitely generated modules over an ArtinAlgebra, held as M = R^b0 / U with
// minimal generators and a minimal presentation. Every construction (quotients,
// submodules, Matlis duals, Hom modules) funnels through `present`, which
// picks minimal generators of a submodule of some ambient R-space and computes
// the syzygies among them.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cangrow/algebra.hpp"
#include "cangrow/errors.hpp"
#include "cangrow/linalg.hpp"

namespace cangrow {

namespace detail {

/// basis_t * v for v in the free module R^b (coordinates g*n + t').
template <Field F>
SparseVec<typename F::value_type> basis_times_free(const ArtinAlgebra<F>& R, std::size_t t,
                                                   const SparseVec<typename F::value_type>& v,
                                                   Accumulator<F>& acc) {
  std::size_t n = R.dim();
  for (std::size_t k = 0; k < v.size(); ++k) {
    Index g = static_cast<Index>(v.index[k] / n);
    std::size_t s = v.index[k] % n;
    acc.add_scaled(R.product(t, s), v.value[k], g * static_cast<Index>(n));
  }
  return acc.take();
}

/// g_m * v for the m-th minimal generator of the maximal ideal.
template <Field F>
SparseVec<typename F::value_type> generator_times_free(const ArtinAlgebra<F>& R, std::size_t m,
                                                       const SparseVec<typename F::value_type>& v,
                                                       Accumulator<F>& acc) {
  std::size_t n = R.dim();
  for (std::size_t k = 0; k < v.size(); ++k) {
    Index g = static_cast<Index>(v.index[k] / n);
    std::size_t s = v.index[k] % n;
    acc.add_scaled(R.generator_times_basis(m, s), v.value[k], g * static_cast<Index>(n));
  }
  return acc.take();
}

/// r * v for an arbitrary ring element r and v in R^b.
template <Field F>
SparseVec<typename F::value_type> element_times_free(const ArtinAlgebra<F>& R, const SparseVec<typename F::value_type>& r,
                                                     const SparseVec<typename F::value_type>& v, Accumulator<F>& acc) {
  std::size_t n = R.dim();
  const F& k = R.field();
  for (std::size_t a = 0; a < r.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b) {
      Index g = static_cast<Index>(v.index[b] / n);
      std::size_t s = v.index[b] % n;
      acc.add_scaled(R.product(r.index[a], s), k.mul(r.value[a], v.value[b]), g * static_cast<Index>(n));
    }
  return acc.take();
}

template <Field F>
struct SyzygyResult {
  std::vector<SparseVec<typename F::value_type>> generators;  // minimal generators of the kernel
  std::shared_ptr<Echelon<F>> kernel;                          // echelon of the kernel as a k-space
  std::size_t kernel_dim = 0;
};

/// Kernel of R^mu -> A, e_g -> gens[g], together with minimal R-generators
/// of it: a basis of K/mK completed from mK by the kernel vectors in order.
/// `image(t, v)` must return basis_t * v in canonical ambient coordinates.
template <Field F>
SyzygyResult<F> syzygy(const ArtinAlgebra<F>& R, std::size_t ambient_dim,
                       const std::function<SparseVec<typename F::value_type>(std::size_t, const SparseVec<typename F::value_type>&)>& image,
                       const std::vector<SparseVec<typename F::value_type>>& gens, WorkBudget* budget) {
  using Vec = SparseVec<typename F::value_type>;
  const F& k = R.field();
  std::size_t n = R.dim(), mu = gens.size();
  std::size_t cols = mu * n;
  if (budget) {
    std::uint64_t nz = 0;
    for (const auto& g : gens) nz += g.size();
    budget->check_estimate(nz * n, "syzygy computation");
  }

  // Degree-major insertion keeps relations short: low-degree columns first.
  Echelon<F> image_span(k, std::max<std::size_t>(ambient_dim, 1), std::max<std::size_t>(cols, 1), budget);
  std::vector<Vec> K;
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t g = 0; g < mu; ++g) {
      auto rel = image_span.insert_tracked(image(t, gens[g]), static_cast<Index>(g * n + t));
      if (rel) K.push_back(std::move(*rel));
    }

  SyzygyResult<F> out;
  out.kernel_dim = K.size();
  out.kernel = std::make_shared<Echelon<F>>(k, std::max<std::size_t>(cols, 1), 0, budget);
  Accumulator<F> acc(k, std::max<std::size_t>(cols, 1));
  for (const auto& v : K)
    for (std::size_t m = 0; m < R.embedding_dim(); ++m) out.kernel->insert(generator_times_free(R, m, v, acc));
  for (auto& v : K)
    if (out.kernel->insert(v)) out.generators.push_back(std::move(v));
  return out;
}

}  // namespace detail

template <Field F>
class PresentedModule {
 public:
  using V = typename F::value_type;
  using Vec = SparseVec<V>;
  using ImageFn = std::function<Vec(std::size_t, const Vec&)>;

  PresentedModule() = default;

  const AlgebraPtr<F>& ring() const { return s_->ring; }
  /// mu(M) = b_0.
  std::size_t num_generators() const { return s_->b0; }
  std::size_t num_relations() const { return s_->presentation.size(); }
  /// Columns of the minimal presentation, as vectors of R^b0.
  const std::vector<Vec>& presentation() const { return s_->presentation; }
  bool is_free() const { return s_->presentation.empty(); }
  std::size_t length() const { return s_->basis.size(); }
  /// Ambient-space images of the chosen generators (Hom and dual modules).
  const std::vector<Vec>& generator_images() const { return s_->generator_images; }
  const std::string& description() const { return s_->description; }
  void set_description(std::string d) { s_->description = std::move(d); }

  /// Coordinates of R^b0 that index the k-basis of M.
  const std::vector<Index>& basis_coordinates() const { return s_->basis; }

  /// M-coordinates of the class of v in R^b0.
  Vec coordinates(const Vec& v) const {
    Vec rem = s_->U ? s_->U->reduce(v) : v;
    Vec out;
    out.reserve(rem.size());
    for (std::size_t k = 0; k < rem.size(); ++k) out.push(static_cast<Index>(s_->position[rem.index[k]]), rem.value[k]);
    return out;
  }

  /// basis_t * m_j in M-coordinates.
  const Vec& act(std::size_t t, std::size_t j) const {
    build_action();
    return s_->action[t * length() + j];
  }

  /// r * m for a ring element r and m in M-coordinates.
  Vec act_element(const Vec& r, const Vec& m) const {
    const F& k = ring()->field();
    Accumulator<F> acc(k, std::max<std::size_t>(length(), 1));
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < m.size(); ++b) acc.add_scaled(act(r.index[a], m.index[b]), k.mul(r.value[a], m.value[b]));
    return acc.take();
  }

  /// length of m^p M.
  std::size_t power_length(std::size_t p) const {
    const auto& R = *ring();
    Echelon<F> span(R.field(), std::max<std::size_t>(length(), 1));
    for (const auto& r : R.max_ideal_power(p))
      for (std::size_t j = 0; j < length(); ++j) span.insert(act_element(r, unit(j)));
    return span.rank();
  }
  std::size_t m_length() const { return power_length(1); }
  bool m_squared_kills() const { return power_length(2) == 0; }

  Vec unit(std::size_t j) const {
    Vec v;
    v.push(static_cast<Index>(j), ring()->field().one());
    return v;
  }

  // ---- constructions ----

  static PresentedModule free(AlgebraPtr<F> R, std::size_t rank) {
    if (rank == 0) throw ZeroModule("free module of rank 0");
    auto s = std::make_shared<State>();
    s->ring = R;
    s->b0 = rank;
    s->description = rank == 1 ? "R" : "R^" + std::to_string(rank);
    PresentedModule M(s);
    M.finish_basis();
    return M;
  }

  /// R^b0 / (R-span of the given columns), re-presented minimally.
  static PresentedModule cokernel(AlgebraPtr<F> R, std::size_t b0, const std::vector<Vec>& columns,
                                  WorkBudget* budget = nullptr) {
    const auto& A = *R;
    std::size_t n = A.dim();
    auto U = std::make_shared<Echelon<F>>(A.field(), std::max<std::size_t>(b0 * n, 1), 0, budget);
    Accumulator<F> acc(A.field(), std::max<std::size_t>(b0 * n, 1));
    for (const auto& c : columns)
      for (std::size_t t = 0; t < n; ++t) U->insert(detail::basis_times_free(A, t, c, acc));
    auto image = [&A, U, acc](std::size_t t, const Vec& v) mutable { return U->reduce(detail::basis_times_free(A, t, v, acc)); };
    std::vector<Vec> units;
    for (std::size_t g = 0; g < b0; ++g) {
      Vec e;
      e.push(static_cast<Index>(g * n), A.field().one());
      units.push_back(U->reduce(e));
    }
    return present(R, b0 * n, image, units, budget);
  }

  /// R/J for J generated by the given ring elements.
  static PresentedModule cyclic(AlgebraPtr<F> R, const std::vector<Vec>& ideal_gens, WorkBudget* budget = nullptr) {
    auto M = cokernel(R, 1, ideal_gens, budget);
    return M;
  }

  static PresentedModule residue_field(AlgebraPtr<F> R) {
    auto M = cyclic(R, R->max_ideal_generators());
    M.set_description("k");
    return M;
  }

  /// The ideal (f_1..f_s) as a submodule of R.
  static PresentedModule ideal(AlgebraPtr<F> R, const std::vector<Vec>& gens, WorkBudget* budget = nullptr) {
    const auto& A = *R;
    Accumulator<F> acc(A.field(), A.dim());
    auto image = [&A, acc](std::size_t t, const Vec& v) mutable { return detail::basis_times_free(A, t, v, acc); };
    return present(R, A.dim(), image, gens, budget);
  }

  /// Hom_k(M, k) with (r f)(m) = f(r m).
  PresentedModule matlis_dual(WorkBudget* budget = nullptr) const {
    const auto& A = *ring();
    std::size_t L = length(), n = A.dim();
    // Row i of the transpose of act(t): dual[t*L + i] = basis_t * e_i^*.
    auto dual = std::make_shared<std::vector<Vec>>(n * L);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < L; ++j) {
        const Vec& col = act(t, j);
        for (std::size_t k = 0; k < col.size(); ++k) (*dual)[t * L + col.index[k]].push(static_cast<Index>(j), col.value[k]);
      }
    Accumulator<F> acc(A.field(), std::max<std::size_t>(L, 1));
    auto image = [dual, L, acc](std::size_t t, const Vec& f) mutable {
      for (std::size_t k = 0; k < f.size(); ++k) acc.add_scaled((*dual)[t * L + f.index[k]], f.value[k]);
      return acc.take();
    };
    std::vector<Vec> units;
    for (std::size_t i = 0; i < L; ++i) units.push_back(unit(i));
    auto D = present(ring(), L, image, units, budget);
    D.set_description("dual(" + description() + ")");
    return D;
  }

  /// omega_R = Hom_k(R, k); its generators are dual to a socle basis.
  static PresentedModule canonical(AlgebraPtr<F> R, WorkBudget* budget = nullptr) {
    auto W = free(R, 1).matlis_dual(budget);
    W.set_description("canonical");
    return W;
  }

  /// Hom_R(M, N) inside N^{b0(M)}: tuples (phi(e_g))_g killing every relation.
  static PresentedModule hom(const PresentedModule& M, const PresentedModule& N, WorkBudget* budget = nullptr) {
    const auto& A = *M.ring();
    const F& k = A.field();
    std::size_t n = A.dim(), b0 = M.num_generators(), b1 = M.num_relations(), L = N.length();
    std::size_t dim = b0 * L;

    std::vector<Vec> homs;
    if (b1 == 0) {
      for (std::size_t c = 0; c < dim; ++c) homs.push_back(N.unit(c));
    } else {
      // Column (g, j): the relations evaluated on phi = (0..n_j at g..0).
      std::vector<std::vector<std::pair<Index, Vec>>> by_generator(b0);  // (relation, entry)
      Accumulator<F> racc(k, n);
      for (std::size_t r = 0; r < b1; ++r) {
        const Vec& col = M.presentation()[r];
        std::vector<Vec> entries(b0);
        for (std::size_t e = 0; e < col.size(); ++e) entries[col.index[e] / n].push(col.index[e] % n, col.value[e]);
        for (std::size_t g = 0; g < b0; ++g)
          if (!entries[g].empty()) by_generator[g].push_back({static_cast<Index>(r), std::move(entries[g])});
      }
      Echelon<F> ech(k, std::max<std::size_t>(b1 * L, 1), std::max<std::size_t>(dim, 1), budget);
      Accumulator<F> acc(k, std::max<std::size_t>(b1 * L, 1));
      for (std::size_t g = 0; g < b0; ++g)
        for (std::size_t j = 0; j < L; ++j) {
          for (const auto& [r, entry] : by_generator[g])
            for (std::size_t e = 0; e < entry.size(); ++e)
              acc.add_scaled(N.act(entry.index[e], j), entry.value[e], static_cast<Index>(r * L));
          auto rel = ech.insert_tracked(acc.take(), static_cast<Index>(g * L + j));
          if (rel) homs.push_back(std::move(*rel));
        }
    }
    if (homs.empty()) throw ZeroModule("Hom module is zero");
    Accumulator<F> acc(k, std::max<std::size_t>(dim, 1));
    auto image = [N, L, acc](std::size_t t, const Vec& v) mutable {
      for (std::size_t e = 0; e < v.size(); ++e) {
        Index g = static_cast<Index>(v.index[e] / L);
        acc.add_scaled(N.act(t, v.index[e] % L), v.value[e], g * static_cast<Index>(L));
      }
      return acc.take();
    };
    auto H = present(M.ring(), dim, image, homs, budget);
    H.set_description("Hom(" + M.description() + "," + N.description() + ")");
    return H;
  }

  /// First syzygy: the submodule of R^b0 spanned by the presentation columns.
  PresentedModule syzygy_module(WorkBudget* budget = nullptr) const {
    if (is_free()) throw ZeroModule("the syzygy of a free module is zero");
    const auto& A = *ring();
    Accumulator<F> acc(A.field(), num_generators() * A.dim());
    auto image = [&A, acc](std::size_t t, const Vec& v) mutable { return detail::basis_times_free(A, t, v, acc); };
    auto S = present(ring(), num_generators() * A.dim(), image, presentation(), budget);
    S.set_description("syz(" + description() + ")");
    return S;
  }

  /// Minimal presentation of the submodule generated by `candidates` inside an
  /// ambient R-space whose action is `image`.
  static PresentedModule present(AlgebraPtr<F> R, std::size_t ambient_dim, const ImageFn& image,
                                 const std::vector<Vec>& candidates, WorkBudget* budget) {
    const auto& A = *R;
    std::size_t n = A.dim();
    Echelon<F> sel(A.field(), std::max<std::size_t>(ambient_dim, 1), 0, budget);
    for (const auto& c : candidates)
      for (std::size_t t = 1; t < n; ++t) sel.insert(image(t, c));
    std::vector<Vec> chosen;
    for (const auto& c : candidates)
      if (!c.empty() && sel.insert(c)) chosen.push_back(c);
    if (chosen.empty()) throw ZeroModule("the module is zero");

    auto syz = detail::syzygy(A, ambient_dim, image, chosen, budget);
    auto s = std::make_shared<State>();
    s->ring = R;
    s->b0 = chosen.size();
    s->presentation = std::move(syz.generators);
    s->U = syz.kernel_dim ? syz.kernel : nullptr;
    if (s->U) s->U->set_budget(nullptr);
    s->generator_images = std::move(chosen);
    PresentedModule M(s);
    M.finish_basis();
    return M;
  }

 private:
  struct State {
    AlgebraPtr<F> ring;
    std::size_t b0 = 0;
    std::vector<Vec> presentation;
    std::shared_ptr<Echelon<F>> U;  // k-span of the relations, null when free
    std::vector<Vec> generator_images;
    std::vector<Index> basis;
    std::vector<std::int64_t> position;  // coordinate -> basis index, -1 on pivots
    std::vector<Vec> action;
    bool action_built = false;
    std::string description;
  };

  explicit PresentedModule(std::shared_ptr<State> s) : s_(std::move(s)) {}

  void finish_basis() {
    std::size_t total = s_->b0 * s_->ring->dim();
    s_->position.assign(total, -1);
    for (std::size_t c = 0; c < total; ++c)
      if (!s_->U || !s_->U->is_pivot(static_cast<Index>(c))) {
        s_->position[c] = static_cast<std::int64_t>(s_->basis.size());
        s_->basis.push_back(static_cast<Index>(c));
      }
  }

  void build_action() const {
    if (s_->action_built) return;
    const auto& A = *ring();
    std::size_t n = A.dim(), L = length();
    s_->action.assign(n * L, Vec{});
    Accumulator<F> acc(A.field(), s_->b0 * n);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < L; ++j) {
        Vec e;
        e.push(s_->basis[j], A.field().one());
        s_->action[t * L + j] = coordinates(detail::basis_times_free(A, t, e, acc));
      }
    s_->action_built = true;
  }

  std::shared_ptr<State> s_;
};

}  // namespace cangrow
