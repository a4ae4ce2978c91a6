#pragma once

// Artinian local algebras R = k[x_1..x_n]_(x) / I presented by the standard
// monomials of a Gröbner basis, with an eagerly materialized multiplication
// table.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cangrow/errors.hpp"
#include "cangrow/field.hpp"
#include "cangrow/linalg.hpp"
#include "cangrow/polynomial.hpp"

namespace cangrow {

struct AlgebraOptions {
  std::size_t size_cap = 512;
};

struct AlgebraProfile {
  std::size_t dim_k = 0;
  std::vector<std::size_t> hilbert;  // dim m^d / m^(d+1)
  std::size_t embedding_dim = 0;     // e = dim m/m^2
  std::size_t socle_dim = 0;
  std::size_t m2_dim = 0;            // s = dim m^2
  std::size_t nil_index = 0;         // least t with m^t = 0
};

template <Field F>
class ArtinAlgebra {
 public:
  using V = typename F::value_type;
  using Vec = SparseVec<V>;
  using Poly = Polynomial<F>;

  /// k[vars]/(generators) localized at the origin.
  static std::shared_ptr<const ArtinAlgebra> from_quotient(const F& field, std::vector<std::string> vars,
                                                           const std::vector<Poly>& generators,
                                                           AlgebraOptions opts = {}) {
    PolyRing<F> ring(field, std::move(vars));
    for (const auto& g : generators)
      if (g.has_constant_term())
        throw UnitInIdeal("generator " + ring.to_string(g) + " has a nonzero constant term and is a unit in the local ring");

    auto gb = buchberger(ring, generators);
    if (!is_zero_dimensional(gb, ring.nvars()))
      throw NotArtinian(
          "the ideal is not zero-dimensional; reduce the ring and module modulo a maximal regular "
          "sequence and supply the Artinian quotient (e.g. S/(t^7) = k[a,b]/(a^4,a^3*b,b^2))");

    bool homogeneous = std::all_of(generators.begin(), generators.end(), [](const Poly& g) { return g.is_homogeneous(); });
    if (!homogeneous) gb = localize(ring, generators, gb, opts);

    auto alg = std::shared_ptr<ArtinAlgebra>(new ArtinAlgebra(ring));
    alg->gb_ = gb;
    alg->graded_ = homogeneous;
    alg->basis_ = standard_monomials(gb, ring.nvars(), opts.size_cap);
    alg->build_from_normal_forms();
    alg->finish();
    return alg;
  }

  /// The local tensor R1 (x)_k R2: product basis, componentwise products.
  static std::shared_ptr<const ArtinAlgebra> local_tensor(const ArtinAlgebra& a, const ArtinAlgebra& b,
                                                          AlgebraOptions opts = {}) {
    if (!(a.field_.spec() == b.field_.spec())) throw InvalidArgument("local tensor needs a common ground field");
    std::size_t na = a.nvars(), nb = b.nvars();
    if (na + nb > kMaxVars) throw SizeCap("local tensor would need more than " + std::to_string(kMaxVars) + " variables");
    if (a.dim() * b.dim() > opts.size_cap)
      throw SizeCap("local tensor dimension " + std::to_string(a.dim() * b.dim()) + " exceeds the cap of " +
                    std::to_string(opts.size_cap));

    std::vector<std::string> vars = a.variables();
    for (const auto& v : b.variables()) {
      std::string name = v;
      while (std::find(vars.begin(), vars.end(), name) != vars.end()) name += "_2";
      vars.push_back(name);
    }
    PolyRing<F> ring(a.field_, vars);
    auto shift = [&](const Monomial& m) {
      Monomial out;
      for (std::size_t i = 0; i < nb; ++i) out.exp[na + i] = m.exp[i];
      return out;
    };

    auto alg = std::shared_ptr<ArtinAlgebra>(new ArtinAlgebra(ring));
    alg->graded_ = a.graded_ && b.graded_;
    for (const auto& g : a.gb_.generators) alg->gb_.generators.push_back(g);
    for (const auto& g : b.gb_.generators) {
      std::vector<Term<F>> terms;
      for (const auto& t : g.terms) terms.push_back({shift(t.mono), t.coeff});
      alg->gb_.generators.push_back(ring.from_terms(std::move(terms)));
    }

    struct Cell {
      Monomial mono;
      std::size_t i, j;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j) cells.push_back({a.basis_[i] * shift(b.basis_[j]), i, j});
    MonomialOrder order = ring.order();
    std::stable_sort(cells.begin(), cells.end(), [&](const Cell& x, const Cell& y) {
      if (x.mono.degree() != y.mono.degree()) return x.mono.degree() < y.mono.degree();
      return order.compare(x.mono, y.mono) > 0;
    });
    std::vector<std::size_t> where(a.dim() * b.dim());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      alg->basis_.push_back(cells[k].mono);
      where[cells[k].i * b.dim() + cells[k].j] = k;
    }
    std::size_t n = cells.size();
    alg->table_.assign(n * n, Vec{});
    Accumulator<F> acc(a.field_, n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p; q < n; ++q) {
        const Vec& u = a.product(cells[p].i, cells[q].i);
        const Vec& w = b.product(cells[p].j, cells[q].j);
        for (std::size_t s = 0; s < u.size(); ++s)
          for (std::size_t t = 0; t < w.size(); ++t)
            acc.add(static_cast<Index>(where[u.index[s] * b.dim() + w.index[t]]), a.field_.mul(u.value[s], w.value[t]));
        alg->table_[p * n + q] = acc.take();
        alg->table_[q * n + p] = alg->table_[p * n + q];
      }
    alg->variable_images_.clear();
    for (std::size_t v = 0; v < na; ++v) alg->variable_images_.push_back(alg->embed(a.variable_images_[v], where, b.dim(), true));
    for (std::size_t v = 0; v < nb; ++v) alg->variable_images_.push_back(alg->embed(b.variable_images_[v], where, b.dim(), false));
    alg->finish();
    return alg;
  }

  const F& field() const { return field_; }
  FieldSpec field_spec() const { return field_.spec(); }
  const PolyRing<F>& poly_ring() const { return ring_; }
  const std::vector<std::string>& variables() const { return ring_.variables(); }
  std::size_t nvars() const { return ring_.nvars(); }
  /// Generators of the (localized) defining ideal.
  const std::vector<Poly>& ideal_generators() const { return gb_.generators; }

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Monomial>& basis() const { return basis_; }
  unsigned degree(std::size_t i) const { return basis_[i].degree(); }
  bool graded() const { return graded_; }

  /// basis_i * basis_j in basis coordinates.
  const Vec& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }

  Vec multiply(const Vec& a, const Vec& b) const {
    Accumulator<F> acc(field_, dim());
    for (std::size_t s = 0; s < a.size(); ++s)
      for (std::size_t t = 0; t < b.size(); ++t)
        acc.add_scaled(product(a.index[s], b.index[t]), field_.mul(a.value[s], b.value[t]));
    return acc.take();
  }

  Vec unit() const {
    Vec v;
    v.push(0, field_.one());
    return v;
  }

  /// Coordinates of a polynomial in the basis (its normal form).
  Vec element(const Poly& p) const {
    Accumulator<F> acc(field_, dim());
    for (const auto& t : p.terms) acc.add_scaled(monomial_image(t.mono), t.coeff);
    return acc.take();
  }

  /// Image of x_v, one per ring variable.
  const std::vector<Vec>& variable_images() const { return variable_images_; }

  /// Minimal generators of the maximal ideal: the variable images whose
  /// classes form a basis of m/m^2, in variable order.
  const std::vector<Vec>& max_ideal_generators() const { return mgens_; }
  std::size_t embedding_dim() const { return mgens_.size(); }
  /// g_m * basis_t for the m-th maximal-ideal generator.
  const Vec& generator_times_basis(std::size_t m, std::size_t t) const { return gen_table_[m * dim() + t]; }

  /// Echelon basis of m^t (t = 0 gives the whole ring).
  const std::vector<Vec>& max_ideal_power(std::size_t t) const {
    static const std::vector<Vec> empty;
    return t < powers_.size() ? powers_[t] : empty;
  }
  std::size_t nil_index() const { return powers_.size() - 1; }

  /// Basis of ann(m).
  const std::vector<Vec>& socle() const { return socle_; }
  bool is_gorenstein() const { return socle_.size() == 1; }

  AlgebraProfile profile() const {
    AlgebraProfile p;
    p.dim_k = dim();
    for (std::size_t d = 0; d + 1 < powers_.size(); ++d) p.hilbert.push_back(powers_[d].size() - powers_[d + 1].size());
    p.embedding_dim = embedding_dim();
    p.socle_dim = socle_.size();
    p.m2_dim = max_ideal_power(2).size();
    p.nil_index = nil_index();
    return p;
  }

  /// Checks commutativity, associativity and the unit on the table.
  bool satisfies_algebra_axioms() const {
    std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(product(0, i) == basis_vector(i)) || !(product(i, 0) == basis_vector(i))) return false;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(product(i, j) == product(j, i))) return false;
        for (std::size_t k = 0; k < n; ++k)
          if (!(multiply(product(i, j), basis_vector(k)) == multiply(basis_vector(i), product(j, k)))) return false;
      }
    }
    return true;
  }

  Vec basis_vector(std::size_t i) const {
    Vec v;
    v.push(static_cast<Index>(i), field_.one());
    return v;
  }

  /// Ring-spec text that parses back to this algebra.
  std::string spec_text() const {
    std::string s = "ring { field: " + field_.spec().name() + "; vars: ";
    for (std::size_t i = 0; i < nvars(); ++i) s += (i ? "," : "") + variables()[i];
    s += "; ideal: ";
    for (std::size_t i = 0; i < gb_.generators.size(); ++i) s += (i ? ", " : "") + ring_.to_string(integral(gb_.generators[i]));
    s += " }";
    return s;
  }

 private:
  // The grammar only has integer coefficients: clear denominators over Q.
  Poly integral(const Poly& p) const {
    if constexpr (std::is_same_v<V, mpq_class>) {
      mpz_class l = 1;
      for (const auto& t : p.terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
      return ring_.mul_term(p, Monomial::one(), field_.from_mpz(l));
    } else {
      return p;
    }
  }

  explicit ArtinAlgebra(const PolyRing<F>& ring) : field_(ring.field()), ring_(ring) {}

  // Replaces I by I + m^N for the least N at which the quotient dimension
  // stops growing; that ideal is the primary component at the origin.
  static GroebnerBasis<F> localize(const PolyRing<F>& ring, const std::vector<Poly>& generators,
                                   const GroebnerBasis<F>& global, const AlgebraOptions& opts) {
    auto dimension_for = [&](unsigned N, GroebnerBasis<F>& out) {
      std::vector<Poly> gens = generators;
      std::vector<Monomial> mons;
      Monomial cur;
      std::function<void(std::size_t, unsigned)> rec = [&](std::size_t v, unsigned left) {
        if (v + 1 == ring.nvars()) {
          cur.exp[v] = static_cast<std::uint16_t>(left);
          mons.push_back(cur);
          cur.exp[v] = 0;
          return;
        }
        for (unsigned e = 0; e <= left; ++e) {
          cur.exp[v] = static_cast<std::uint16_t>(e);
          rec(v + 1, left - e);
        }
        cur.exp[v] = 0;
      };
      rec(0, N);
      for (const auto& m : mons) gens.push_back(ring.monomial(m, ring.field().one()));
      out = buchberger(ring, gens);
      return standard_monomials(out, ring.nvars(), opts.size_cap * 8).size();
    };
    std::size_t global_dim = standard_monomials(global, ring.nvars(), opts.size_cap * 8).size();
    GroebnerBasis<F> cur, next;
    std::size_t d = dimension_for(1, cur);
    for (unsigned N = 1;; ++N) {
      std::size_t d2 = dimension_for(N + 1, next);
      if (d2 == d) return cur;
      if (d2 >= global_dim) return global;
      d = d2;
      cur = next;
    }
  }

  Vec monomial_image(const Monomial& m) const {
    auto it = nf_cache_.find(m);
    if (it != nf_cache_.end()) return it->second;
    auto nf = normal_form(ring_, ring_.monomial(m, field_.one()), gb_);
    Vec v;
    std::vector<std::pair<Index, V>> entries;
    for (const auto& t : nf.terms) entries.push_back({static_cast<Index>(index_.at(t.mono)), t.coeff});
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& e : entries) v.push(e.first, e.second);
    nf_cache_.emplace(m, v);
    return v;
  }

  void build_from_normal_forms() {
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
    std::size_t n = dim();
    table_.assign(n * n, Vec{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        table_[i * n + j] = monomial_image(basis_[i] * basis_[j]);
        table_[j * n + i] = table_[i * n + j];
      }
    variable_images_.clear();
    for (std::size_t v = 0; v < nvars(); ++v) variable_images_.push_back(monomial_image(Monomial::variable(v)));
  }

  Vec embed(const Vec& v, const std::vector<std::size_t>& where, std::size_t bdim, bool left) const {
    std::vector<std::pair<Index, V>> entries;
    for (std::size_t k = 0; k < v.size(); ++k) {
      std::size_t cell = left ? v.index[k] * bdim : v.index[k];
      entries.push_back({static_cast<Index>(where[cell]), v.value[k]});
    }
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    Vec out;
    for (auto& e : entries) out.push(e.first, e.second);
    return out;
  }

  // Powers of m, minimal generators of m, the generator action and socle.
  void finish() {
    std::size_t n = dim();
    if (n == 0 || !basis_[0].is_one()) throw UnitInIdeal("the quotient ring is zero");
    for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;

    // m is spanned by basis[1..]; in a local quotient this is the maximal ideal.
    powers_.clear();
    std::vector<Vec> all;
    for (std::size_t i = 0; i < n; ++i) all.push_back(basis_vector(i));
    powers_.push_back(all);
    std::vector<Vec> m1(all.begin() + 1, all.end());
    powers_.push_back(m1);
    while (!powers_.back().empty()) {
      Echelon<F> ech(field_, n);
      for (const auto& v : powers_.back())
        for (const auto& x : variable_images_) ech.insert(multiply(x, v));
      auto rows = ech.reduced_rows();
      if (rows.size() == powers_.back().size()) throw InvalidArgument("the quotient is not local: m is not nilpotent");
      powers_.push_back(std::move(rows));
    }

    Echelon<F> m2(field_, n);
    for (const auto& v : max_ideal_power(2)) m2.insert(v);
    mgens_.clear();
    for (const auto& x : variable_images_)
      if (!x.empty() && m2.insert(x)) mgens_.push_back(x);

    gen_table_.assign(mgens_.size() * n, Vec{});
    for (std::size_t m = 0; m < mgens_.size(); ++m)
      for (std::size_t t = 0; t < n; ++t) gen_table_[m * n + t] = multiply(mgens_[m], basis_vector(t));

    // ann(m): kernel of r -> (g_1 r, ..., g_e r).
    std::size_t e = mgens_.size();
    Echelon<F> ker(field_, std::max<std::size_t>(1, e * n), n);
    socle_.clear();
    for (std::size_t t = 0; t < n; ++t) {
      Vec col;
      for (std::size_t m = 0; m < e; ++m) {
        const Vec& prod = gen_table_[m * n + t];
        for (std::size_t k = 0; k < prod.size(); ++k) col.push(static_cast<Index>(m * n + prod.index[k]), prod.value[k]);
      }
      auto rel = ker.insert_tracked(col, static_cast<Index>(t));
      if (rel) socle_.push_back(std::move(*rel));
    }
    nf_cache_.clear();
  }

  F field_;
  PolyRing<F> ring_;
  GroebnerBasis<F> gb_;
  bool graded_ = true;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t> index_;
  std::vector<Vec> table_;
  std::vector<Vec> variable_images_;
  std::vector<Vec> mgens_;
  std::vector<Vec> gen_table_;
  std::vector<std::vector<Vec>> powers_;
  std::vector<Vec> socle_;
  mutable std::map<Monomial, Vec> nf_cache_;
};

template <Field F>
using AlgebraPtr = std::shared_ptr<const ArtinAlgebra<F>>;

}  // namespace cangrow
