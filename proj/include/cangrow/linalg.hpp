#pragma once

// Exact sparse linear algebra over a Field: vectors, matrices, an incremental
// echelon form with optional relation tracking, and the rref/kernel/rank
// operations built on it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cangrow/errors.hpp"
#include "cangrow/field.hpp"

namespace cangrow {

using Index = std::uint32_t;

/// Sparse vector: strictly increasing indices, no stored zeros.
template <class V>
struct SparseVec {
  std::vector<Index> index;
  std::vector<V> value;

  std::size_t size() const { return index.size(); }
  bool empty() const { return index.empty(); }
  void clear() {
    index.clear();
    value.clear();
  }
  void reserve(std::size_t n) {
    index.reserve(n);
    value.reserve(n);
  }
  /// Appends an entry; the caller keeps indices increasing.
  void push(Index i, V v) {
    index.push_back(i);
    value.push_back(std::move(v));
  }

  template <class F>
  V get(const F& field, Index i) const {
    auto it = std::lower_bound(index.begin(), index.end(), i);
    if (it == index.end() || *it != i) return field.zero();
    return value[static_cast<std::size_t>(it - index.begin())];
  }

  friend bool operator==(const SparseVec&, const SparseVec&) = default;
};

/// Accumulates scattered contributions and emits a SparseVec. Dense scratch of
/// the full dimension, so reuse one instance across many vectors.
template <Field F>
class Accumulator {
 public:
  using V = typename F::value_type;

  Accumulator(const F& field, std::size_t dim) : field_(field), ws_(dim, field.zero()), mark_(dim, 0) {}

  void add(Index i, const V& v) {
    if (!mark_[i]) {
      mark_[i] = 1;
      touched_.push_back(i);
      ws_[i] = v;
    } else {
      ws_[i] = field_.add(ws_[i], v);
    }
  }
  void add_scaled(const SparseVec<V>& vec, const V& c, Index offset = 0) {
    for (std::size_t k = 0; k < vec.size(); ++k) add(vec.index[k] + offset, field_.mul(c, vec.value[k]));
  }

  SparseVec<V> take() {
    std::sort(touched_.begin(), touched_.end());
    SparseVec<V> out;
    out.reserve(touched_.size());
    for (Index i : touched_) {
      if (!field_.is_zero(ws_[i])) out.push(i, ws_[i]);
      ws_[i] = field_.zero();
      mark_[i] = 0;
    }
    touched_.clear();
    return out;
  }

  std::size_t dim() const { return ws_.size(); }

 private:
  F field_;
  std::vector<V> ws_;
  std::vector<std::uint8_t> mark_;
  std::vector<Index> touched_;
};

template <Field F>
SparseVec<typename F::value_type> scaled(const F& field, const SparseVec<typename F::value_type>& v,
                                         const typename F::value_type& c) {
  SparseVec<typename F::value_type> out;
  if (field.is_zero(c)) return out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push(v.index[k], field.mul(c, v.value[k]));
  return out;
}

template <Field F>
SparseVec<typename F::value_type> combine(const F& field, const SparseVec<typename F::value_type>& a,
                                          const typename F::value_type& ca,
                                          const SparseVec<typename F::value_type>& b,
                                          const typename F::value_type& cb) {
  SparseVec<typename F::value_type> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a.index[i] < b.index[j])) {
      auto v = field.mul(ca, a.value[i]);
      if (!field.is_zero(v)) out.push(a.index[i], v);
      ++i;
    } else if (i == a.size() || b.index[j] < a.index[i]) {
      auto v = field.mul(cb, b.value[j]);
      if (!field.is_zero(v)) out.push(b.index[j], v);
      ++j;
    } else {
      auto v = field.add(field.mul(ca, a.value[i]), field.mul(cb, b.value[j]));
      if (!field.is_zero(v)) out.push(a.index[i], v);
      ++i;
      ++j;
    }
  }
  return out;
}

/// Counts scalar entry-operations and raises SizeCap once a limit is passed.
class WorkBudget {
 public:
  static constexpr std::uint64_t kDefaultLimit = 100'000'000;

  explicit WorkBudget(std::uint64_t limit = kDefaultLimit) : limit_(limit) {}

  void charge(std::uint64_t ops) {
    used_ += ops;
    if (used_ > limit_)
      throw SizeCap("work budget of " + std::to_string(limit_) + " entry operations exhausted");
  }
  /// Rejects a step whose up-front size estimate already exceeds the limit.
  void check_estimate(std::uint64_t estimate, const char* what) const {
    if (estimate > limit_)
      throw SizeCap(std::string(what) + " needs an estimated " + std::to_string(estimate) +
                    " entry operations, over the budget of " + std::to_string(limit_));
  }
  void reset() { used_ = 0; }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

/// Incrementally built echelon basis of a subspace of F^dim.
///
/// Every stored row has a distinct leading (smallest) index with coefficient
/// one. Inserted vectors may be *tracked* with a column label; a tracked
/// vector that turns out dependent yields the unique relation expressing it
/// through the earlier independent tracked vectors (untracked vectors act as
/// a quotient). With columns inserted in order this is exactly the canonical
/// rref kernel basis.
template <Field F>
class Echelon {
 public:
  using V = typename F::value_type;
  using Vec = SparseVec<V>;

  Echelon(const F& field, std::size_t dim, std::size_t tracked_dim = 0, WorkBudget* budget = nullptr)
      : field_(field),
        dim_(dim),
        pivot_row_(dim, -1),
        ws_(dim, field.zero()),
        mark_(dim, 0),
        expr_(field, tracked_dim == 0 ? 1 : tracked_dim),
        budget_(budget) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }
  Index leading(std::size_t row) const { return rows_[row].index.front(); }
  bool is_pivot(Index i) const { return pivot_row_[i] >= 0; }
  void set_budget(WorkBudget* budget) { budget_ = budget; }

  /// Adds v to the spanned subspace; true if it enlarged the span.
  bool insert(const Vec& v) {
    load(v);
    return !run(false, nullptr).has_value();
  }

  /// Inserts v tagged with `column`. Returns the dependency relation over
  /// tracked columns when v already lies in the span, nullopt otherwise.
  std::optional<Vec> insert_tracked(const Vec& v, Index column) {
    load(v);
    expr_.add(column, field_.one());
    return run(true, nullptr);
  }

  /// Canonical remainder of v: no entry sits on a pivot index.
  Vec reduce(const Vec& v) {
    load(v);
    Vec rem;
    run(false, &rem);
    return rem;
  }

  bool contains(const Vec& v) { return reduce(v).empty(); }

  /// Rows fully reduced against each other, sorted by leading index.
  std::vector<Vec> reduced_rows() {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return leading(a) < leading(b); });
    std::vector<Vec> out(rows_.size());
    for (std::size_t pos = order.size(); pos-- > 0;) {
      const Vec& row = rows_[order[pos]];
      Vec tail;
      tail.index.assign(row.index.begin() + 1, row.index.end());
      tail.value.assign(row.value.begin() + 1, row.value.end());
      Vec red = reduce(tail);
      Vec full;
      full.reserve(red.size() + 1);
      full.push(row.index.front(), field_.one());
      for (std::size_t k = 0; k < red.size(); ++k) full.push(red.index[k], red.value[k]);
      out[pos] = std::move(full);
    }
    return out;
  }

 private:
  void load(const Vec& v) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      Index i = v.index[k];
      ws_[i] = v.value[k];
      if (!mark_[i]) {
        mark_[i] = 1;
        heap_.push_back(i);
        std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
      }
    }
  }

  Index pop() {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    Index i = heap_.back();
    heap_.pop_back();
    mark_[i] = 0;
    return i;
  }

  void scatter(Index j, const V& c, const V& b) {
    ws_[j] = field_.sub_mul(ws_[j], c, b);
    if (!mark_[j]) {
      mark_[j] = 1;
      heap_.push_back(j);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
  }

  // Core elimination. With `remainder` set, performs full reduction into it.
  // Otherwise stops at the first non-pivot leading entry and stores a new row
  // (returning nullopt), or returns the tracked relation when v reduced to 0.
  std::optional<Vec> run(bool tracked, Vec* remainder) {
    std::uint64_t ops = 0;
    while (!heap_.empty()) {
      Index i = pop();
      V x = ws_[i];
      ws_[i] = field_.zero();
      if (field_.is_zero(x)) continue;
      int r = pivot_row_[i];
      if (r < 0) {
        if (remainder) {
          remainder->push(i, x);
          continue;
        }
        // New leading entry: gather the rest in order and store normalized.
        V inv = field_.inv(x);
        Vec row;
        row.push(i, field_.one());
        while (!heap_.empty()) {
          Index j = pop();
          V y = ws_[j];
          ws_[j] = field_.zero();
          if (!field_.is_zero(y)) row.push(j, field_.mul(inv, y));
        }
        pivot_row_[i] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        Vec e = tracked ? expr_.take() : Vec{};
        if (tracked) e = scaled(field_, e, inv);
        exprs_.push_back(std::move(e));
        if (budget_) budget_->charge(ops + rows_.back().size());
        return std::nullopt;
      }
      const Vec& row = rows_[static_cast<std::size_t>(r)];
      for (std::size_t k = 1; k < row.size(); ++k) scatter(row.index[k], x, row.value[k]);
      ops += row.size();
      if (tracked) {
        const Vec& e = exprs_[static_cast<std::size_t>(r)];
        V negx = field_.neg(x);
        expr_.add_scaled(e, negx);
        ops += e.size();
      }
    }
    if (budget_) budget_->charge(ops);
    if (remainder) return std::nullopt;
    if (tracked) return expr_.take();
    return Vec{};  // dependent, untracked
  }

  F field_;
  std::size_t dim_;
  std::vector<Vec> rows_;
  std::vector<Vec> exprs_;
  std::vector<int> pivot_row_;
  std::vector<V> ws_;
  std::vector<std::uint8_t> mark_;
  std::vector<Index> heap_;
  Accumulator<F> expr_;
  WorkBudget* budget_;
};

/// Sparse row-major matrix over a Field.
template <Field F>
class Matrix {
 public:
  using V = typename F::value_type;
  using Vec = SparseVec<V>;

  Matrix(const F& field, std::size_t rows, std::size_t cols) : field_(field), cols_(cols), rows_(rows) {}

  /// Dense construction from integer literals, reduced into the field.
  Matrix(const F& field, std::initializer_list<std::initializer_list<std::int64_t>> entries)
      : field_(field), cols_(entries.size() ? entries.begin()->size() : 0) {
    for (const auto& r : entries) {
      if (r.size() != cols_) throw InvalidArgument("ragged matrix literal");
      Vec row;
      Index c = 0;
      for (std::int64_t x : r) {
        V v = field.from_int(x);
        if (!field.is_zero(v)) row.push(c, v);
        ++c;
      }
      rows_.push_back(std::move(row));
    }
  }

  static Matrix from_rows(const F& field, std::size_t cols, std::vector<Vec> rows) {
    Matrix m(field, 0, cols);
    m.rows_ = std::move(rows);
    return m;
  }
  static Matrix from_columns(const F& field, std::size_t rows, const std::vector<Vec>& columns) {
    Matrix m(field, rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t k = 0; k < columns[c].size(); ++k)
        m.rows_[columns[c].index[k]].push(static_cast<Index>(c), columns[c].value[k]);
    return m;
  }
  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].push(static_cast<Index>(i), field.one());
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const Vec& row(std::size_t r) const { return rows_[r]; }
  V at(std::size_t r, std::size_t c) const { return rows_[r].get(field_, static_cast<Index>(c)); }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  std::vector<Vec> columns() const {
    std::vector<Vec> out(cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t k = 0; k < rows_[r].size(); ++k) out[rows_[r].index[k]].push(static_cast<Index>(r), rows_[r].value[k]);
    return out;
  }

  Matrix transpose() const { return from_rows(field_, rows(), columns()); }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows()) throw InvalidArgument("matrix dimension mismatch");
    Matrix out(field_, rows(), rhs.cols());
    Accumulator<F> acc(field_, rhs.cols() == 0 ? 1 : rhs.cols());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t k = 0; k < rows_[r].size(); ++k) acc.add_scaled(rhs.rows_[rows_[r].index[k]], rows_[r].value[k]);
      out.rows_[r] = acc.take();
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const Vec& r) { return r.empty(); });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.cols_ == b.cols_ && a.rows_ == b.rows_; }

 private:
  F field_;
  std::size_t cols_;
  std::vector<Vec> rows_;
};

template <Field F>
struct RrefResult {
  Matrix<F> matrix;
  std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form; pivot columns strictly increasing, zero rows last.
template <Field F>
RrefResult<F> rref(const Matrix<F>& m) {
  Echelon<F> ech(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
  auto rows = ech.reduced_rows();
  std::vector<std::size_t> pivots;
  for (const auto& r : rows) pivots.push_back(r.index.front());
  rows.resize(m.rows());
  return {Matrix<F>::from_rows(m.field(), m.cols(), std::move(rows)), std::move(pivots)};
}

template <Field F>
std::size_t rank(const Matrix<F>& m) {
  Echelon<F> ech(m.field(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) ech.insert(m.row(r));
  return ech.rank();
}

/// Right null space. Column j of the result is e_f - sum_p rref[p][f] e_p for
/// the j-th free column f.
template <Field F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
  auto cols = m.columns();
  Echelon<F> ech(m.field(), m.rows() == 0 ? 1 : m.rows(), m.cols() == 0 ? 1 : m.cols());
  std::vector<SparseVec<typename F::value_type>> kernel;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    auto rel = ech.insert_tracked(cols[c], static_cast<Index>(c));
    if (rel) kernel.push_back(std::move(*rel));
  }
  return Matrix<F>::from_columns(m.field(), m.cols(), kernel);
}

}  // namespace cangrow
