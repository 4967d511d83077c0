#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/field.hpp"

namespace genbound {

template <class F>
using Vec = std::vector<typename F::Elem>;

/// Dense row-major matrix over a field F (Fq or QQ).  The field is passed as
/// context to the free functions below rather than stored per entry.
template <class F>
struct Matrix {
  using Elem = typename F::Elem;
  int rows = 0;
  int cols = 0;
  std::vector<Elem> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  Elem& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Elem& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Matrix identity(const F& f, int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

namespace detail {

template <class F>
void check_entries(const F& f, const Matrix<F>& m) {
  if constexpr (requires(const F& ff, typename F::Elem e) { ff.valid(e); }) {
    for (const auto& e : m.a)
      if (!f.valid(e))
        throw UsageError("matrix entry does not belong to " + f.describe());
  }
  (void)f;
  (void)m;
}

}  // namespace detail

template <class F>
Matrix<F> transpose(const Matrix<F>& m) {
  Matrix<F> t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

template <class F>
Matrix<F> mat_mul(const F& f, const Matrix<F>& x, const Matrix<F>& y) {
  if (x.cols != y.rows) throw UsageError("matrix product shape mismatch");
  Matrix<F> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const auto& xik = x.at(i, k);
      if (f.is_zero(xik)) continue;
      for (int j = 0; j < y.cols; ++j)
        z.at(i, j) = f.add(z.at(i, j), f.mul(xik, y.at(k, j)));
    }
  return z;
}

template <class F>
Vec<F> mat_vec(const F& f, const Matrix<F>& m, const Vec<F>& v) {
  if (m.cols != static_cast<int>(v.size())) throw UsageError("matrix/vector shape mismatch");
  Vec<F> out(m.rows, f.zero());
  for (int i = 0; i < m.rows; ++i) {
    typename F::Elem acc = f.zero();
    for (int j = 0; j < m.cols; ++j) acc = f.add(acc, f.mul(m.at(i, j), v[j]));
    out[i] = acc;
  }
  return out;
}

template <class F>
struct RowReduceResult {
  Matrix<F> rref;
  int rank = 0;
  std::vector<int> pivots;
};

/// Reduced row echelon form by Gauss-Jordan elimination.  Exact over both
/// finite fields and Q; the RREF is the unique canonical representative, so
/// two matrices have equal row space iff their RREFs are equal.
template <class F>
RowReduceResult<F> row_reduce(const F& f, Matrix<F> m) {
  detail::check_entries(f, m);
  RowReduceResult<F> out;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (!f.is_zero(m.at(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    typename F::Elem scale = f.inv(m.at(r, c));
    for (int j = c; j < m.cols; ++j) m.at(r, j) = f.mul(scale, m.at(r, j));
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      const typename F::Elem coef = m.at(i, c);
      if (f.is_zero(coef)) continue;
      for (int j = c; j < m.cols; ++j)
        m.at(i, j) = f.sub(m.at(i, j), f.mul(coef, m.at(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.rref = std::move(m);
  return out;
}

/// A linear subspace of F^n held as a canonical reduced row echelon basis.
/// Supports incremental span growth; equality is literal comparison of the
/// canonical bases.
template <class F>
class Span {
 public:
  using Elem = typename F::Elem;

  Span() = default;
  explicit Span(int ambient) : n_(ambient) {}

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec<F>>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }

  /// Inserts v into the span.  Returns true iff the dimension grew.
  bool insert(const F& f, const Vec<F>& v) {
    if (static_cast<int>(v.size()) != n_)
      throw UsageError("vector dimension does not match ambient space");
    Vec<F> w = v;
    reduce(f, w);
    int lead = -1;
    for (int j = 0; j < n_; ++j)
      if (!f.is_zero(w[j])) {
        lead = j;
        break;
      }
    if (lead < 0) return false;
    Elem scale = f.inv(w[lead]);
    for (int j = lead; j < n_; ++j) w[j] = f.mul(scale, w[j]);
    // eliminate the new pivot from existing rows to stay fully reduced
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Elem coef = rows_[i][lead];
      if (f.is_zero(coef)) continue;
      for (int j = lead; j < n_; ++j)
        rows_[i][j] = f.sub(rows_[i][j], f.mul(coef, w[j]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, lead);
    rows_.insert(rows_.begin() + pos, std::move(w));
    return true;
  }

  bool contains(const F& f, const Vec<F>& v) const {
    if (static_cast<int>(v.size()) != n_)
      throw UsageError("vector dimension does not match ambient space");
    Vec<F> w = v;
    reduce(f, w);
    for (const auto& x : w)
      if (!f.is_zero(x)) return false;
    return true;
  }

  Matrix<F> basis_matrix() const {
    Matrix<F> m(dim(), n_);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < n_; ++j) m.at(i, j) = rows_[i][j];
    return m;
  }

  bool operator==(const Span& o) const {
    return n_ == o.n_ && pivots_ == o.pivots_ && rows_ == o.rows_;
  }

 private:
  void reduce(const F& f, Vec<F>& w) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Elem coef = w[pivots_[i]];
      if (f.is_zero(coef)) continue;
      for (int j = pivots_[i]; j < n_; ++j)
        w[j] = f.sub(w[j], f.mul(coef, rows_[i][j]));
    }
  }

  int n_ = 0;
  std::vector<Vec<F>> rows_;
  std::vector<int> pivots_;
};

/// Functional span insertion: returns the grown span and whether v was new.
template <class F>
std::pair<Span<F>, bool> span_insert(const F& f, const Span<F>& basis, const Vec<F>& v) {
  Span<F> out = basis;
  bool grew = out.insert(f, v);
  return {std::move(out), grew};
}

}  // namespace genbound
