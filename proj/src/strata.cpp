#include "genbound/strata.hpp"

#include <algorithm>

namespace genbound {

std::string u128_str(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned __int128 gaussian_binomial(std::uint64_t q, int n, int k) {
  if (k < 0 || k > n) return 0;
  // prod_{i=0}^{k-1} (q^{n-i} - 1) / (q^{k-i} - 1), computed exactly by
  // cancelling one factor at a time (each partial quotient is integral).
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    unsigned __int128 qa = 1, qb = 1;
    for (int t = 0; t < n - i; ++t) qa *= q;
    for (int t = 0; t < k - i; ++t) qb *= q;
    num *= qa - 1;
    den *= qb - 1;
    if (den != 0 && num % den == 0) {
      num /= den;
      den = 1;
    }
  }
  return num / den;
}

Matrix<Fq> vec_to_matrix(const Vec<Fq>& v, int s) {
  if (static_cast<int>(v.size()) != s * s) throw UsageError("vector is not an s x s matrix");
  Matrix<Fq> m(s, s);
  m.a = v;
  return m;
}

Vec<Fq> matrix_to_vec(const Matrix<Fq>& m) { return m.a; }

MatTuple tuple_to_matrices(const Tuple<Fq>& t, int s) {
  MatTuple out;
  out.reserve(t.size());
  for (const auto& v : t) out.push_back(vec_to_matrix(v, s));
  return out;
}

namespace {

MatTuple embed_matrices(const Fq& src, const Fq& dst, const MatTuple& mats) {
  if (src == dst) return mats;
  Embedding emb(src, dst);
  MatTuple out;
  out.reserve(mats.size());
  for (const auto& m : mats) {
    Matrix<Fq> e(m.rows, m.cols);
    for (std::size_t k = 0; k < m.a.size(); ++k) e.a[k] = emb(m.a[k]);
    out.push_back(std::move(e));
  }
  return out;
}

bool subspace_invariant(const Fq& f, const Matrix<Fq>& m, const Span<Fq>& sp) {
  for (const auto& row : sp.rows()) {
    if (!sp.contains(f, mat_vec(f, m, row))) return false;
  }
  return true;
}

/// Matrix of m restricted to sp in the RREF basis; nullopt if not invariant.
std::optional<Matrix<Fq>> restriction_matrix(const Fq& f, const Matrix<Fq>& m,
                                             const Span<Fq>& sp) {
  int d = sp.dim();
  Matrix<Fq> out(d, d);
  const auto& pivots = sp.pivots();
  for (int j = 0; j < d; ++j) {
    Vec<Fq> w = mat_vec(f, m, sp.rows()[static_cast<std::size_t>(j)]);
    // coefficients read off at the pivot columns, then verify exactness
    Vec<Fq> residue = w;
    for (int t = 0; t < d; ++t) {
      Fq::Elem c = w[static_cast<std::size_t>(pivots[static_cast<std::size_t>(t)])];
      out.at(t, j) = c;
      if (!f.is_zero(c))
        for (int col = 0; col < sp.ambient(); ++col)
          residue[static_cast<std::size_t>(col)] =
              f.sub(residue[static_cast<std::size_t>(col)],
                    f.mul(c, sp.rows()[static_cast<std::size_t>(t)][static_cast<std::size_t>(col)]));
    }
    for (const auto& x : residue)
      if (!f.is_zero(x)) return std::nullopt;
  }
  return out;
}

std::uint64_t subspace_scan_cost(std::uint64_t q, int s, int i, int max_ext) {
  unsigned __int128 cost = 0;
  std::uint64_t qm = 1;
  for (int m = 1; m <= max_ext; ++m) {
    qm *= q;
    cost += gaussian_binomial(qm, s, i);
  }
  return cost > static_cast<unsigned __int128>(UINT64_MAX) ? UINT64_MAX
                                                           : static_cast<std::uint64_t>(cost);
}

}  // namespace

bool has_common_invariant_subspace(const Fq& f, const MatTuple& mats, int i,
                                   int max_ext_degree, const Budget& budget) {
  if (mats.empty()) throw UsageError("empty matrix tuple");
  int s = mats[0].rows;
  for (const auto& m : mats)
    if (m.rows != s || m.cols != s) throw UsageError("tuple matrices must share one square size");
  if (i < 1 || i > s - 1) throw UsageError("invariant dimension i must satisfy 1 <= i <= s-1");
  if (max_ext_degree <= 0) max_ext_degree = s;
  budget.require(subspace_scan_cost(f.q(), s, i, max_ext_degree));

  for (int m = 1; m <= max_ext_degree; ++m) {
    const Fq& big = cached_extension(f.p(), f.degree() * m);
    MatTuple ms = embed_matrices(f, big, mats);
    bool found = !detail::for_each_subspace(big, s, i, [&](const Span<Fq>& sp) {
      for (const auto& mat : ms)
        if (!subspace_invariant(big, mat, sp)) return true;  // keep scanning
      return false;                                          // found one
    });
    if (found) return true;
  }
  return false;
}

bool has_commuting_invariant_subspace(const Fq& f, const MatTuple& mats,
                                      int max_ext_degree, const Budget& budget) {
  if (mats.empty()) throw UsageError("empty matrix tuple");
  int s = mats[0].rows;
  for (const auto& m : mats)
    if (m.rows != s || m.cols != s) throw UsageError("tuple matrices must share one square size");
  if (max_ext_degree <= 0) max_ext_degree = s;

  // W = F^s: pairwise commutation of the matrices themselves
  bool commute = true;
  for (std::size_t a = 0; a < mats.size() && commute; ++a)
    for (std::size_t b = a + 1; b < mats.size() && commute; ++b)
      if (mat_mul(f, mats[a], mats[b]) != mat_mul(f, mats[b], mats[a])) commute = false;
  if (commute) return true;

  std::uint64_t cost = 0;
  for (int d = 2; d < s; ++d) cost += subspace_scan_cost(f.q(), s, d, max_ext_degree);
  budget.require(cost);

  for (int m = 1; m <= max_ext_degree; ++m) {
    const Fq& big = cached_extension(f.p(), f.degree() * m);
    MatTuple ms = embed_matrices(f, big, mats);
    for (int d = 2; d < s; ++d) {
      bool found = !detail::for_each_subspace(big, s, d, [&](const Span<Fq>& sp) {
        std::vector<Matrix<Fq>> restr;
        for (const auto& mat : ms) {
          auto rm = restriction_matrix(big, mat, sp);
          if (!rm) return true;
          restr.push_back(std::move(*rm));
        }
        for (std::size_t a = 0; a < restr.size(); ++a)
          for (std::size_t b = a + 1; b < restr.size(); ++b)
            if (mat_mul(big, restr[a], restr[b]) != mat_mul(big, restr[b], restr[a])) return true;
        return false;
      });
      if (found) return true;
    }
  }
  return false;
}

unsigned __int128 rank_stratum_count(std::uint64_t q, int n, int r, int s) {
  if (s < 0 || s > n) return 0;
  // full-row-rank s x r matrices: prod_{i=0}^{s-1} (q^r - q^i); zero when r < s
  unsigned __int128 spanning = 1;
  unsigned __int128 qr = 1;
  for (int t = 0; t < r; ++t) qr *= q;
  unsigned __int128 qi = 1;
  for (int i = 0; i < s; ++i) {
    if (qi > qr) return 0;
    spanning *= qr - qi;
    qi *= q;
  }
  return gaussian_binomial(q, n, s) * spanning;
}

std::uint64_t rank_stratum_enumerate(const Fq& f, int n, int r, int s, const Budget& budget) {
  std::uint64_t total = checked_total(f.q(), n * r);
  budget.require(total);
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Tuple<Fq> t = decode_tuple(f.q(), r, n, idx);
    Span<Fq> sp(n);
    for (const auto& v : t) sp.insert(f, v);
    if (sp.dim() == s) ++count;
  }
  return count;
}

IncidenceCount incidence_count(const Fq& f, int s, int r, int i, const Budget& budget) {
  if (i < 1 || i > s - 1) throw UsageError("invariant dimension i must satisfy 1 <= i <= s-1");
  IncidenceCount out;
  unsigned __int128 fibre = 1;
  for (int t = 0; t < r * (s * s - i * (s - i)); ++t) fibre *= f.q();
  out.formula = gaussian_binomial(f.q(), s, i) * fibre;

  unsigned __int128 enum_cost = gaussian_binomial(f.q(), s, i);
  std::uint64_t tuples = 1;
  bool overflow = false;
  for (int t = 0; t < r * s * s; ++t) {
    if (tuples > UINT64_MAX / f.q()) {
      overflow = true;
      break;
    }
    tuples *= f.q();
  }
  if (!overflow) enum_cost *= tuples;
  if (!overflow && enum_cost <= budget.limit) {
    std::uint64_t count = 0;
    for (std::uint64_t idx = 0; idx < tuples; ++idx) {
      MatTuple mats = tuple_to_matrices(decode_tuple(f.q(), r, s * s, idx), s);
      detail::for_each_subspace(f, s, i, [&](const Span<Fq>& sp) {
        bool inv = true;
        for (const auto& m : mats)
          if (!subspace_invariant(f, m, sp)) {
            inv = false;
            break;
          }
        if (inv) ++count;
        return true;
      });
    }
    out.enumerated = count;
  }
  return out;
}

void SliceSpec::validate() const {
  if (s < 3) throw UsageError("slice requires s >= 3");
  if (r < 2) throw UsageError("slice requires r >= 2");
  if (a.rows != s - 1 || a.cols != s - 1) throw UsageError("a must be (s-1) x (s-1)");
  if (static_cast<int>(lambdas.size()) != s - 1) throw UsageError("need s-1 lambda values");
  if (row_reduce(field, a).rank != s - 1) throw UsageError("a must be invertible");
  for (int j = 0; j < s - 1; ++j) {
    // e_j is an eigenvector iff a e_j is supported only on coordinate j
    bool proportional = true;
    for (int i = 0; i < s - 1; ++i)
      if (i != j && !field.is_zero(a.at(i, j))) proportional = false;
    if (proportional) throw UsageError("a has a standard basis eigenvector");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (field.is_zero(lambdas[i])) throw UsageError("lambdas must be nonzero");
    for (std::size_t j = i + 1; j < lambdas.size(); ++j)
      if (lambdas[i] == lambdas[j]) throw UsageError("lambdas must be pairwise distinct");
  }
}

SliceSpec SliceSpec::default_f5(int r) {
  SliceSpec spec;
  spec.field = Fq::prime(5);
  spec.s = 3;
  spec.r = r;
  spec.a = Matrix<Fq>(2, 2);
  spec.a.at(0, 0) = 0;
  spec.a.at(0, 1) = 1;
  spec.a.at(1, 0) = 1;
  spec.a.at(1, 1) = 1;
  spec.lambdas = {1, 2};
  spec.validate();
  return spec;
}

MatTuple slice_point(const SliceSpec& spec, const std::vector<Fq::Elem>& x) {
  spec.validate();
  int s = spec.s, r = spec.r;
  if (static_cast<int>(x.size()) != (r - 1) * (s - 1))
    throw UsageError("x must list (r-1)(s-1) values");
  MatTuple mats;
  Matrix<Fq> m1(s, s);
  for (int i = 0; i < s - 1; ++i)
    for (int j = 0; j < s - 1; ++j) m1.at(i + 1, j + 1) = spec.a.at(i, j);
  mats.push_back(std::move(m1));
  for (int k = 1; k < r; ++k) {
    Matrix<Fq> m(s, s);
    for (int i = 0; i < s - 1; ++i) {
      m.at(i + 1, 0) = x[static_cast<std::size_t>((k - 1) * (s - 1) + i)];
      m.at(i + 1, i + 1) = spec.lambdas[static_cast<std::size_t>(i)];
    }
    mats.push_back(std::move(m));
  }
  return mats;
}

std::vector<SliceHit> slice_invariant_line_hits(const SliceSpec& spec, int max_ext_degree,
                                                const Budget& budget) {
  spec.validate();
  const Fq& f = spec.field;
  if (max_ext_degree <= 0) max_ext_degree = spec.s;
  std::uint64_t points = checked_total(f.q(), (spec.r - 1) * (spec.s - 1));
  unsigned __int128 cost = static_cast<unsigned __int128>(points) *
                           subspace_scan_cost(f.q(), spec.s, 1, max_ext_degree);
  budget.require(cost > static_cast<unsigned __int128>(UINT64_MAX)
                     ? UINT64_MAX
                     : static_cast<std::uint64_t>(cost));

  std::vector<SliceHit> hits;
  int xlen = (spec.r - 1) * (spec.s - 1);
  for (std::uint64_t idx = 0; idx < points; ++idx) {
    std::vector<Fq::Elem> x(static_cast<std::size_t>(xlen));
    std::uint64_t ii = idx;
    for (int k = 0; k < xlen; ++k) {
      x[static_cast<std::size_t>(k)] = ii % f.q();
      ii /= f.q();
    }
    MatTuple mats = slice_point(spec, x);
    if (has_common_invariant_subspace(f, mats, 1, max_ext_degree, budget)) {
      SliceHit hit;
      hit.x = std::move(x);
      hit.in_commuting_stratum =
          has_commuting_invariant_subspace(f, mats, max_ext_degree, budget);
      hits.push_back(std::move(hit));
    }
  }
  return hits;
}

}  // namespace genbound
