#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/field.hpp"
#include "genbound/generation.hpp"
#include "genbound/matrix.hpp"

namespace genbound {

/// r-tuple of s x s matrices over a finite field.
using MatTuple = std::vector<Matrix<Fq>>;

std::string u128_str(unsigned __int128 v);

/// Converts between coordinate vectors of length s^2 (row-major) and square
/// matrices.
Matrix<Fq> vec_to_matrix(const Vec<Fq>& v, int s);
Vec<Fq> matrix_to_vec(const Matrix<Fq>& m);
MatTuple tuple_to_matrices(const Tuple<Fq>& t, int s);

/// Membership test for the Burnside stratum of tuples sharing a common
/// i-dimensional invariant subspace.  Invariant subspaces defined over the
/// algebraic closure are approximated by scanning the extensions F_{q^m},
/// m <= max_ext_degree (pass 0 to default to s, which covers every eigenline
/// case exercised here).
bool has_common_invariant_subspace(const Fq& f, const MatTuple& mats, int i,
                                   int max_ext_degree, const Budget& budget);

/// Membership test for the locus of tuples admitting an invariant subspace W
/// of dimension >= 2 on which all the matrices commute pairwise (the whole
/// space counts, so pairwise-commuting tuples are always members).
bool has_commuting_invariant_subspace(const Fq& f, const MatTuple& mats,
                                      int max_ext_degree, const Budget& budget);

/// Number of k-dimensional subspaces of F_q^n (declared in generation.hpp,
/// defined alongside the other counting helpers here).

/// Number of r-tuples of vectors in F_q^n spanning exactly an s-dimensional
/// subspace: (n choose s)_q times the number of full-row-rank s x r matrices.
unsigned __int128 rank_stratum_count(std::uint64_t q, int n, int r, int s);

/// Brute-force cross-check of rank_stratum_count for tiny parameters.
std::uint64_t rank_stratum_enumerate(const Fq& f, int n, int r, int s, const Budget& budget);

struct IncidenceCount {
  unsigned __int128 formula = 0;
  std::optional<std::uint64_t> enumerated;  // absent if over budget
};

/// Number of incident pairs (tuple, W) with W an i-dimensional subspace
/// invariant under every matrix of the tuple.  The fibre over each W is an
/// affine space of dimension r(s^2 - i(s-i)), so the closed form is
/// (s choose i)_q * q^{r(s^2-i(s-i))}; the direct enumeration cross-check
/// runs when it fits the budget.
IncidenceCount incidence_count(const Fq& f, int s, int r, int i, const Budget& budget);

/// An affine slice of r-tuples of s x s matrices pinned so that it meets the
/// invariant-line stratum in a single point: the first matrix is diag(0, a)
/// with a invertible and no standard basis eigenvector, the others are
/// diag(0, lambda_2, ..., lambda_s) plus arbitrary entries in the first
/// column below the corner.
struct SliceSpec {
  Fq field;
  int s = 0;
  int r = 0;
  Matrix<Fq> a;               // (s-1) x (s-1)
  std::vector<Fq::Elem> lambdas;  // s-1 distinct nonzero values

  /// Throws UsageError unless a is invertible, no standard basis vector of
  /// F^{s-1} is an eigenvector of a, and the lambdas are distinct and nonzero.
  void validate() const;

  /// The default slice over F_5 for s = 3: a = [[0,1],[1,1]], lambdas = (1,2).
  static SliceSpec default_f5(int r);
};

/// Assembles the tuple at coordinates x (length (r-1)(s-1), listing the
/// first-column entries of matrices 2..r).
MatTuple slice_point(const SliceSpec& spec, const std::vector<Fq::Elem>& x);

struct SliceHit {
  std::vector<Fq::Elem> x;
  bool in_commuting_stratum = false;
};

/// Enumerates all q^{(r-1)(s-1)} slice points, returning those with a common
/// invariant line over an extension of degree <= max_ext_degree; each hit is
/// also tested against the commuting-subspace stratum.
std::vector<SliceHit> slice_invariant_line_hits(const SliceSpec& spec, int max_ext_degree,
                                                const Budget& budget);

}  // namespace genbound
