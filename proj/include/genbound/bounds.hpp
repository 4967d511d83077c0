#pragma once

#include <string>
#include <vector>

#include "genbound/errors.hpp"

namespace genbound::bounds {

using ll = long long;

/// floor(a/b) for b > 0, correct for negative a.
ll floor_div(ll a, ll b);

/// Generalized Forster bound: d + gen_k(A).
ll forster(ll d, ll gen_k);

/// floor(d/(n - n_max)) + n_max + 1, from the maximal proper subalgebra
/// dimension n_max < n.
ll main2(ll d, ll n, ll n_max);

/// Upper bound for degree-s Azumaya algebras: floor(d/(s-1)) + 2, s >= 2.
ll azumaya_upper(ll d, ll s);

/// Lower bound for degree-s Azumaya algebras, s >= 3 (characteristic 0):
/// floor(d/(2(s-1))) + 2.  s = 2 is handled by azumaya_lower_s2.
ll azumaya_lower(ll d, ll s);

/// Degree-2 (quaternion) lower bound: 2*floor((d+2)/4) + 2.
ll azumaya_lower_s2(ll d);

enum class InvKind { Orthogonal, Symplectic };

/// Upper bounds for Azumaya algebras with involution:
///   orthogonal: floor((d+s-2)/(2s-3)) + 1, except floor((d+1)/4) + 1 at s=4;
///   symplectic (even s): floor((d+s-1)/(2s-3)) + 1 for s >= 8,
///     floor((d+6)/9) + 1 at s=6, floor((d+3)/4) + 1 at s=4, d+2 at s=2.
ll involution_bound(ll d, ll s, InvKind kind);

/// Upper bound for octonion algebras: floor((d+1)/2) + 3.
ll octonion_upper(ll d);

/// Lower bound floor((d + 2 dim G - rho)/(2n)) + 1 from the automorphism
/// group G = Aut(A); valid when G is not unipotent (characteristic 0), with
/// rho = 4 when the reductive quotient H has dim H > 0 and rho = 2 when its
/// centre has positive dimension.
ll main3_lower(ll d, ll n, ll dim_g, ll rho);

enum class CodimPreset { Matrix, Module, Etale, Octonion };

struct CodimFormula {
  CodimPreset kind;
  ll param = 0;  // matrix size s, or rank n (ignored for octonion)
};

/// Smallest r for which the codimension formula is valid:
/// matrix/etale: 1, module(n): n, octonion: 3.
ll min_valid_r(const CodimFormula& f);

/// Codimension of the non-generating locus in the r-fold product:
/// matrix(s): (r-1)(s-1); module(n): r-n+1; etale(n): r; octonion: 2r-5.
ll codim_formula(const CodimFormula& f, ll r);

struct MinRResult {
  ll r = 0;  // minimal r with codim > d; gen <= r follows
};

/// Minimal r with codim_formula(f, r) > d, by increasing scan from the
/// formula's first valid r.
MinRResult min_r_for_d(ll d, const CodimFormula& f);

/// True iff s > 1 + d/2, in which case every degree-s Azumaya algebra over a
/// d-dimensional finite-type ring is generated by exactly 2 elements.
bool cor_azumaya_gen2(ll d, ll s);

struct NamedBound {
  std::string name;
  ll value = 0;
  std::string note;  // applicability hypotheses, empty when unconditional
};

struct BoundQuery {
  enum class Kind { Generic, Azumaya, Involution, Octonion, Module, Etale, Main3 };
  Kind kind = Kind::Azumaya;
  ll n = 0, n_max = 0, gen_k = 0;  // generic
  ll s = 0;                        // azumaya / involution
  InvKind inv_kind = InvKind::Orthogonal;
  ll dim_g = 0, rho = 0;  // main3
};

struct BoundResult {
  std::vector<NamedBound> uppers;
  std::vector<NamedBound> lowers;
};

/// All applicable upper and lower bounds for the descriptor at dimension d.
/// Bounds whose hypotheses (infinite k, characteristic 0, non-unipotent
/// automorphism group) are not decidable from the descriptor carry them as
/// notes rather than being suppressed.
BoundResult evaluate(const BoundQuery& query, ll d);

}  // namespace genbound::bounds
