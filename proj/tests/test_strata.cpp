#include <doctest.h>

#include "genbound/strata.hpp"

using namespace genbound;

namespace {

Matrix<Fq> mat2(const Fq& f, std::initializer_list<long long> entries, int s) {
  Matrix<Fq> m(s, s);
  int i = 0;
  for (auto e : entries) m.a[static_cast<std::size_t>(i++)] = f.from_int(e);
  return m;
}

}  // namespace

TEST_CASE("common invariant line detection") {
  Budget budget;
  Fq f2 = Fq::prime(2);
  // diagonal idempotents share the line through e_1
  MatTuple diag = {mat2(f2, {1, 0, 0, 0}, 2), mat2(f2, {0, 0, 0, 1}, 2)};
  CHECK(has_common_invariant_subspace(f2, diag, 1, 2, budget));
  // a generating pair has no invariant line over any extension
  MatTuple gen = {mat2(f2, {0, 1, 0, 0}, 2), mat2(f2, {0, 0, 1, 0}, 2)};
  CHECK(!has_common_invariant_subspace(f2, gen, 1, 2, budget));
}

TEST_CASE("an invariant line can live only over the quadratic extension") {
  Budget budget;
  Fq f2 = Fq::prime(2);
  // companion matrix of x^2+x+1 and its square: no eigenline over F_2, a
  // common one over F_4 (verified by hand: a maps (1,0)->(0,1), (0,1)->(1,1),
  // (1,1)->(1,0), so no F_2 line is fixed)
  Matrix<Fq> a = mat2(f2, {0, 1, 1, 1}, 2);
  Matrix<Fq> a2 = mat_mul(f2, a, a);
  MatTuple t = {a, a2};
  CHECK(!has_common_invariant_subspace(f2, t, 1, 1, budget));
  CHECK(has_common_invariant_subspace(f2, t, 1, 2, budget));
}

TEST_CASE("commuting invariant subspace detection") {
  Budget budget;
  Fq f3 = Fq::prime(3);
  // diagonal matrices commute outright
  MatTuple diag = {mat2(f3, {1, 0, 0, 0, 2, 0, 0, 0, 1}, 3),
                   mat2(f3, {2, 0, 0, 0, 1, 0, 0, 0, 1}, 3)};
  CHECK(has_commuting_invariant_subspace(f3, diag, 3, budget));
  // a generating pair admits nothing of the sort
  Fq f2 = Fq::prime(2);
  MatTuple gen = {mat2(f2, {0, 1, 0, 0}, 2), mat2(f2, {0, 0, 1, 0}, 2)};
  CHECK(!has_commuting_invariant_subspace(f2, gen, 2, budget));
}

TEST_CASE("gaussian binomials") {
  CHECK(gaussian_binomial(2, 2, 1) == 3);  // lines in F_2^2
  CHECK(gaussian_binomial(2, 4, 2) == 35);
  CHECK(gaussian_binomial(3, 3, 1) == 13);
  CHECK(gaussian_binomial(5, 3, 2) == 31);
  CHECK(gaussian_binomial(2, 3, 0) == 1);
  CHECK(gaussian_binomial(2, 3, 4) == 0);
}

TEST_CASE("rank stratum counts: frozen values, total, and enumeration") {
  Budget budget;
  // all 16 pairs in (F_2^2)^2: 1 zero pair, 9 spanning a line, 6 spanning the plane
  CHECK(rank_stratum_count(2, 2, 2, 0) == 1);
  CHECK(rank_stratum_count(2, 2, 2, 1) == 9);
  CHECK(rank_stratum_count(2, 2, 2, 2) == 6);

  for (int n : {2, 3})
    for (int r : {2, 3})
      for (std::uint64_t q : {2ULL, 3ULL}) {
        CAPTURE(n);
        CAPTURE(r);
        CAPTURE(q);
        unsigned __int128 total = 0;
        for (int s = 0; s <= n; ++s) total += rank_stratum_count(q, n, r, s);
        unsigned __int128 expect = 1;
        for (int i = 0; i < n * r; ++i) expect *= q;
        CHECK(total == expect);
        Fq f = Fq::prime(q);
        for (int s = 0; s <= n; ++s)
          CHECK(rank_stratum_count(q, n, r, s) ==
                static_cast<unsigned __int128>(rank_stratum_enumerate(f, n, r, s, budget)));
      }
}

TEST_CASE("incidence counts: formula equals enumeration") {
  Budget budget;
  Fq f2 = Fq::prime(2);
  auto c1 = incidence_count(f2, 2, 1, 1, budget);
  CHECK(c1.formula == 24);  // 3 lines x 2^3 fixing tuples
  REQUIRE(c1.enumerated.has_value());
  CHECK(static_cast<unsigned __int128>(*c1.enumerated) == c1.formula);

  auto c2 = incidence_count(f2, 2, 2, 1, budget);
  CHECK(c2.formula == 192);
  REQUIRE(c2.enumerated.has_value());
  CHECK(static_cast<unsigned __int128>(*c2.enumerated) == c2.formula);

  Fq f3 = Fq::prime(3);
  auto c3 = incidence_count(f3, 2, 2, 1, budget);
  REQUIRE(c3.enumerated.has_value());
  CHECK(static_cast<unsigned __int128>(*c3.enumerated) == c3.formula);

  // over budget: the formula still comes back, the enumeration is skipped
  Budget tiny{5};
  auto c4 = incidence_count(f2, 2, 2, 1, tiny);
  CHECK(c4.formula == 192);
  CHECK(!c4.enumerated.has_value());
}

TEST_CASE("slice construction and validation") {
  auto spec = SliceSpec::default_f5(2);
  CHECK(spec.s == 3);
  CHECK_NOTHROW(spec.validate());

  // equal lambdas are rejected
  auto bad = spec;
  bad.lambdas = {1, 1};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  // zero lambda rejected
  bad.lambdas = {0, 2};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  // singular a rejected
  bad = spec;
  bad.a.a = {1, 1, 1, 1};
  CHECK_THROWS_AS(bad.validate(), UsageError);
  // a with a standard basis eigenvector rejected
  bad = spec;
  bad.a.a = {1, 0, 1, 1};  // e_2 is an eigenvector
  CHECK_THROWS_AS(bad.validate(), UsageError);

  auto p = slice_point(spec, {0, 0});
  CHECK(p.size() == 2);
  CHECK(p[0].at(0, 0) == 0);
  CHECK(p[0].at(1, 2) == 1);  // the block of a
  CHECK(p[1].at(1, 1) == 1);
  CHECK(p[1].at(2, 2) == 2);
  auto px = slice_point(spec, {3, 4});
  CHECK(px[1].at(1, 0) == 3);
  CHECK(px[1].at(2, 0) == 4);
  CHECK(px[0] == p[0]);
  CHECK_THROWS_AS(slice_point(spec, {1}), UsageError);
}

TEST_CASE("a commuting-restriction witness implies an invariant plane over a bounded extension") {
  // Members of the commuting stratum either exhibit a proper invariant
  // subspace of dimension >= 2 outright, or commute on the whole space; in
  // the latter case a common triangularization over the splitting field
  // (degree <= 6 for 3x3 pairs) still produces an invariant plane.
  Budget budget;
  Fq f2 = Fq::prime(2);
  std::mt19937_64 rng(23);
  int members = 0;
  for (int t = 0; t < 40; ++t) {
    // commuting by construction: (m, p(m)) for a random matrix m
    Matrix<Fq> m(3, 3);
    for (auto& x : m.a) x = rng() % 2;
    Matrix<Fq> p = mat_mul(f2, m, m);
    if (rng() % 2) {
      for (int i = 0; i < 3; ++i) p.at(i, i) = f2.add(p.at(i, i), 1);  // m^2 + 1
    }
    MatTuple tup = {m, p};
    REQUIRE(has_commuting_invariant_subspace(f2, tup, 3, budget));
    CHECK(has_common_invariant_subspace(f2, tup, 2, 6, budget));
    ++members;
  }
  CHECK(members == 40);
}

TEST_CASE("sampled Burnside equivalence for 3x3 pairs over F_2") {
  // non-generation of a matrix tuple should coincide with membership in some
  // invariant-subspace stratum (i = 1 or 2, extensions up to degree 3)
  Budget budget;
  Fq f2 = Fq::prime(2);
  auto alg = matrix_algebra(f2, 3);
  std::mt19937_64 rng(17);
  int checked = 0;
  auto check_tuple = [&](const Tuple<Fq>& t) {
    bool nongen = !generates(alg, t);
    MatTuple mats = tuple_to_matrices(t, 3);
    bool stratum = has_common_invariant_subspace(f2, mats, 1, 3, budget) ||
                   has_common_invariant_subspace(f2, mats, 2, 3, budget);
    CHECK(nongen == stratum);
    ++checked;
  };
  for (int t = 0; t < 150; ++t) {
    Tuple<Fq> tup(2, Vec<Fq>(9));
    for (auto& v : tup)
      for (auto& x : v) x = rng() % 2;
    check_tuple(tup);
  }
  // force some structured non-generating pairs (both upper triangular)
  for (int t = 0; t < 50; ++t) {
    Tuple<Fq> tup(2, Vec<Fq>(9, 0));
    for (auto& v : tup)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) v[static_cast<std::size_t>(3 * i + j)] = rng() % 2;
    check_tuple(tup);
  }
  CHECK(checked == 200);
}

TEST_CASE("the slice meets the invariant-line stratum in the single point x = 0") {
  Budget budget;
  auto spec = SliceSpec::default_f5(2);
  auto hits = slice_invariant_line_hits(spec, 3, budget);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].x == std::vector<Fq::Elem>{0, 0});
  CHECK(!hits[0].in_commuting_stratum);
}
