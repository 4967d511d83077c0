#include <doctest.h>

#include "genbound/bounds.hpp"

using namespace genbound;
using namespace genbound::bounds;

TEST_CASE("forster bound") {
  CHECK(forster(0, 2) == 2);
  CHECK(forster(7, 3) == 10);
  for (ll d = 0; d <= 20; ++d) {
    CHECK(forster(d, 4) == d + 4);  // rank-n module: d + n
    CHECK(forster(d, 1) == d + 1);  // etale: d + 1
  }
  CHECK_THROWS_AS(forster(-1, 2), UsageError);
}

TEST_CASE("main2 bound") {
  CHECK(main2(0, 9, 7) == 8);          // d = 0: n_max + 1
  CHECK(main2(1, 8, 6) == 7);          // octonions at d = 1
  for (ll d = 0; d <= 30; ++d)
    for (ll s = 2; s <= 6; ++s)
      CHECK(main2(d, s * s, s * s - s + 1) == floor_div(d, s - 1) + s * s - s + 2);
  CHECK_THROWS_AS(main2(3, 4, 4), UsageError);
}

TEST_CASE("azumaya bounds") {
  CHECK(azumaya_upper(5, 3) == 4);
  CHECK(azumaya_upper(0, 2) == 2);
  CHECK(azumaya_lower(5, 3) == 3);  // floor(5/4) + 2
  CHECK(azumaya_lower_s2(2) == 4);  // 2*floor(4/4) + 2
  CHECK(azumaya_lower_s2(0) == 2);
  CHECK_THROWS_AS(azumaya_lower(5, 2), UsageError);
  CHECK_THROWS_AS(azumaya_upper(5, 1), UsageError);
}

TEST_CASE("involution bounds match the displayed cases") {
  CHECK(involution_bound(0, 3, InvKind::Orthogonal) == 1);   // floor(1/3)+1
  CHECK(involution_bound(3, 4, InvKind::Orthogonal) == 2);   // floor(4/4)+1
  CHECK(involution_bound(0, 2, InvKind::Symplectic) == 2);   // d+2 at s=2
  CHECK(involution_bound(4, 6, InvKind::Symplectic) == 2);   // floor(10/9)+1
  CHECK(involution_bound(5, 4, InvKind::Symplectic) == 3);   // floor(8/4)+1
  CHECK(involution_bound(10, 8, InvKind::Symplectic) == 2);  // floor(17/13)+1
  CHECK_THROWS_AS(involution_bound(0, 3, InvKind::Symplectic), UsageError);
}

TEST_CASE("octonion upper bound") {
  CHECK(octonion_upper(0) == 3);
  CHECK(octonion_upper(1) == 4);
  CHECK(octonion_upper(5) == 6);
}

TEST_CASE("main3 lower bound") {
  CHECK(main3_lower(0, 1, 1, 2) == 1);
  for (ll d = 0; d <= 50; ++d) {
    CHECK(main3_lower(d, 9, 8, 4) == floor_div(d + 12, 18) + 1);
    CHECK(main3_lower(d, 9, 8, 4) <= azumaya_upper(d, 3));
  }
}

TEST_CASE("codimension formulas") {
  CHECK(codim_formula({CodimPreset::Matrix, 3}, 4) == 6);
  for (ll r = 1; r <= 10; ++r) CHECK(codim_formula({CodimPreset::Etale, 5}, r) == r);
  CHECK(codim_formula({CodimPreset::Octonion, 8}, 3) == 1);
  CHECK(codim_formula({CodimPreset::Module, 3}, 5) == 3);
  CHECK_THROWS_AS(codim_formula({CodimPreset::Octonion, 8}, 2), UsageError);
  CHECK_THROWS_AS(codim_formula({CodimPreset::Module, 3}, 2), UsageError);
  // the matrix codimension climbs by s-1 >= 1 per extra generator
  for (ll s = 2; s <= 8; ++s)
    for (ll r = 1; r <= 12; ++r) {
      CHECK(codim_formula({CodimPreset::Matrix, s}, r + 1) ==
            codim_formula({CodimPreset::Matrix, s}, r) + (s - 1));
    }
}

TEST_CASE("minimal r exceeding d reproduces the closed-form bounds") {
  CHECK(min_r_for_d(5, {CodimPreset::Matrix, 3}).r == 4);
  for (ll d = 0; d <= 60; ++d) {
    for (ll s = 2; s <= 8; ++s)
      CHECK(min_r_for_d(d, {CodimPreset::Matrix, s}).r == azumaya_upper(d, s));
    for (ll n = 2; n <= 5; ++n) {
      CHECK(min_r_for_d(d, {CodimPreset::Etale, n}).r == d + 1);
      CHECK(min_r_for_d(d, {CodimPreset::Module, n}).r == d + n);
    }
    CHECK(min_r_for_d(d, {CodimPreset::Octonion, 8}).r == octonion_upper(d));
  }
}

TEST_CASE("gen = 2 criterion for low-dimensional rings") {
  CHECK(cor_azumaya_gen2(0, 2));
  CHECK(cor_azumaya_gen2(3, 3));   // 3 > 1 + 3/2
  CHECK(!cor_azumaya_gen2(10, 3));
  CHECK(!cor_azumaya_gen2(4, 3));  // 3 > 3 fails
}

TEST_CASE("consistency grid over d in 0..200, s in 2..10") {
  for (ll d = 0; d <= 200; ++d) {
    for (ll s = 2; s <= 10; ++s) {
      ll up = azumaya_upper(d, s);
      ll low = s == 2 ? azumaya_lower_s2(d) : azumaya_lower(d, s);
      CHECK(low <= up);
      CHECK(main3_lower(d, s * s, s * s - 1, 4) <= up);
      CHECK(up <= forster(d, 2));
      CHECK(main2(d, s * s, s * s - s + 1) >= up);
    }
  }
}

TEST_CASE("dimension sandwich for every preset codimension formula") {
  // with n_max the maximal proper subalgebra dimension, for r > n_max:
  // n_max * r <= r*n - codim <= n_max * r + n_max*(n - n_max)
  auto check_sandwich = [](CodimFormula f, ll n, ll n_max) {
    for (ll r = n_max + 1; r <= n_max + 6; ++r) {
      ll dim_z = r * n - codim_formula(f, r);
      CHECK(n_max * r <= dim_z);
      CHECK(dim_z <= n_max * r + n_max * (n - n_max));
    }
  };
  for (ll s = 2; s <= 5; ++s) check_sandwich({CodimPreset::Matrix, s}, s * s, s * s - s + 1);
  for (ll n = 2; n <= 5; ++n) {
    check_sandwich({CodimPreset::Module, n}, n, n - 1);
    check_sandwich({CodimPreset::Etale, n}, n, n - 1);
  }
  check_sandwich({CodimPreset::Octonion, 8}, 8, 6);
}

TEST_CASE("descriptor evaluation keeps lowers below uppers") {
  for (ll d : {0LL, 1LL, 2LL, 5LL, 17LL, 60LL}) {
    std::vector<BoundQuery> queries;
    for (ll s = 2; s <= 8; ++s) {
      BoundQuery q;
      q.kind = BoundQuery::Kind::Azumaya;
      q.s = s;
      queries.push_back(q);
    }
    BoundQuery oct;
    oct.kind = BoundQuery::Kind::Octonion;
    queries.push_back(oct);
    for (ll n = 2; n <= 5; ++n) {
      BoundQuery mq;
      mq.kind = BoundQuery::Kind::Module;
      mq.n = n;
      queries.push_back(mq);
      BoundQuery eq;
      eq.kind = BoundQuery::Kind::Etale;
      eq.n = n;
      queries.push_back(eq);
    }
    for (const auto& q : queries) {
      auto res = evaluate(q, d);
      CHECK(!res.uppers.empty());
      for (const auto& lo : res.lowers)
        for (const auto& up : res.uppers) {
          CAPTURE(lo.name);
          CAPTURE(up.name);
          CAPTURE(d);
          CHECK(lo.value <= up.value);
        }
    }
  }
  BoundQuery m3;
  m3.kind = BoundQuery::Kind::Main3;
  m3.n = 4;
  m3.dim_g = 3;
  m3.rho = 0;  // rho unknown: must be requested explicitly
  CHECK_THROWS_AS(evaluate(m3, 5), UsageError);
}

TEST_CASE("floor division handles negatives") {
  CHECK(floor_div(-1, 2) == -1);
  CHECK(floor_div(-4, 2) == -2);
  CHECK(floor_div(5, 3) == 1);
  CHECK_THROWS_AS(floor_div(5, 0), UsageError);
}
