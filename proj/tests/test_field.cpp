#include <doctest.h>

#include <random>

#include "genbound/field.hpp"

using namespace genbound;

namespace {

// independent irreducibility oracle: trial division by every monic divisor of
// degree <= m/2
bool irreducible_oracle(std::uint64_t p, const std::vector<std::uint32_t>& coeffs) {
  int m = static_cast<int>(coeffs.size());
  if (m == 1) return true;
  std::vector<long long> f(coeffs.begin(), coeffs.end());
  f.push_back(1);
  auto mod_poly = [p](std::vector<long long> a, const std::vector<long long>& b) {
    auto trim = [](std::vector<long long>& v) {
      while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    while (a.size() >= b.size()) {
      long long c = a.back();  // b is monic
      std::size_t sh = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i)
        a[sh + i] = ((a[sh + i] - c * b[i]) % static_cast<long long>(p) +
                     static_cast<long long>(p)) %
                    static_cast<long long>(p);
      trim(a);
    }
    return a;
  };
  for (int d = 1; d <= m / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::vector<long long> g;
      std::uint64_t kk = k;
      for (int i = 0; i < d; ++i) {
        g.push_back(static_cast<long long>(kk % p));
        kk /= p;
      }
      g.push_back(1);
      if (mod_poly(f, g).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> smallest_modulus_oracle(std::uint64_t p, int m) {
  std::uint64_t q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  for (std::uint64_t k = 0; k < q; ++k) {
    std::vector<std::uint32_t> coeffs;
    std::uint64_t kk = k;
    for (int i = 0; i < m; ++i) {
      coeffs.push_back(static_cast<std::uint32_t>(kk % p));
      kk /= p;
    }
    if (irreducible_oracle(p, coeffs)) return coeffs;
  }
  return {};
}

}  // namespace

TEST_CASE("canonical extension moduli match the exhaustive scan") {
  CHECK(Fq::prime(2).modulus() == std::vector<std::uint32_t>{0});            // x
  CHECK(Fq::extension(2, 2).modulus() == std::vector<std::uint32_t>{1, 1});  // x^2+x+1
  CHECK(Fq::extension(3, 2).modulus() == std::vector<std::uint32_t>{1, 0});  // x^2+1
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, int>>{
           {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {5, 3}, {11, 2}}) {
    CAPTURE(p);
    CAPTURE(m);
    CHECK(Fq::extension(p, m).modulus() == smallest_modulus_oracle(p, m));
  }
}

TEST_CASE("extension construction rejects bad inputs") {
  CHECK_THROWS_AS(Fq::prime(4), UsageError);
  CHECK_THROWS_AS(Fq::extension(6, 2), UsageError);
  CHECK_THROWS_AS(Fq::extension(2, 0), UsageError);
  CHECK_THROWS_AS(Fq::extension(2, 9), UsageError);
  // x^2+1 = (x+1)^2 over F_2
  CHECK_THROWS_AS(Fq::extension(2, 2, {1, 0}), UsageError);
}

TEST_CASE("field arithmetic properties on random samples") {
  std::mt19937_64 rng(7);
  // F_{3^7} has 2187 elements, past the lookup-table threshold, so it also
  // exercises the on-the-fly polynomial arithmetic path
  for (const Fq& f : {Fq::prime(7), Fq::extension(2, 3), Fq::extension(3, 2),
                      Fq::extension(5, 3), Fq::extension(2, 8), Fq::extension(3, 7)}) {
    CAPTURE(f.describe());
    for (int t = 0; t < 200; ++t) {
      auto a = rng() % f.q(), b = rng() % f.q(), c = rng() % f.q();
      CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      CHECK(f.frobenius(f.add(a, b)) == f.add(f.frobenius(a), f.frobenius(b)));
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == f.one());
      CHECK(f.add(a, f.neg(a)) == f.zero());
    }
    CHECK_THROWS_AS(f.inv(0), UsageError);
  }
}

TEST_CASE("subfield embeddings are ring homomorphisms") {
  Fq f4 = Fq::extension(2, 2);
  CHECK(f4.q() == 4);
  CHECK(Fq::extension(5, 3).q() == 125);

  Fq f16 = Fq::extension(2, 4);
  Embedding emb(f4, f16);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto a = rng() % 4, b = rng() % 4;
    CHECK(emb(f4.add(a, b)) == f16.add(emb(a), emb(b)));
    CHECK(emb(f4.mul(a, b)) == f16.mul(emb(a), emb(b)));
  }
  CHECK(emb(f4.one()) == f16.one());
  // constants stay constants
  Embedding emb3(Fq::prime(3), Fq::extension(3, 2));
  CHECK(emb3(2) == 2);
  CHECK_THROWS_AS(Embedding(Fq::extension(2, 2), Fq::extension(2, 3)), UsageError);
}

TEST_CASE("rational helpers") {
  CHECK(QQ::parse("3/4") == Rational(3, 4));
  CHECK(QQ::parse("-6/8") == Rational(-3, 4));
  CHECK(QQ::parse("0.25") == Rational(1, 4));
  CHECK(QQ::parse("7") == Rational(7));
  CHECK(QQ::to_string(QQ::parse("-6/8")) == "-3/4");
  CHECK_THROWS_AS(QQ::parse("x"), UsageError);
  CHECK_THROWS_AS(QQ::parse("1/0"), UsageError);
  QQ f;
  CHECK_THROWS_AS(f.inv(Rational(0)), UsageError);
}

TEST_CASE("field specs") {
  FieldSpec s9 = FieldSpec::from_q(9);
  CHECK(s9.p == 3);
  CHECK(s9.m == 2);
  CHECK(FieldSpec::from_q(7).m == 1);
  CHECK_THROWS_AS(FieldSpec::from_q(12), UsageError);
  CHECK(FieldSpec::rational().is_rational());
  CHECK(FieldSpec::extension(2, 2).q() == 4);
}
