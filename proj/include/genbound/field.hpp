#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "genbound/errors.hpp"

namespace genbound {

/// Exact rational scalar. GMP keeps numerator/denominator in lowest terms.
using Rational = mpq_class;

/// The finite field F_{p^m}, p prime, with elements encoded as integer
/// indices in [0, q).  The index of a polynomial element c_0 + c_1 x + ... is
/// sum c_i p^i, so the prime subfield occupies indices 0..p-1 and arithmetic
/// on constants matches plain mod-p arithmetic.
///
/// Instances are immutable after construction and cheap to copy (shared
/// core), so they can be handed to worker threads freely.
class Fq {
 public:
  using Elem = std::uint64_t;

  /// Empty placeholder; every real instance comes from prime()/extension().
  Fq() = default;

  /// F_p for prime p < 2^31.
  static Fq prime(std::uint64_t p);

  /// F_{p^m} with the canonical modulus: the first irreducible monic
  /// x^m + c_{m-1} x^{m-1} + ... + c_0 in the ordering that ranks polynomials
  /// by the integer sum c_i p^i.  Deterministic, so results involving
  /// extension fields are reproducible bit for bit.  Requires 1 <= m <= 8.
  static Fq extension(std::uint64_t p, int m);

  /// F_{p^m} with an explicit modulus (coefficients c_0..c_{m-1} of a monic
  /// polynomial).  The modulus is verified irreducible.
  static Fq extension(std::uint64_t p, int m, std::vector<std::uint32_t> modulus);

  std::uint64_t p() const { return core_->p; }
  int degree() const { return core_->m; }
  std::uint64_t q() const { return core_->q; }
  const std::vector<std::uint32_t>& modulus() const { return core_->modulus; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }

  Elem add(Elem a, Elem b) const {
    const Core& c = *core_;
    if (c.m == 1) {
      Elem s = a + b;
      return s >= c.p ? s - c.p : s;
    }
    if (c.tabled) return c.add_t[a * c.q + b];
    return add_slow(a, b);
  }

  Elem neg(Elem a) const {
    const Core& c = *core_;
    if (c.m == 1) return a == 0 ? 0 : c.p - a;
    if (c.tabled) return c.neg_t[a];
    return neg_slow(a);
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    const Core& c = *core_;
    if (c.m == 1) return (a * b) % c.p;
    if (c.tabled) return c.mul_t[a * c.q + b];
    return mul_slow(a, b);
  }

  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// Reduce an integer mod p; embeds constants into any F_{p^m}.
  Elem from_int(long long v) const {
    long long r = v % static_cast<long long>(core_->p);
    if (r < 0) r += static_cast<long long>(core_->p);
    return static_cast<Elem>(r);
  }

  /// Frobenius x -> x^p.
  Elem frobenius(Elem a) const { return pow(a, core_->p); }

  bool valid(Elem a) const { return a < core_->q; }
  bool operator==(const Fq& o) const {
    return core_ == o.core_ ||
           (core_->p == o.core_->p && core_->m == o.core_->m &&
            core_->modulus == o.core_->modulus);
  }
  bool operator!=(const Fq& o) const { return !(*this == o); }

  /// "F_5" or "F_25 = F_5[x]/(x^2+2)".
  std::string describe() const;

 private:
  struct Core {
    std::uint64_t p = 0;
    int m = 1;
    std::uint64_t q = 0;
    std::vector<std::uint32_t> modulus;  // c_0..c_{m-1}
    bool tabled = false;
    std::vector<std::uint32_t> mul_t, add_t;  // q*q, extension fields only
    std::vector<std::uint32_t> neg_t, inv_t;  // q
  };

  explicit Fq(std::shared_ptr<const Core> core) : core_(std::move(core)) {}
  Elem add_slow(Elem a, Elem b) const;
  Elem neg_slow(Elem a) const;
  Elem mul_slow(Elem a, Elem b) const;

  std::shared_ptr<const Core> core_;
};

/// The canonical embedding F_{p^e} -> F_{p^(e*t)} that sends the source
/// generator to the smallest root of the source modulus in the target field.
class Embedding {
 public:
  Embedding(const Fq& src, const Fq& dst);
  Fq::Elem operator()(Fq::Elem a) const;
  const Fq& src() const { return src_; }
  const Fq& dst() const { return dst_; }

 private:
  Fq src_, dst_;
  std::vector<Fq::Elem> gen_pow_;  // images of 1, x, ..., x^{e-1}
};

/// Returns F_{p^m} with the canonical modulus, memoized so hot loops that
/// repeatedly scan the same extension do not rebuild multiplication tables.
const Fq& cached_extension(std::uint64_t p, int m);

bool is_prime_u64(std::uint64_t n);

/// The rational field Q.  Same scalar interface as Fq so the dense linear
/// algebra and the closure engine instantiate for both.
class QQ {
 public:
  using Elem = Rational;

  Elem zero() const { return Rational(0); }
  Elem one() const { return Rational(1); }
  bool is_zero(const Elem& a) const { return a == 0; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw UsageError("division by zero in Q");
    return 1 / a;
  }
  Elem from_int(long long v) const { return Rational(static_cast<long>(v)); }
  bool operator==(const QQ&) const { return true; }
  bool operator!=(const QQ&) const { return false; }
  std::string describe() const { return "Q"; }

  /// Parses "3", "-4/7", or a decimal string like "0.25" into an exact value.
  static Rational parse(const std::string& s);
  static std::string to_string(const Rational& a);
};

/// Runtime field descriptor used by the CLI and the algebra file format.
struct FieldSpec {
  enum class Kind { Prime, Extension, Rational };
  Kind kind = Kind::Prime;
  std::uint64_t p = 0;
  int m = 1;
  std::vector<std::uint32_t> modulus;  // empty -> canonical smallest modulus

  static FieldSpec prime(std::uint64_t p) { return {Kind::Prime, p, 1, {}}; }
  static FieldSpec extension(std::uint64_t p, int m) {
    return {Kind::Extension, p, m, {}};
  }
  static FieldSpec rational() { return {Kind::Rational, 0, 1, {}}; }

  /// Factors a prime power q = p^m.  UsageError if q is not a prime power.
  static FieldSpec from_q(std::uint64_t q);

  bool is_rational() const { return kind == Kind::Rational; }
  std::uint64_t q() const;
  Fq make_fq() const;
  std::string describe() const;
};

}  // namespace genbound
