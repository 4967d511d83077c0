#include "genbound/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace genbound {

namespace {

constexpr std::uint64_t kMaxQ = 1ULL << 40;     // packed-index representation limit
constexpr std::uint64_t kTableLimit = 1024;     // build q*q tables below this

// ---- polynomial arithmetic over F_p (dense coefficient vectors, low first) ----

using Poly = std::vector<std::uint64_t>;

void poly_trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f, f monic
Poly poly_mod(Poly a, const Poly& f, std::uint64_t p) {
  poly_trim(a);
  while (a.size() >= f.size()) {
    std::uint64_t c = a.back();
    std::size_t sh = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::uint64_t sub = (c * f[i]) % p;
      a[sh + i] = (a[sh + i] + p - sub) % p;
    }
    poly_trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(prod), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result{1};
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // make b monic before reducing
    std::uint64_t lead = b.back();
    if (lead != 1) {
      // lead^{-1} mod p via Fermat
      std::uint64_t inv = 1, x = lead, e = p - 2;
      while (e) {
        if (e & 1) inv = (inv * x) % p;
        x = (x * x) % p;
        e >>= 1;
      }
      for (auto& c : b) c = (c * inv) % p;
    }
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin's test: f monic of degree m is irreducible over F_p iff
// x^{p^m} == x (mod f) and gcd(x^{p^(m/l)} - x, f) = 1 for every prime l | m.
bool poly_irreducible(const std::vector<std::uint32_t>& coeffs, std::uint64_t p) {
  int m = static_cast<int>(coeffs.size());
  if (m == 1) return true;
  Poly f(coeffs.begin(), coeffs.end());
  f.push_back(1);

  std::vector<int> prime_divs;
  int mm = m;
  for (int d = 2; d * d <= mm; ++d)
    if (mm % d == 0) {
      prime_divs.push_back(d);
      while (mm % d == 0) mm /= d;
    }
  if (mm > 1) prime_divs.push_back(mm);

  Poly x{0, 1};
  Poly y = x;  // y = x^{p^k} after k rounds
  for (int k = 1; k <= m; ++k) {
    y = poly_powmod(y, p, f, p);
    for (int l : prime_divs) {
      if (k == m / l) {
        Poly diff = y;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        Poly g = poly_gcd(f, diff, p);
        if (g.size() != 1) return false;
      }
    }
  }
  Poly diff = y;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  poly_trim(diff);
  return diff.empty();
}

std::uint64_t checked_pow(std::uint64_t base, int e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > cap / base) throw UsageError("field too large for packed representation");
    r *= base;
  }
  return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Fq Fq::prime(std::uint64_t p) {
  if (p >= (1ULL << 31) || !is_prime_u64(p)) throw UsageError("p must be a prime < 2^31");
  auto core = std::make_shared<Core>();
  core->p = p;
  core->m = 1;
  core->q = p;
  core->modulus = {0};  // x
  return Fq(std::move(core));
}

Fq Fq::extension(std::uint64_t p, int m) {
  if (p >= (1ULL << 31) || !is_prime_u64(p)) throw UsageError("p must be a prime < 2^31");
  if (m < 1 || m > 8) throw UsageError("extension degree must be in 1..8");
  std::uint64_t q = checked_pow(p, m, kMaxQ);
  // canonical modulus: first irreducible in index order
  for (std::uint64_t k = 0; k < q; ++k) {
    std::vector<std::uint32_t> coeffs(m);
    std::uint64_t kk = k;
    for (int j = 0; j < m; ++j) {
      coeffs[j] = static_cast<std::uint32_t>(kk % p);
      kk /= p;
    }
    if (poly_irreducible(coeffs, p)) return extension(p, m, std::move(coeffs));
  }
  throw UsageError("no irreducible modulus found");  // unreachable
}

Fq Fq::extension(std::uint64_t p, int m, std::vector<std::uint32_t> modulus) {
  if (p >= (1ULL << 31) || !is_prime_u64(p)) throw UsageError("p must be a prime < 2^31");
  if (m < 1 || m > 8) throw UsageError("extension degree must be in 1..8");
  if (static_cast<int>(modulus.size()) != m)
    throw UsageError("modulus must list m coefficients c_0..c_{m-1}");
  for (auto c : modulus)
    if (c >= p) throw UsageError("modulus coefficient not reduced mod p");
  if (!poly_irreducible(modulus, p)) throw UsageError("modulus is reducible over F_p");

  auto core = std::make_shared<Core>();
  core->p = p;
  core->m = m;
  core->q = checked_pow(p, m, kMaxQ);
  core->modulus = std::move(modulus);
  Fq f(core);

  if (m > 1 && core->q <= kTableLimit) {
    auto mut = std::const_pointer_cast<Core>(core);
    std::uint64_t q = core->q;
    mut->mul_t.resize(q * q);
    mut->add_t.resize(q * q);
    mut->neg_t.resize(q);
    mut->inv_t.assign(q, 0);
    for (std::uint64_t a = 0; a < q; ++a) {
      mut->neg_t[a] = static_cast<std::uint32_t>(f.neg_slow(a));
      for (std::uint64_t b = 0; b < q; ++b) {
        mut->add_t[a * q + b] = static_cast<std::uint32_t>(f.add_slow(a, b));
        std::uint64_t prod = f.mul_slow(a, b);
        mut->mul_t[a * q + b] = static_cast<std::uint32_t>(prod);
        if (prod == 1) mut->inv_t[a] = static_cast<std::uint32_t>(b);
      }
    }
    mut->tabled = true;
  }
  return f;
}

Fq::Elem Fq::add_slow(Elem a, Elem b) const {
  const Core& c = *core_;
  Elem out = 0, mult = 1;
  for (int i = 0; i < c.m; ++i) {
    std::uint64_t d = (a % c.p + b % c.p) % c.p;
    out += d * mult;
    mult *= c.p;
    a /= c.p;
    b /= c.p;
  }
  return out;
}

Fq::Elem Fq::neg_slow(Elem a) const {
  const Core& c = *core_;
  Elem out = 0, mult = 1;
  for (int i = 0; i < c.m; ++i) {
    std::uint64_t d = a % c.p;
    out += (d == 0 ? 0 : c.p - d) * mult;
    mult *= c.p;
    a /= c.p;
  }
  return out;
}

Fq::Elem Fq::mul_slow(Elem a, Elem b) const {
  const Core& c = *core_;
  std::uint64_t da[8], db[8], prod[15] = {0};
  for (int i = 0; i < c.m; ++i) {
    da[i] = a % c.p;
    a /= c.p;
    db[i] = b % c.p;
    b /= c.p;
  }
  for (int i = 0; i < c.m; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; j < c.m; ++j)
      prod[i + j] = (prod[i + j] + da[i] * db[j]) % c.p;
  }
  for (int deg = 2 * c.m - 2; deg >= c.m; --deg) {
    std::uint64_t coef = prod[deg];
    if (coef == 0) continue;
    prod[deg] = 0;
    for (int i = 0; i < c.m; ++i) {
      std::uint64_t sub = (coef * c.modulus[i]) % c.p;
      prod[deg - c.m + i] = (prod[deg - c.m + i] + c.p - sub) % c.p;
    }
  }
  Elem out = 0;
  for (int i = c.m - 1; i >= 0; --i) out = out * c.p + prod[i];
  return out;
}

Fq::Elem Fq::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Fq::Elem Fq::inv(Elem a) const {
  if (a == 0) throw UsageError("division by zero in " + describe());
  const Core& c = *core_;
  if (c.m == 1) {
    // extended Euclid in Z
    long long t = 0, newt = 1;
    long long r = static_cast<long long>(c.p), newr = static_cast<long long>(a);
    while (newr != 0) {
      long long quot = r / newr;
      std::swap(t -= quot * newt, newt);
      std::swap(r -= quot * newr, newr);
    }
    if (t < 0) t += static_cast<long long>(c.p);
    return static_cast<Elem>(t);
  }
  if (c.tabled) return c.inv_t[a];
  return pow(a, c.q - 2);
}

std::string Fq::describe() const {
  const Core& c = *core_;
  std::ostringstream os;
  if (c.m == 1) {
    os << "F_" << c.p;
    return os.str();
  }
  os << "F_" << c.q << " = F_" << c.p << "[x]/(x^" << c.m;
  for (int i = c.m - 1; i >= 0; --i) {
    if (c.modulus[i] == 0) continue;
    os << " + ";
    if (c.modulus[i] != 1 || i == 0) os << c.modulus[i];
    if (i >= 1) {
      if (c.modulus[i] != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  os << ")";
  return os.str();
}

Embedding::Embedding(const Fq& src, const Fq& dst) : src_(src), dst_(dst) {
  if (src.p() != dst.p() || dst.degree() % src.degree() != 0)
    throw UsageError("no embedding " + src.describe() + " -> " + dst.describe());
  // smallest root of the source modulus in dst
  int e = src.degree();
  Fq::Elem root = 0;
  bool found = false;
  for (Fq::Elem cand = 0; cand < dst.q(); ++cand) {
    // Horner on x^e + sum c_i x^i
    Fq::Elem val = dst.one();
    for (int i = e - 1; i >= 0; --i) {
      val = dst.mul(val, cand);
      val = dst.add(val, dst.from_int(static_cast<long long>(src.modulus()[i])));
    }
    if (val == 0) {
      root = cand;
      found = true;
      break;
    }
  }
  if (!found) throw UsageError("source modulus has no root in target field");
  gen_pow_.resize(e);
  gen_pow_[0] = dst.one();
  for (int i = 1; i < e; ++i) gen_pow_[i] = dst.mul(gen_pow_[i - 1], root);
}

Fq::Elem Embedding::operator()(Fq::Elem a) const {
  Fq::Elem out = 0;
  std::uint64_t p = src_.p();
  for (int i = 0; i < src_.degree(); ++i) {
    std::uint64_t digit = a % p;
    a /= p;
    if (digit) out = dst_.add(out, dst_.mul(dst_.from_int(static_cast<long long>(digit)), gen_pow_[i]));
  }
  return out;
}

const Fq& cached_extension(std::uint64_t p, int m) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, int>, std::unique_ptr<Fq>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, m);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto field = std::make_unique<Fq>(m == 1 ? Fq::prime(p) : Fq::extension(p, m));
    it = cache.emplace(key, std::move(field)).first;
  }
  return *it->second;
}

Rational QQ::parse(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      if (den == 0) throw UsageError("zero denominator: " + s);
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      int frac = static_cast<int>(s.size() - dot - 1);
      mpz_class num(digits, 10);
      mpz_class den = 1;
      for (int i = 0; i < frac; ++i) den *= 10;
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    return Rational(mpz_class(s, 10));
  } catch (const std::invalid_argument&) {
    throw UsageError("cannot parse rational: " + s);
  }
}

std::string QQ::to_string(const Rational& a) { return a.get_str(); }

FieldSpec FieldSpec::from_q(std::uint64_t q) {
  if (q < 2) throw UsageError("q must be >= 2");
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      int m = 0;
      std::uint64_t r = q;
      while (r % d == 0) {
        r /= d;
        ++m;
      }
      if (r != 1) throw UsageError(std::to_string(q) + " is not a prime power");
      return m == 1 ? prime(d) : extension(d, m);
    }
  }
  return prime(q);
}

std::uint64_t FieldSpec::q() const {
  if (is_rational()) throw UsageError("rational field has no q");
  std::uint64_t r = 1;
  for (int i = 0; i < m; ++i) r *= p;
  return r;
}

Fq FieldSpec::make_fq() const {
  if (is_rational()) throw UsageError("operation requires a finite field");
  if (m == 1) return Fq::prime(p);
  if (modulus.empty()) return Fq::extension(p, m);
  return Fq::extension(p, m, modulus);
}

std::string FieldSpec::describe() const {
  if (is_rational()) return "Q";
  return make_fq().describe();
}

}  // namespace genbound
