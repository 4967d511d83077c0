#include "genbound/bounds.hpp"

namespace genbound::bounds {

ll floor_div(ll a, ll b) {
  if (b <= 0) throw UsageError("floor_div requires positive divisor");
  ll quot = a / b;
  if ((a % b != 0) && (a < 0)) --quot;
  return quot;
}

ll forster(ll d, ll gen_k) {
  if (d < 0 || gen_k < 0) throw UsageError("forster requires d, gen_k >= 0");
  return d + gen_k;
}

ll main2(ll d, ll n, ll n_max) {
  if (d < 0) throw UsageError("d must be >= 0");
  if (n_max >= n || n_max < 0) throw UsageError("need 0 <= n_max < n");
  return floor_div(d, n - n_max) + n_max + 1;
}

ll azumaya_upper(ll d, ll s) {
  if (d < 0) throw UsageError("d must be >= 0");
  if (s < 2) throw UsageError("azumaya bounds require s >= 2");
  return floor_div(d, s - 1) + 2;
}

ll azumaya_lower(ll d, ll s) {
  if (d < 0) throw UsageError("d must be >= 0");
  if (s == 2)
    throw UsageError("degree-2 lower bound is a separate formula; use azumaya_lower_s2");
  if (s < 3) throw UsageError("azumaya lower bound requires s >= 3");
  return floor_div(d, 2 * (s - 1)) + 2;
}

ll azumaya_lower_s2(ll d) {
  if (d < 0) throw UsageError("d must be >= 0");
  return 2 * floor_div(d + 2, 4) + 2;
}

ll involution_bound(ll d, ll s, InvKind kind) {
  if (d < 0) throw UsageError("d must be >= 0");
  if (kind == InvKind::Orthogonal) {
    if (s < 2) throw UsageError("involution bound requires s >= 2");
    if (s == 4) return floor_div(d + 1, 4) + 1;
    return floor_div(d + s - 2, 2 * s - 3) + 1;
  }
  if (s < 2 || s % 2 != 0) throw UsageError("symplectic involution requires even s >= 2");
  if (s == 2) return d + 2;
  if (s == 4) return floor_div(d + 3, 4) + 1;
  if (s == 6) return floor_div(d + 6, 9) + 1;
  return floor_div(d + s - 1, 2 * s - 3) + 1;
}

ll octonion_upper(ll d) {
  if (d < 0) throw UsageError("d must be >= 0");
  return floor_div(d + 1, 2) + 3;
}

ll main3_lower(ll d, ll n, ll dim_g, ll rho) {
  if (d < 0 || n < 1 || dim_g < 0 || rho < 1)
    throw UsageError("main3_lower requires d >= 0, n >= 1, dim_g >= 0, rho >= 1");
  return floor_div(d + 2 * dim_g - rho, 2 * n) + 1;
}

ll min_valid_r(const CodimFormula& f) {
  switch (f.kind) {
    case CodimPreset::Matrix: return 1;
    case CodimPreset::Module: return f.param;
    case CodimPreset::Etale: return 1;
    case CodimPreset::Octonion: return 3;
  }
  throw UsageError("unknown codim preset");
}

ll codim_formula(const CodimFormula& f, ll r) {
  if (r < min_valid_r(f))
    throw UsageError("r below the formula's validity range (needs r >= " +
                     std::to_string(min_valid_r(f)) + ")");
  switch (f.kind) {
    case CodimPreset::Matrix:
      if (f.param < 2) throw UsageError("matrix codim formula requires s >= 2");
      return (r - 1) * (f.param - 1);
    case CodimPreset::Module:
      if (f.param < 1) throw UsageError("module codim formula requires n >= 1");
      return r - f.param + 1;
    case CodimPreset::Etale:
      if (f.param < 2) throw UsageError("etale codim formula requires n >= 2");
      return r;
    case CodimPreset::Octonion:
      return 2 * r - 5;
  }
  throw UsageError("unknown codim preset");
}

MinRResult min_r_for_d(ll d, const CodimFormula& f) {
  if (d < 0) throw UsageError("d must be >= 0");
  for (ll r = min_valid_r(f);; ++r) {
    if (codim_formula(f, r) > d) return {r};
    if (r > d + f.param + 8)  // codim grows by >= 1 per step past its start
      throw UsageError("codimension formula failed to exceed d");
  }
}

bool cor_azumaya_gen2(ll d, ll s) {
  if (d < 0 || s < 2) throw UsageError("need d >= 0, s >= 2");
  return 2 * s > 2 + d;  // s > 1 + d/2
}

BoundResult evaluate(const BoundQuery& qy, ll d) {
  BoundResult out;
  const std::string kInf = "requires infinite base field";
  const std::string kChar0 = "requires characteristic 0";
  switch (qy.kind) {
    case BoundQuery::Kind::Generic:
      out.uppers.push_back({"forster", forster(d, qy.gen_k), kInf});
      out.uppers.push_back({"main2", main2(d, qy.n, qy.n_max), kInf});
      break;
    case BoundQuery::Kind::Azumaya: {
      ll s = qy.s;
      out.uppers.push_back({"azumaya_upper", azumaya_upper(d, s), kInf});
      out.uppers.push_back({"main2", main2(d, s * s, s * s - s + 1), kInf});
      out.uppers.push_back({"forster", forster(d, 2), kInf});
      if (s >= 3) {
        out.lowers.push_back({"azumaya_lower", azumaya_lower(d, s), kChar0});
        out.lowers.push_back(
            {"main3_lower", main3_lower(d, s * s, s * s - 1, 4), kChar0 + "; rho=4 for PGL_s"});
      } else {
        out.lowers.push_back({"azumaya_lower_s2", azumaya_lower_s2(d), kChar0});
        out.lowers.push_back(
            {"main3_lower", main3_lower(d, s * s, s * s - 1, 4), kChar0 + "; rho=4 for PGL_s"});
      }
      if (cor_azumaya_gen2(d, s))
        out.uppers.push_back({"gen_equals_2", 2, "s > 1 + d/2, so gen = 2 exactly"});
      break;
    }
    case BoundQuery::Kind::Involution:
      out.uppers.push_back({"involution_upper", involution_bound(d, qy.s, qy.inv_kind), kInf});
      break;
    case BoundQuery::Kind::Octonion:
      out.uppers.push_back({"octonion_upper", octonion_upper(d), kInf});
      out.uppers.push_back({"main2", main2(d, 8, 6), kInf});
      out.uppers.push_back({"forster", forster(d, 3), kInf});
      out.lowers.push_back({"main3_lower", main3_lower(d, 8, 14, 4), kChar0 + "; rho=4 for G_2"});
      break;
    case BoundQuery::Kind::Module:
      out.uppers.push_back({"forster", forster(d, qy.n), ""});
      out.uppers.push_back({"main2", main2(d, qy.n, qy.n - 1), kInf});
      out.lowers.push_back({"main3_lower", main3_lower(d, qy.n, qy.n * qy.n, 2),
                            kChar0 + "; rho=2 for GL_n"});
      break;
    case BoundQuery::Kind::Etale:
      out.uppers.push_back({"forster", forster(d, 1), kInf});
      out.uppers.push_back({"main2", main2(d, qy.n, qy.n - 1), kInf});
      break;
    case BoundQuery::Kind::Main3:
      if (qy.rho < 1)
        throw UsageError("rho must be supplied explicitly for this automorphism group");
      out.lowers.push_back({"main3_lower", main3_lower(d, qy.n, qy.dim_g, qy.rho),
                            kChar0 + "; fails for unipotent groups"});
      break;
  }
  return out;
}

}  // namespace genbound::bounds
