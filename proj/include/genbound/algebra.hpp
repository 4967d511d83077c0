#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "genbound/errors.hpp"
#include "genbound/field.hpp"
#include "genbound/matrix.hpp"

namespace genbound {

enum class OpLabel { Product, Involution, Unit, Other };

inline const char* to_string(OpLabel l) {
  switch (l) {
    case OpLabel::Product: return "product";
    case OpLabel::Involution: return "involution";
    case OpLabel::Unit: return "unit";
    default: return "other";
  }
}

inline OpLabel op_label_from_string(const std::string& s) {
  if (s == "product") return OpLabel::Product;
  if (s == "involution") return OpLabel::Involution;
  if (s == "unit") return OpLabel::Unit;
  if (s == "other") return OpLabel::Other;
  throw UsageError("unknown op label: " + s);
}

/// One multilinear operation A^arity -> A given by structure constants,
/// stored sparsely: m(e_{j_1},...,e_{j_a}) = sum_l c[j_1..j_a; l] e_l.
template <class F>
struct MultiOp {
  using Elem = typename F::Elem;
  struct Term {
    std::vector<std::uint32_t> in;  // arity basis indices
    std::uint32_t out;
    Elem coeff;
  };

  int arity = 0;
  OpLabel label = OpLabel::Other;
  std::vector<Term> terms;

  void add_term(std::vector<std::uint32_t> in, std::uint32_t out, Elem coeff) {
    terms.push_back(Term{std::move(in), out, std::move(coeff)});
  }
};

enum class PresetKind { None, ZeroModule, SplitEtale, MatrixAlgebra, SplitOctonion };
enum class InvolutionKind { None, Orthogonal, Symplectic };

/// A finite-dimensional multialgebra: a coordinate space of dimension n over
/// `field` together with finitely many multilinear operations.  Arity-0 ops
/// are distinguished elements (e.g. the unit); the presence/absence of the
/// unit op is exactly the unital/non-unital distinction.
template <class F>
struct Algebra {
  using Elem = typename F::Elem;

  F field;
  int n = 0;
  std::string name;
  std::vector<MultiOp<F>> ops;

  PresetKind preset = PresetKind::None;
  int preset_param = 0;  // matrix size s, or module/etale rank n
  InvolutionKind involution = InvolutionKind::None;
  bool with_unit = false;

  bool has_unit_op() const {
    for (const auto& op : ops)
      if (op.label == OpLabel::Unit) return true;
    return false;
  }

  void eval_op_into(int op_index, const std::vector<Vec<F>>& args, Vec<F>& out) const {
    const MultiOp<F>& op = ops.at(static_cast<std::size_t>(op_index));
    if (static_cast<int>(args.size()) != op.arity)
      throw UsageError("arity mismatch: op expects " + std::to_string(op.arity) +
                       " arguments, got " + std::to_string(args.size()));
    for (const auto& a : args)
      if (static_cast<int>(a.size()) != n) throw UsageError("element dimension mismatch");
    out.assign(static_cast<std::size_t>(n), field.zero());
    for (const auto& t : op.terms) {
      Elem c = t.coeff;
      bool zero = false;
      for (int k = 0; k < op.arity; ++k) {
        const Elem& x = args[static_cast<std::size_t>(k)][t.in[static_cast<std::size_t>(k)]];
        if (field.is_zero(x)) {
          zero = true;
          break;
        }
        c = field.mul(c, x);
      }
      if (!zero) out[t.out] = field.add(out[t.out], c);
    }
  }

  Vec<F> eval_op(int op_index, const std::vector<Vec<F>>& args) const {
    Vec<F> out;
    eval_op_into(op_index, args, out);
    return out;
  }

  /// Checks that a tuple's entries live in this algebra's coordinate space.
  void check_tuple(const std::vector<Vec<F>>& tuple) const {
    for (const auto& v : tuple) {
      if (static_cast<int>(v.size()) != n)
        throw UsageError("tuple entry has wrong dimension");
      if constexpr (requires(const F& ff, Elem e) { ff.valid(e); }) {
        for (const auto& e : v)
          if (!field.valid(e)) throw UsageError("tuple entry does not belong to " + field.describe());
      }
    }
  }

  /// Copy with all ops of the given label removed (used for the
  /// unital/non-unital comparison).
  Algebra without_label(OpLabel label_to_drop) const {
    Algebra out = *this;
    out.ops.clear();
    for (const auto& op : ops)
      if (op.label != label_to_drop) out.ops.push_back(op);
    if (label_to_drop == OpLabel::Unit) out.with_unit = false;
    return out;
  }
};

template <class F>
using Tuple = std::vector<Vec<F>>;

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// k^n with the zero multiplication; subalgebras are exactly the linear
/// subspaces, so generation is plain spanning.
template <class F>
Algebra<F> zero_module(const F& f, int n) {
  if (n < 1) throw UsageError("zero_module requires n >= 1");
  Algebra<F> a;
  a.field = f;
  a.n = n;
  a.name = "zero_module(" + std::to_string(n) + ")";
  a.preset = PresetKind::ZeroModule;
  a.preset_param = n;
  MultiOp<F> prod;
  prod.arity = 2;
  prod.label = OpLabel::Product;  // identically zero: no terms
  a.ops.push_back(std::move(prod));
  return a;
}

/// k^n with componentwise multiplication (the split etale algebra of rank n).
/// The unit (1,...,1) is included as an arity-0 op unless with_unit is false.
template <class F>
Algebra<F> split_etale(const F& f, int n, bool with_unit = true) {
  if (n < 1) throw UsageError("split_etale requires n >= 1");
  Algebra<F> a;
  a.field = f;
  a.n = n;
  a.name = "split_etale(" + std::to_string(n) + ")";
  a.preset = PresetKind::SplitEtale;
  a.preset_param = n;
  a.with_unit = with_unit;
  MultiOp<F> prod;
  prod.arity = 2;
  prod.label = OpLabel::Product;
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i)
    prod.add_term({i, i}, i, f.one());
  a.ops.push_back(std::move(prod));
  if (with_unit) {
    MultiOp<F> unit;
    unit.arity = 0;
    unit.label = OpLabel::Unit;
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i)
      unit.add_term({}, i, f.one());
    a.ops.push_back(std::move(unit));
  }
  return a;
}

/// Mat_s(k) with basis E_11, E_12, ..., E_ss in row-major order, so
/// E_ij E_kl = [j=k] E_il.  Includes the unit by default.
template <class F>
Algebra<F> matrix_algebra(const F& f, int s, bool with_unit = true) {
  if (s < 1) throw UsageError("matrix_algebra requires s >= 1");
  Algebra<F> a;
  a.field = f;
  a.n = s * s;
  a.name = "matrix(" + std::to_string(s) + ")";
  a.preset = PresetKind::MatrixAlgebra;
  a.preset_param = s;
  a.with_unit = with_unit;
  auto idx = [s](int i, int j) { return static_cast<std::uint32_t>(i * s + j); };
  MultiOp<F> prod;
  prod.arity = 2;
  prod.label = OpLabel::Product;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int l = 0; l < s; ++l)
        prod.add_term({idx(i, j), idx(j, l)}, idx(i, l), f.one());
  a.ops.push_back(std::move(prod));
  if (with_unit) {
    MultiOp<F> unit;
    unit.arity = 0;
    unit.label = OpLabel::Unit;
    for (int i = 0; i < s; ++i) unit.add_term({}, idx(i, i), f.one());
    a.ops.push_back(std::move(unit));
  }
  return a;
}

/// Mat_s(k) together with an involution as an arity-1 op: the transpose
/// (orthogonal case) or x -> J x^t J^{-1} with the standard alternating form
/// J (symplectic case, s even).
template <class F>
Algebra<F> matrix_with_involution(const F& f, int s, InvolutionKind kind,
                                  bool with_unit = true) {
  if (kind == InvolutionKind::Symplectic && s % 2 != 0)
    throw UsageError("symplectic involution requires even s");
  if (kind == InvolutionKind::None) throw UsageError("involution kind required");
  Algebra<F> a = matrix_algebra(f, s, with_unit);
  a.name = "matrix_involution(" + std::to_string(s) + "," +
           (kind == InvolutionKind::Orthogonal ? "orthogonal" : "symplectic") + ")";
  a.involution = kind;
  auto idx = [s](int i, int j) { return static_cast<std::uint32_t>(i * s + j); };
  MultiOp<F> sigma;
  sigma.arity = 1;
  sigma.label = OpLabel::Involution;
  if (kind == InvolutionKind::Orthogonal) {
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) sigma.add_term({idx(i, j)}, idx(j, i), f.one());
  } else {
    // With J = [[0, I],[-I, 0]] in half-blocks, J E_ba J^{-1} = +/- E_{sw(b),sw(a)}
    // where sw swaps the halves; sign is + iff a and b lie in the same half.
    // For s = 2 this is the adjugate map [[a,b],[c,d]] -> [[d,-b],[-c,a]].
    int h = s / 2;
    auto sw = [h](int i) { return i < h ? i + h : i - h; };
    for (int aa = 0; aa < s; ++aa)
      for (int bb = 0; bb < s; ++bb) {
        int sign = ((aa < h) == (bb < h)) ? 1 : -1;
        sigma.add_term({idx(aa, bb)}, idx(sw(bb), sw(aa)), f.from_int(sign));
      }
  }
  a.ops.push_back(std::move(sigma));
  return a;
}

/// The split octonions as Zorn vector matrices (a, v; w, b) with a, b
/// scalars and v, w in k^3:
///   (a1,v1;w1,b1)(a2,v2;w2,b2) =
///     (a1 a2 + v1.w2,  a1 v2 + b2 v1 - w1 x w2;
///      a2 w1 + b1 w2 + v1 x v2,  b1 b2 + w1.v2).
/// Basis order: index 0 = a, 1..3 = v, 4..6 = w, 7 = b.  Ops: product, unit
/// (= diag(1,1)), and the conjugation (a,v;w,b) -> (b,-v;-w,a).
template <class F>
Algebra<F> split_octonion(const F& f) {
  Algebra<F> alg;
  alg.field = f;
  alg.n = 8;
  alg.name = "split_octonion";
  alg.preset = PresetKind::SplitOctonion;
  alg.preset_param = 8;
  alg.with_unit = true;

  // integer structure constants via the Zorn formula on basis pairs
  auto basis_coords = [](int i) {
    std::array<int, 8> c{};
    c[i] = 1;
    return c;
  };
  auto cross = [](const int* x, const int* y, int* out) {
    out[0] = x[1] * y[2] - x[2] * y[1];
    out[1] = x[2] * y[0] - x[0] * y[2];
    out[2] = x[0] * y[1] - x[1] * y[0];
  };
  MultiOp<F> prod;
  prod.arity = 2;
  prod.label = OpLabel::Product;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      auto u1 = basis_coords(i);
      auto u2 = basis_coords(j);
      const int a1 = u1[0], b1 = u1[7];
      const int a2 = u2[0], b2 = u2[7];
      const int* v1 = &u1[1];
      const int* w1 = &u1[4];
      const int* v2 = &u2[1];
      const int* w2 = &u2[4];
      std::array<int, 8> out{};
      out[0] = a1 * a2 + v1[0] * w2[0] + v1[1] * w2[1] + v1[2] * w2[2];
      out[7] = b1 * b2 + w1[0] * v2[0] + w1[1] * v2[1] + w1[2] * v2[2];
      int c1[3], c2[3];
      cross(w1, w2, c1);
      cross(v1, v2, c2);
      for (int k = 0; k < 3; ++k) {
        out[1 + k] = a1 * v2[k] + b2 * v1[k] - c1[k];
        out[4 + k] = a2 * w1[k] + b1 * w2[k] + c2[k];
      }
      for (int l = 0; l < 8; ++l)
        if (out[l] != 0)
          prod.add_term({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)},
                        static_cast<std::uint32_t>(l), f.from_int(out[l]));
    }
  }
  alg.ops.push_back(std::move(prod));

  MultiOp<F> unit;
  unit.arity = 0;
  unit.label = OpLabel::Unit;
  unit.add_term({}, 0, f.one());
  unit.add_term({}, 7, f.one());
  alg.ops.push_back(std::move(unit));

  MultiOp<F> conj;
  conj.arity = 1;
  conj.label = OpLabel::Involution;
  conj.add_term({0}, 7, f.one());
  conj.add_term({7}, 0, f.one());
  for (std::uint32_t i = 1; i <= 6; ++i) conj.add_term({i}, i, f.from_int(-1));
  alg.ops.push_back(std::move(conj));
  return alg;
}

/// Zorn-model norm (the determinant a*b - v.w); multiplicative on the split
/// octonions.
template <class F>
typename F::Elem octonion_norm(const F& f, const Vec<F>& x) {
  typename F::Elem n = f.mul(x[0], x[7]);
  for (int k = 0; k < 3; ++k) n = f.sub(n, f.mul(x[1 + k], x[4 + k]));
  return n;
}

// ---------------------------------------------------------------------------
// Base change
// ---------------------------------------------------------------------------

/// Reinterprets the structure constants over an extension of the base field
/// via the canonical embedding.
inline Algebra<Fq> base_change(const Algebra<Fq>& a, const Fq& bigger) {
  if (a.field == bigger) return a;
  Embedding emb(a.field, bigger);
  Algebra<Fq> out;
  out.field = bigger;
  out.n = a.n;
  out.name = a.name;
  out.preset = a.preset;
  out.preset_param = a.preset_param;
  out.involution = a.involution;
  out.with_unit = a.with_unit;
  for (const auto& op : a.ops) {
    MultiOp<Fq> nop;
    nop.arity = op.arity;
    nop.label = op.label;
    for (const auto& t : op.terms) nop.add_term(t.in, t.out, emb(t.coeff));
    out.ops.push_back(std::move(nop));
  }
  return out;
}

inline Algebra<QQ> base_change(const Algebra<QQ>& a, const QQ&) { return a; }

/// Maps a tuple along the same embedding.
inline Tuple<Fq> embed_tuple(const Algebra<Fq>& a, const Fq& bigger, const Tuple<Fq>& t) {
  Embedding emb(a.field, bigger);
  Tuple<Fq> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i].resize(t[i].size());
    for (std::size_t j = 0; j < t[i].size(); ++j) out[i][j] = emb(t[i][j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct IdentityCheck {
  std::string name;
  bool pass = false;
  int samples = 0;
};

struct ValidationReport {
  std::vector<IdentityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Spot-checks the defining identities on random samples: associativity and
/// involution anti-multiplicativity for matrix presets, alternativity and
/// norm composition for the octonions, commutativity for etale, plus unit
/// and multilinearity checks where applicable.  Report-only.
template <class F>
ValidationReport validate(const Algebra<F>& alg, int samples = 100, std::uint64_t seed = 0) {
  ValidationReport rep;
  std::mt19937_64 rng(seed);
  auto rand_elem = [&]() {
    Vec<F> v(static_cast<std::size_t>(alg.n));
    for (auto& x : v) {
      if constexpr (std::is_same_v<F, Fq>)
        x = static_cast<typename F::Elem>(rng() % alg.field.q());
      else
        x = alg.field.from_int(static_cast<long long>(rng() % 19) - 9);
    }
    return v;
  };
  int prod_idx = -1, inv_idx = -1, unit_idx = -1;
  for (std::size_t i = 0; i < alg.ops.size(); ++i) {
    if (alg.ops[i].label == OpLabel::Product && prod_idx < 0) prod_idx = static_cast<int>(i);
    if (alg.ops[i].label == OpLabel::Involution && inv_idx < 0) inv_idx = static_cast<int>(i);
    if (alg.ops[i].label == OpLabel::Unit && unit_idx < 0) unit_idx = static_cast<int>(i);
  }
  auto mulv = [&](const Vec<F>& x, const Vec<F>& y) { return alg.eval_op(prod_idx, {x, y}); };

  if (prod_idx >= 0) {
    bool assoc = true, comm = true, alt = true;
    for (int t = 0; t < samples; ++t) {
      Vec<F> x = rand_elem(), y = rand_elem(), z = rand_elem();
      if (mulv(mulv(x, y), z) != mulv(x, mulv(y, z))) assoc = false;
      if (mulv(x, y) != mulv(y, x)) comm = false;
      if (mulv(x, mulv(x, y)) != mulv(mulv(x, x), y) ||
          mulv(mulv(y, x), x) != mulv(y, mulv(x, x)))
        alt = false;
    }
    if (alg.preset == PresetKind::SplitOctonion) {
      rep.checks.push_back({"associativity", assoc, samples});
      rep.checks.push_back({"alternativity", alt, samples});
      bool norm_ok = true;
      for (int t = 0; t < samples; ++t) {
        Vec<F> x = rand_elem(), y = rand_elem();
        auto n1 = octonion_norm(alg.field, mulv(x, y));
        auto n2 = alg.field.mul(octonion_norm(alg.field, x), octonion_norm(alg.field, y));
        if (n1 != n2) norm_ok = false;
      }
      rep.checks.push_back({"norm_composition", norm_ok, samples});
    } else if (alg.preset == PresetKind::SplitEtale) {
      rep.checks.push_back({"associativity", assoc, samples});
      rep.checks.push_back({"commutativity", comm, samples});
    } else {
      rep.checks.push_back({"associativity", assoc, samples});
    }
  }
  if (inv_idx >= 0 && prod_idx >= 0) {
    bool anti = true;
    for (int t = 0; t < samples; ++t) {
      Vec<F> x = rand_elem(), y = rand_elem();
      auto lhs = alg.eval_op(inv_idx, {mulv(x, y)});
      auto rhs = mulv(alg.eval_op(inv_idx, {y}), alg.eval_op(inv_idx, {x}));
      if (lhs != rhs) anti = false;
    }
    rep.checks.push_back({"involution_antihom", anti, samples});
  }
  if (unit_idx >= 0 && prod_idx >= 0) {
    Vec<F> one = alg.eval_op(unit_idx, {});
    bool unit_ok = true;
    for (int t = 0; t < samples; ++t) {
      Vec<F> x = rand_elem();
      if (mulv(one, x) != x || mulv(x, one) != x) unit_ok = false;
    }
    rep.checks.push_back({"unit_identity", unit_ok, samples});
  }
  return rep;
}

}  // namespace genbound
