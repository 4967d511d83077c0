#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <random>
#include <thread>

#include "genbound/algebra.hpp"
#include "genbound/errors.hpp"
#include "genbound/matrix.hpp"

namespace genbound {

template <class F>
struct ClosureResult {
  Span<F> basis;
  int dim = 0;
  bool generates = false;
  int witness_depth = 0;  // closure rounds until stable (or until full)
};

struct ClosureOptions {
  bool skip_unit_ops = false;
};

/// The smallest subspace containing the tuple entries and every arity-0 op
/// value that is closed under all ops.  Round-based: apply each op to all
/// arity-tuples from the current basis, span-insert the results, repeat until
/// stable.  The dimension strictly increases in every non-final round, so at
/// most n rounds run; once the span is the whole space it cannot grow and we
/// stop early.
template <class F>
ClosureResult<F> subalgebra_closure(const Algebra<F>& alg, const Tuple<F>& tuple,
                                    const ClosureOptions& opts = {}) {
  alg.check_tuple(tuple);
  ClosureResult<F> res;
  res.basis = Span<F>(alg.n);
  Span<F>& sp = res.basis;

  for (std::size_t i = 0; i < alg.ops.size(); ++i) {
    const auto& op = alg.ops[i];
    if (op.arity != 0) continue;
    if (opts.skip_unit_ops && op.label == OpLabel::Unit) continue;
    sp.insert(alg.field, alg.eval_op(static_cast<int>(i), {}));
  }
  for (const auto& v : tuple) sp.insert(alg.field, v);

  Vec<F> scratch;
  std::vector<Vec<F>> args;
  bool changed = sp.dim() > 0 || !tuple.empty();
  while (changed && sp.dim() < alg.n) {
    changed = false;
    ++res.witness_depth;
    const std::vector<Vec<F>> basis = sp.rows();  // snapshot for this round
    std::size_t t = basis.size();
    for (std::size_t oi = 0; oi < alg.ops.size() && sp.dim() < alg.n; ++oi) {
      const auto& op = alg.ops[oi];
      if (op.arity == 0) continue;
      if (opts.skip_unit_ops && op.label == OpLabel::Unit) continue;
      // iterate all arity-tuples from the snapshot basis
      std::vector<std::size_t> pick(static_cast<std::size_t>(op.arity), 0);
      args.assign(static_cast<std::size_t>(op.arity), {});
      bool more = t > 0;
      while (more && sp.dim() < alg.n) {
        for (int k = 0; k < op.arity; ++k) args[static_cast<std::size_t>(k)] = basis[pick[static_cast<std::size_t>(k)]];
        alg.eval_op_into(static_cast<int>(oi), args, scratch);
        if (sp.insert(alg.field, scratch)) changed = true;
        int k = op.arity - 1;
        while (k >= 0) {
          if (++pick[static_cast<std::size_t>(k)] < t) break;
          pick[static_cast<std::size_t>(k)] = 0;
          --k;
        }
        if (k < 0) more = false;
      }
    }
  }
  res.dim = sp.dim();
  res.generates = (res.dim == alg.n);
  return res;
}

template <class F>
bool generates(const Algebra<F>& alg, const Tuple<F>& tuple) {
  return subalgebra_closure(alg, tuple).generates;
}

// ---------------------------------------------------------------------------
// Tuple enumeration over finite fields
// ---------------------------------------------------------------------------

inline std::uint64_t checked_total(std::uint64_t q, int count) {
  std::uint64_t total = 1;
  for (int i = 0; i < count; ++i) {
    if (total > UINT64_MAX / q) throw BudgetError(UINT64_MAX, 0);
    total *= q;
  }
  return total;
}

/// Decodes tuple index -> r vectors of length n, lexicographic in the base-q
/// digits (entry (0,0) is the fastest-moving digit).
inline Tuple<Fq> decode_tuple(std::uint64_t q, int r, int n, std::uint64_t index) {
  Tuple<Fq> t(static_cast<std::size_t>(r), Vec<Fq>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) {
      t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = index % q;
      index /= q;
    }
  return t;
}

// ---------------------------------------------------------------------------
// Minimal generator search
// ---------------------------------------------------------------------------

enum class SearchStatus { Exact, Probabilistic };

struct MinGenResultFq {
  std::optional<int> r;
  Tuple<Fq> witness;
  SearchStatus status = SearchStatus::Exact;
  std::uint64_t tuples_scanned = 0;
};

/// Exact minimal r <= r_max with a generating r-tuple over F_q, by exhaustive
/// scan in lexicographic order.  The witness is the first (lowest-index)
/// generating tuple; with several workers the index range is partitioned and
/// the lowest index wins, so the result does not depend on the worker count.
inline MinGenResultFq min_generators_exhaustive(const Algebra<Fq>& alg, int r_max,
                                                const Budget& budget, int workers = 1) {
  if (r_max < 0) throw UsageError("r_max must be >= 0");
  std::uint64_t q = alg.field.q();
  MinGenResultFq res;
  std::uint64_t scan_cost = 0;
  for (int r = 0; r <= r_max; ++r) scan_cost += checked_total(q, r * alg.n);
  budget.require(scan_cost);

  for (int r = 0; r <= r_max; ++r) {
    std::uint64_t total = checked_total(q, r * alg.n);
    std::atomic<std::uint64_t> best{UINT64_MAX};
    std::atomic<std::uint64_t> scanned{0};
    int w = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::uint64_t>(total, 64))));
    auto work = [&](int wi) {
      std::uint64_t lo = total / static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(wi) +
                         std::min<std::uint64_t>(static_cast<std::uint64_t>(wi), total % static_cast<std::uint64_t>(w));
      std::uint64_t len = total / static_cast<std::uint64_t>(w) +
                          (static_cast<std::uint64_t>(wi) < total % static_cast<std::uint64_t>(w) ? 1 : 0);
      std::uint64_t local = 0;
      for (std::uint64_t idx = lo; idx < lo + len; ++idx) {
        if ((idx & 0x3FF) == 0 && best.load(std::memory_order_relaxed) < idx) break;
        ++local;
        Tuple<Fq> t = decode_tuple(q, r, alg.n, idx);
        if (generates(alg, t)) {
          std::uint64_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          break;
        }
      }
      scanned += local;
    };
    if (w == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < w; ++i) threads.emplace_back(work, i);
      for (auto& th : threads) th.join();
    }
    res.tuples_scanned += scanned.load();
    if (best.load() != UINT64_MAX) {
      res.r = r;
      res.witness = decode_tuple(q, r, alg.n, best.load());
      res.status = SearchStatus::Exact;
      return res;
    }
  }
  res.r = std::nullopt;
  return res;
}

struct MinGenResultQ {
  std::optional<int> r;
  Tuple<QQ> witness;
  SearchStatus status = SearchStatus::Probabilistic;
  int trials_used = 0;
};

/// Randomized search over Q: for each r, samples integer-coordinate tuples
/// from the box [-H, H]^rn, doubling H every few failed trials.  A generating
/// sample proves gen <= r; failures at smaller r are evidence only, hence the
/// probabilistic status.
inline MinGenResultQ min_generators_randomized(const Algebra<QQ>& alg, int r_max,
                                               int trials, std::uint64_t seed) {
  if (trials < 1) throw UsageError("trials must be >= 1");
  MinGenResultQ res;
  std::mt19937_64 rng(seed);
  constexpr int kTrialsPerBox = 8;
  for (int r = 0; r <= r_max; ++r) {
    long long box = 1;
    for (int t = 0; t < (r == 0 ? 1 : trials); ++t) {
      if (t > 0 && t % kTrialsPerBox == 0 && box < (1LL << 20)) box *= 2;
      Tuple<QQ> tuple(static_cast<std::size_t>(r), Vec<QQ>(static_cast<std::size_t>(alg.n)));
      for (auto& v : tuple)
        for (auto& x : v) {
          long long range = 2 * box + 1;
          x = alg.field.from_int(static_cast<long long>(rng() % static_cast<std::uint64_t>(range)) - box);
        }
      ++res.trials_used;
      if (generates(alg, tuple)) {
        res.r = r;
        res.witness = std::move(tuple);
        return res;
      }
    }
  }
  res.r = std::nullopt;
  return res;
}

// ---------------------------------------------------------------------------
// Maximal proper subalgebras
// ---------------------------------------------------------------------------

enum class NmaxStatus { ExactOverThisField, Formula };

template <class F>
struct NmaxResult {
  int value = 0;
  Span<F> certificate;
  NmaxStatus status = NmaxStatus::Formula;
};

/// True iff the span is closed under every op of the algebra (arity-0 values
/// contained, higher arities map basis tuples back into the span).
template <class F>
bool is_op_closed(const Algebra<F>& alg, const Span<F>& sp) {
  Vec<F> scratch;
  std::vector<Vec<F>> args;
  for (std::size_t oi = 0; oi < alg.ops.size(); ++oi) {
    const auto& op = alg.ops[oi];
    if (op.arity == 0) {
      if (!sp.contains(alg.field, alg.eval_op(static_cast<int>(oi), {}))) return false;
      continue;
    }
    const auto& basis = sp.rows();
    std::size_t t = basis.size();
    if (t == 0) continue;
    std::vector<std::size_t> pick(static_cast<std::size_t>(op.arity), 0);
    bool more = true;
    while (more) {
      args.clear();
      for (int k = 0; k < op.arity; ++k) args.push_back(basis[pick[static_cast<std::size_t>(k)]]);
      alg.eval_op_into(static_cast<int>(oi), args, scratch);
      if (!sp.contains(alg.field, scratch)) return false;
      int k = op.arity - 1;
      while (k >= 0) {
        if (++pick[static_cast<std::size_t>(k)] < t) break;
        pick[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) more = false;
    }
  }
  return true;
}

namespace detail {

/// Enumerates canonical RREF bases of d-dimensional subspaces of F^n; calls
/// fn(span) until it returns false.  Returns false if fn stopped the walk.
template <class Fn>
bool for_each_subspace(const Fq& f, int n, int d, Fn&& fn) {
  if (d == 0) {
    Span<Fq> sp(n);
    return fn(sp);
  }
  std::vector<int> pivots(static_cast<std::size_t>(d));
  // iterate pivot column combinations
  for (int i = 0; i < d; ++i) pivots[static_cast<std::size_t>(i)] = i;
  auto next_comb = [&]() {
    int i = d - 1;
    while (i >= 0 && pivots[static_cast<std::size_t>(i)] == n - d + i) --i;
    if (i < 0) return false;
    ++pivots[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) pivots[static_cast<std::size_t>(j)] = pivots[static_cast<std::size_t>(j - 1)] + 1;
    return true;
  };
  std::uint64_t q = f.q();
  do {
    // free positions: row t, columns > pivots[t] that are not pivots
    std::vector<std::pair<int, int>> free_pos;
    for (int t = 0; t < d; ++t)
      for (int c = pivots[static_cast<std::size_t>(t)] + 1; c < n; ++c)
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end())
          free_pos.emplace_back(t, c);
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < free_pos.size(); ++i) combos *= q;
    for (std::uint64_t x = 0; x < combos; ++x) {
      Matrix<Fq> rows(d, n);
      for (int t = 0; t < d; ++t) rows.at(t, pivots[static_cast<std::size_t>(t)]) = f.one();
      std::uint64_t xx = x;
      for (const auto& [t, c] : free_pos) {
        rows.at(t, c) = xx % q;
        xx /= q;
      }
      Span<Fq> sp(n);
      for (int t = 0; t < d; ++t) {
        Vec<Fq> v(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) v[static_cast<std::size_t>(c)] = rows.at(t, c);
        sp.insert(f, v);
      }
      if (!fn(sp)) return false;
    }
  } while (next_comb());
  return true;
}

}  // namespace detail

/// Gaussian binomial coefficient: number of k-dim subspaces of F_q^n.
unsigned __int128 gaussian_binomial(std::uint64_t q, int n, int k);

/// Exact maximum dimension of a proper op-closed subspace over the given
/// finite field, with a certificate; found by scanning dimensions n-1 down.
/// Over a finite field this is a lower bound for the geometric value, hence
/// the ExactOverThisField status.
inline NmaxResult<Fq> nmax_exhaustive(const Algebra<Fq>& alg, const Budget& budget) {
  std::uint64_t cost = 0;
  for (int d = 1; d < alg.n; ++d) {
    unsigned __int128 c = gaussian_binomial(alg.field.q(), alg.n, d);
    cost += (c > static_cast<unsigned __int128>(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(c));
  }
  budget.require(cost);
  for (int d = alg.n - 1; d >= 0; --d) {
    NmaxResult<Fq> res;
    bool found = !detail::for_each_subspace(alg.field, alg.n, d, [&](const Span<Fq>& sp) {
      if (is_op_closed(alg, sp)) {
        res.value = d;
        res.certificate = sp;
        res.status = NmaxStatus::ExactOverThisField;
        return false;
      }
      return true;
    });
    if (found) return res;
  }
  throw UsageError("algebra has no proper op-closed subspace (n = 0?)");
}

/// Known maximal-subalgebra dimensions for the presets, with an explicit
/// certificate: matrix(s) -> s^2-s+1 (stabilizer of a line), split octonions
/// -> 6 (the sextonions), zero module and split etale of rank n -> n-1.
template <class F>
NmaxResult<F> nmax_formula(const Algebra<F>& alg) {
  NmaxResult<F> res;
  res.status = NmaxStatus::Formula;
  const F& f = alg.field;
  res.certificate = Span<F>(alg.n);
  auto unit_vec = [&](int i) {
    Vec<F> v(static_cast<std::size_t>(alg.n), f.zero());
    v[static_cast<std::size_t>(i)] = f.one();
    return v;
  };
  switch (alg.preset) {
    case PresetKind::MatrixAlgebra: {
      if (alg.involution != InvolutionKind::None)
        throw UsageError("no formula value for involution algebras; use exhaustive mode");
      int s = alg.preset_param;
      res.value = s * s - s + 1;
      // matrices preserving the line spanned by e_1: zero below the (1,1) entry
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
          if (i == 0 || j != 0) res.certificate.insert(f, unit_vec(i * s + j));
      break;
    }
    case PresetKind::SplitOctonion: {
      res.value = 6;
      // the sextonions: span{E11, E22, v_1, v_2, w_1, w_3} in Zorn coordinates
      for (int i : {0, 7, 1, 2, 4, 6}) res.certificate.insert(f, unit_vec(i));
      break;
    }
    case PresetKind::ZeroModule: {
      res.value = alg.n - 1;
      for (int i = 0; i + 1 < alg.n; ++i) res.certificate.insert(f, unit_vec(i));
      break;
    }
    case PresetKind::SplitEtale: {
      res.value = alg.n - 1;
      if (alg.with_unit) {
        // merge the last two coordinates: span{e_1,..,e_{n-2}, e_{n-1}+e_n}
        for (int i = 0; i + 2 < alg.n; ++i) res.certificate.insert(f, unit_vec(i));
        if (alg.n >= 2) {
          Vec<F> v(static_cast<std::size_t>(alg.n), f.zero());
          v[static_cast<std::size_t>(alg.n - 2)] = f.one();
          v[static_cast<std::size_t>(alg.n - 1)] = f.one();
          res.certificate.insert(f, v);
        }
      } else {
        for (int i = 0; i + 1 < alg.n; ++i) res.certificate.insert(f, unit_vec(i));
      }
      break;
    }
    default:
      throw UsageError("formula mode requires a preset algebra");
  }
  if (res.value != res.certificate.dim() || !is_op_closed(alg, res.certificate))
    throw UsageError("internal: formula certificate failed verification");
  return res;
}

// ---------------------------------------------------------------------------
// Sextonions
// ---------------------------------------------------------------------------

template <class F>
struct SextonionResult {
  Span<F> basis;      // 6-dimensional op-closed subspace
  Tuple<F> generators;  // 3 elements whose closure is exactly `basis`
};

/// Locates a 6-dimensional op-closed subspace of the Zorn model together
/// with 3 generators.  Tries structured triples first (two isotropic v-basis
/// vectors and a paired w-basis vector, whose products produce both diagonal
/// idempotents and a third null vector), then falls back to a seeded random
/// search.
template <class F>
SextonionResult<F> find_sextonion(const Algebra<F>& alg, std::uint64_t seed = 0) {
  if (alg.preset != PresetKind::SplitOctonion)
    throw UsageError("sextonion search requires the split octonion preset");
  if constexpr (std::is_same_v<F, Fq>) {
    if (alg.field.q() < 3) throw UsageError("sextonion search requires q >= 3 (or Q)");
  }
  const F& f = alg.field;
  auto unit_vec = [&](int i) {
    Vec<F> v(8, f.zero());
    v[static_cast<std::size_t>(i)] = f.one();
    return v;
  };
  auto try_triple = [&](Tuple<F> t) -> std::optional<SextonionResult<F>> {
    auto cl = subalgebra_closure(alg, t);
    if (cl.dim != 6) return std::nullopt;
    SextonionResult<F> r;
    r.basis = cl.basis;
    r.generators = std::move(t);
    return r;
  };
  // structured candidates: v_i, v_j, w_i for i != j
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      if (auto r = try_triple({unit_vec(1 + i), unit_vec(1 + j), unit_vec(4 + i)})) return *r;
    }
  // seeded fallback: small random integer combinations
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    Tuple<F> t(3, Vec<F>(8, f.zero()));
    for (auto& v : t)
      for (auto& x : v) x = f.from_int(static_cast<long long>(rng() % 5) - 2);
    if (auto r = try_triple(std::move(t))) return *r;
  }
  throw UsageError("sextonion search failed within budget");
}

// ---------------------------------------------------------------------------
// Unital gap
// ---------------------------------------------------------------------------

struct UnitalGap {
  bool gen_unital = false;
  bool gen_nonunital = false;
};

/// Runs the closure twice, with and without the unit op.  A non-unital
/// generating tuple always generates unitally, so gen_nonunital implies
/// gen_unital.
template <class F>
UnitalGap unital_gap(const Algebra<F>& alg, const Tuple<F>& tuple) {
  if (!alg.has_unit_op()) throw UsageError("algebra has no unit op");
  UnitalGap g;
  g.gen_unital = generates(alg, tuple);
  ClosureOptions opts;
  opts.skip_unit_ops = true;
  g.gen_nonunital = subalgebra_closure(alg, tuple, opts).generates;
  return g;
}

}  // namespace genbound
