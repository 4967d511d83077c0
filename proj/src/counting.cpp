#include "genbound/counting.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "genbound/bounds.hpp"
#include "genbound/generation.hpp"
#include "genbound/strata.hpp"

namespace genbound {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

int matrix_size_of(const Algebra<Fq>& alg) {
  if (alg.preset != PresetKind::MatrixAlgebra)
    throw UsageError("this predicate requires a matrix preset");
  return alg.preset_param;
}

}  // namespace

CountPredicate CountPredicate::parse(const std::string& name, int i, int max_ext) {
  CountPredicate p;
  p.i = i;
  p.max_ext_degree = max_ext;
  if (name == "nongen") {
    p.kind = Kind::NonGen;
  } else if (name == "gen") {
    p.kind = Kind::Gen;
  } else if (name == "t2") {
    p.kind = Kind::CommutingSubspace;
  } else if (name == "xi") {
    p.kind = Kind::InvariantSubspace;
  } else if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
    p.kind = Kind::InvariantSubspace;
    p.i = name[1] - '0';
  } else {
    throw UsageError("unknown predicate: " + name +
                     " (expected nongen, gen, x<i>, or t2)");
  }
  return p;
}

std::string CountPredicate::name() const {
  switch (kind) {
    case Kind::NonGen: return "nongen";
    case Kind::Gen: return "gen";
    case Kind::CommutingSubspace: return "t2";
    case Kind::InvariantSubspace: return "x" + std::to_string(i);
  }
  return "?";
}

CountResult count_exhaustive(const Algebra<Fq>& alg, int r, const CountPredicate& pred,
                             int workers, const Budget& budget) {
  if (r < 0) throw UsageError("r must be >= 0");
  if (workers < 1) throw UsageError("workers must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  std::uint64_t q = alg.field.q();
  std::uint64_t total = checked_total(q, r * alg.n);

  std::uint64_t per_tuple = 1;
  int s = 0;
  if (pred.kind == CountPredicate::Kind::InvariantSubspace ||
      pred.kind == CountPredicate::Kind::CommutingSubspace) {
    s = matrix_size_of(alg);
    per_tuple = 4;  // coarse factor for the per-tuple subspace scans
  }
  if (total > budget.limit / per_tuple) throw BudgetError(total * per_tuple, budget.limit);

  int w = std::max(1, std::min<int>(workers, 64));
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(w), 0);
  Budget inner{UINT64_MAX};  // the top-level check above owns the budget

  auto work = [&](int wi) {
    std::uint64_t lo = total / static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(wi) +
                       std::min<std::uint64_t>(static_cast<std::uint64_t>(wi),
                                               total % static_cast<std::uint64_t>(w));
    std::uint64_t len = total / static_cast<std::uint64_t>(w) +
                        (static_cast<std::uint64_t>(wi) < total % static_cast<std::uint64_t>(w) ? 1 : 0);
    std::uint64_t cnt = 0;
    for (std::uint64_t idx = lo; idx < lo + len; ++idx) {
      Tuple<Fq> t = decode_tuple(q, r, alg.n, idx);
      bool hit = false;
      switch (pred.kind) {
        case CountPredicate::Kind::NonGen:
          hit = !generates(alg, t);
          break;
        case CountPredicate::Kind::Gen:
          hit = generates(alg, t);
          break;
        case CountPredicate::Kind::InvariantSubspace:
          hit = has_common_invariant_subspace(alg.field, tuple_to_matrices(t, s), pred.i,
                                              pred.max_ext_degree, inner);
          break;
        case CountPredicate::Kind::CommutingSubspace:
          hit = has_commuting_invariant_subspace(alg.field, tuple_to_matrices(t, s),
                                                 pred.max_ext_degree, inner);
          break;
      }
      if (hit) ++cnt;
    }
    partial[static_cast<std::size_t>(wi)] = cnt;
  };

  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < w; ++i) threads.emplace_back(work, i);
    for (auto& th : threads) th.join();
  }

  CountResult res;
  res.algebra = alg.name;
  res.q = q;
  res.r = r;
  res.predicate = pred.name();
  res.total = total;
  for (auto c : partial) res.count += c;
  res.workers = workers;
  res.elapsed_ms = ms_since(t0);
  return res;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t worker, std::uint64_t index) {
  key = splitmix64(splitmix64(splitmix64(seed) ^ worker) ^ index);
}

std::uint64_t CounterRng::next() { return splitmix64(key + 0xD1B54A32D192ED03ULL * ++ctr); }

std::uint64_t CounterRng::uniform(std::uint64_t q) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % q;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % q;
}

McResult monte_carlo(const Algebra<Fq>& alg, int r, std::uint64_t samples,
                     std::uint64_t seed, int workers) {
  if (samples == 0) throw UsageError("samples must be > 0");
  if (r < 0) throw UsageError("r must be >= 0");
  if (workers < 1) throw UsageError("workers must be >= 1");
  auto t0 = std::chrono::steady_clock::now();
  std::uint64_t q = alg.field.q();
  const std::uint64_t w = static_cast<std::uint64_t>(workers);

  std::vector<std::uint64_t> partial(static_cast<std::size_t>(w), 0);
  auto work = [&](std::uint64_t wi) {
    std::uint64_t cnt = 0;
    Tuple<Fq> t(static_cast<std::size_t>(r), Vec<Fq>(static_cast<std::size_t>(alg.n), 0));
    for (std::uint64_t local = 0;; ++local) {
      std::uint64_t global = local * w + wi;
      if (global >= samples) break;
      CounterRng rng(seed, wi, local);
      for (auto& v : t)
        for (auto& x : v) x = rng.uniform(q);
      if (!generates(alg, t)) ++cnt;
    }
    partial[static_cast<std::size_t>(wi)] = cnt;
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::uint64_t i = 0; i < w; ++i) threads.emplace_back(work, i);
    for (auto& th : threads) th.join();
  }

  McResult res;
  res.algebra = alg.name;
  res.q = q;
  res.r = r;
  res.samples = samples;
  res.seed = seed;
  res.workers = workers;
  for (auto c : partial) res.nongen_count += c;
  res.p_hat = static_cast<double>(res.nongen_count) / static_cast<double>(samples);
  // Wilson score interval at z = 1.96
  const double z = 1.96, n = static_cast<double>(samples), p = res.p_hat;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  res.wilson_lo = std::max(0.0, center - half);
  res.wilson_hi = std::min(1.0, center + half);
  res.elapsed_ms = ms_since(t0);
  return res;
}

CodimEstimate codim_exact_slope(const Algebra<Fq>& alg, int r,
                                const std::vector<CountResult>& counts) {
  if (counts.size() < 2) throw UsageError("slope needs counts at >= 2 distinct q");
  for (const auto& c : counts)
    if (c.r != counts.front().r || c.predicate != counts.front().predicate)
      throw UsageError("slope inputs must share one (r, predicate) pair");
  std::vector<CountResult> sorted = counts;
  std::sort(sorted.begin(), sorted.end(),
            [](const CountResult& a, const CountResult& b) { return a.q < b.q; });
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i].q == sorted[i + 1].q) throw UsageError("slope needs distinct q values");

  const CountResult& c1 = sorted[sorted.size() - 2];
  const CountResult& c2 = sorted[sorted.size() - 1];
  if (c1.count == 0 || c2.count == 0)
    throw UsageError("zero count makes the slope undefined");

  CodimEstimate est;
  est.method = "exact_slope";
  double slope = std::log(static_cast<double>(c2.count) / static_cast<double>(c1.count)) /
                 std::log(static_cast<double>(c2.q) / static_cast<double>(c1.q));
  est.c_hat = static_cast<double>(r * alg.n) - slope;
  est.c_lo = est.c_hi = est.c_hat;
  for (const auto& c : sorted) est.inputs.push_back({c.q, static_cast<double>(c.count), 0});
  est.note = "two-point slope from q=" + std::to_string(c1.q) + "," + std::to_string(c2.q);

  // sandwich check against the closed-form dimension, when the preset has one
  std::optional<bounds::CodimFormula> formula;
  int strata = 1, szexp = alg.n;
  switch (alg.preset) {
    case PresetKind::MatrixAlgebra:
      if (alg.involution == InvolutionKind::None) {
        formula = bounds::CodimFormula{bounds::CodimPreset::Matrix, alg.preset_param};
        strata = alg.preset_param - 1;
        szexp = alg.preset_param;
      }
      break;
    case PresetKind::ZeroModule:
      formula = bounds::CodimFormula{bounds::CodimPreset::Module, alg.preset_param};
      break;
    case PresetKind::SplitEtale:
      if (alg.with_unit)
        formula = bounds::CodimFormula{bounds::CodimPreset::Etale, alg.preset_param};
      break;
    case PresetKind::SplitOctonion:
      if (r >= 3) formula = bounds::CodimFormula{bounds::CodimPreset::Octonion, 8};
      break;
    default:
      break;
  }
  if (formula && r >= bounds::min_valid_r(*formula)) {
    long long dim = static_cast<long long>(r) * alg.n - bounds::codim_formula(*formula, r);
    unsigned __int128 cap = static_cast<unsigned __int128>(std::max(1, strata)) << szexp;
    bool ok = true;
    for (const auto& c : sorted) {
      unsigned __int128 qdim = 1;
      for (long long t = 0; t < dim; ++t) qdim *= c.q;
      if (static_cast<unsigned __int128>(c.count) < qdim ||
          static_cast<unsigned __int128>(c.count) > cap * qdim)
        ok = false;
    }
    est.sandwich_ok = ok;
    est.note += "; sandwich q^" + std::to_string(dim) + " <= N <= " +
                std::to_string(static_cast<std::uint64_t>(cap)) + " q^" + std::to_string(dim) +
                (ok ? " holds" : " FAILS");
  }
  return est;
}

CodimEstimate codim_from_mc(const McResult& at_q1, const McResult& at_q2) {
  const McResult& a = at_q1.q < at_q2.q ? at_q1 : at_q2;
  const McResult& b = at_q1.q < at_q2.q ? at_q2 : at_q1;
  if (a.q == b.q) throw UsageError("codim_from_mc needs two distinct q");
  if (a.nongen_count == 0 || b.nongen_count == 0)
    throw UsageError("zero p_hat makes the estimate undefined");
  CodimEstimate est;
  est.method = "monte_carlo";
  double lq = std::log(static_cast<double>(b.q) / static_cast<double>(a.q));
  est.c_hat = std::log(a.p_hat / b.p_hat) / lq;
  // worst-case interval endpoints through the same formula
  double lo1 = std::max(a.wilson_lo, 1e-300), hi1 = a.wilson_hi;
  double lo2 = std::max(b.wilson_lo, 1e-300), hi2 = b.wilson_hi;
  est.c_lo = std::log(lo1 / hi2) / lq;
  est.c_hi = std::log(hi1 / lo2) / lq;
  est.inputs.push_back({a.q, a.p_hat, a.samples});
  est.inputs.push_back({b.q, b.p_hat, b.samples});
  est.note = "Wilson 95% interval propagated";
  return est;
}

}  // namespace genbound
