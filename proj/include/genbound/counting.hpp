#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genbound/algebra.hpp"
#include "genbound/errors.hpp"

namespace genbound {

/// Predicate evaluated per tuple during counting runs.
struct CountPredicate {
  enum class Kind { NonGen, Gen, InvariantSubspace, CommutingSubspace };
  Kind kind = Kind::NonGen;
  int i = 1;               // invariant-subspace dimension
  int max_ext_degree = 0;  // 0 -> default (matrix size s)

  static CountPredicate parse(const std::string& name, int i = 1, int max_ext = 0);
  std::string name() const;
};

struct CountResult {
  std::string algebra;
  std::uint64_t q = 0;
  int r = 0;
  std::string predicate;
  std::uint64_t count = 0;
  std::uint64_t total = 0;
  double elapsed_ms = 0;
  int workers = 1;
};

/// Exact count of r-tuples satisfying the predicate, enumerating all q^{rn}
/// tuples in lexicographic order.  The index range is partitioned across
/// workers and reduced by exact addition, so the result is identical for any
/// worker count.
CountResult count_exhaustive(const Algebra<Fq>& alg, int r, const CountPredicate& pred,
                             int workers, const Budget& budget);

/// Deterministic counter-based generator: the stream for (seed, worker,
/// index) is fixed, so runs are bit-reproducible for a given seed and worker
/// count regardless of thread scheduling.
struct CounterRng {
  std::uint64_t key;
  std::uint64_t ctr = 0;

  CounterRng(std::uint64_t seed, std::uint64_t worker, std::uint64_t index);
  std::uint64_t next();
  /// Uniform in [0, q) by rejection, exactly unbiased.
  std::uint64_t uniform(std::uint64_t q);
};

struct McResult {
  std::string algebra;
  std::uint64_t q = 0;
  int r = 0;
  std::uint64_t samples = 0;
  std::uint64_t nongen_count = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  double p_hat = 0;
  double wilson_lo = 0;
  double wilson_hi = 0;
  double elapsed_ms = 0;
};

/// Monte-Carlo estimate of the non-generation probability from uniform
/// i.i.d. tuples.  Logical worker w = index mod workers owns sample index,
/// so the estimate depends on (seed, samples, workers) only.
McResult monte_carlo(const Algebra<Fq>& alg, int r, std::uint64_t samples,
                     std::uint64_t seed, int workers);

struct CodimInput {
  std::uint64_t q = 0;
  double value = 0;           // count or p_hat
  std::uint64_t samples = 0;  // 0 for exact counts
};

struct CodimEstimate {
  std::string method;  // "exact_slope" | "monte_carlo"
  double c_hat = 0;
  double c_lo = 0;  // interval endpoints (monte_carlo only; equal to c_hat otherwise)
  double c_hi = 0;
  std::vector<CodimInput> inputs;
  std::string note;
  std::optional<bool> sandwich_ok;
};

/// Two-point slope estimate of the codimension of the non-generating locus
/// from exact counts at several q: c_hat = rn - log(N_2/N_1)/log(q_2/q_1)
/// using the two largest q.  For presets with a known codimension formula,
/// also checks the sandwich q^dim <= N <= C q^dim with C = (#strata) 2^s.
CodimEstimate codim_exact_slope(const Algebra<Fq>& alg, int r,
                                const std::vector<CountResult>& counts);

/// Codimension from two Monte-Carlo estimates at q_1 < q_2:
/// c_hat = log(p_1/p_2)/log(q_2/q_1), with the Wilson interval endpoints
/// propagated through the same formula.
CodimEstimate codim_from_mc(const McResult& at_q1, const McResult& at_q2);

}  // namespace genbound
