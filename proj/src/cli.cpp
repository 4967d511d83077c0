#include "genbound/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "genbound/algebra_io.hpp"
#include "genbound/bounds.hpp"
#include "genbound/counting.hpp"
#include "genbound/generation.hpp"
#include "genbound/json_records.hpp"
#include "genbound/strata.hpp"

namespace genbound::cli {

namespace {

struct OutputOpts {
  std::string format = "json";  // json | csv
  bool canonical = false;
  std::string out_path;  // empty -> stdout
};

class Emitter {
 public:
  Emitter(const OutputOpts& opts, std::ostream& fallback) : opts_(opts) {
    if (!opts.out_path.empty()) {
      file_.open(opts.out_path);
      if (!file_) throw UsageError("cannot open output file: " + opts.out_path);
      out_ = &file_;
    } else {
      out_ = &fallback;
    }
  }

  void emit(Json rec) {
    if (opts_.canonical) strip_timing(rec);
    if (opts_.format == "csv") {
      emit_csv(rec);
    } else {
      (*out_) << rec.dump() << "\n";
    }
  }

 private:
  void emit_csv(const Json& rec) {
    std::vector<std::string> keys, vals;
    for (const auto& [k, v] : rec.items()) {
      keys.push_back(k);
      vals.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (keys != last_header_) {
      (*out_) << join(keys) << "\n";
      last_header_ = keys;
    }
    (*out_) << join(vals) << "\n";
  }

  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ",";
      bool quote = parts[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        out += parts[i];
      } else {
        out += '"';
        for (char c : parts[i]) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      }
    }
    return out;
  }

  OutputOpts opts_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
  std::vector<std::string> last_header_;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GENBOUND_BUDGET")) {
    char* end = nullptr;
    std::uint64_t v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw UsageError("GENBOUND_BUDGET must be a positive integer");
  }
  return 100'000'000ULL;
}

struct AlgebraOpts {
  std::string preset;
  std::string algebra_file;
  int s = 0;
  int n = 0;
  std::string involution = "orthogonal";
  bool no_unit = false;
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  int m = 1;
  bool rational = false;

  void add_to(CLI::App* cmd, bool field_only = false) {
    if (!field_only) {
      cmd->add_option("--preset", preset,
                      "zero_module | split_etale | matrix | matrix_involution | split_octonion");
      cmd->add_option("--algebra-file", algebra_file, "JSON algebra file");
      cmd->add_option("--s", s, "matrix size");
      cmd->add_option("--n", n, "module/etale rank");
      cmd->add_option("--involution", involution, "orthogonal | symplectic");
      cmd->add_flag("--no-unit", no_unit, "drop the unit op from the preset");
    }
    cmd->add_option("--q", q, "finite field size (prime power)");
    cmd->add_option("--p", p, "field characteristic");
    cmd->add_option("--m", m, "extension degree (with --p)");
    cmd->add_flag("--rational", rational, "work over Q");
  }

  FieldSpec field_spec() const {
    if (rational) {
      if (q || p) throw UsageError("--rational conflicts with --q/--p");
      return FieldSpec::rational();
    }
    if (q && p) throw UsageError("give either --q or --p/--m, not both");
    if (q) return FieldSpec::from_q(q);
    if (p) return m == 1 ? FieldSpec::prime(p) : FieldSpec::extension(p, m);
    throw UsageError("no field given (use --q, --p [--m], or --rational)");
  }

  Json config_json() const {
    Json j;
    if (!preset.empty()) j["preset"] = preset;
    if (!algebra_file.empty()) j["algebra_file"] = algebra_file;
    if (s) j["s"] = s;
    if (n) j["n"] = n;
    if (preset == "matrix_involution") j["involution"] = involution;
    if (no_unit) j["no_unit"] = true;
    if (rational)
      j["field"] = "rational";
    else if (q || p) {
      Json fj;
      FieldSpec spec = field_spec();
      fj["p"] = spec.p;
      fj["m"] = spec.m;
      j["field"] = fj;
    }
    return j;
  }

  template <class F>
  Algebra<F> build_preset(const F& f) const {
    if (preset == "zero_module") {
      if (n < 1) throw UsageError("zero_module needs --n");
      return zero_module(f, n);
    }
    if (preset == "split_etale") {
      if (n < 1) throw UsageError("split_etale needs --n");
      return split_etale(f, n, !no_unit);
    }
    if (preset == "matrix") {
      if (s < 1) throw UsageError("matrix needs --s");
      return matrix_algebra(f, s, !no_unit);
    }
    if (preset == "matrix_involution") {
      if (s < 1) throw UsageError("matrix_involution needs --s");
      InvolutionKind kind = involution == "symplectic" ? InvolutionKind::Symplectic
                          : involution == "orthogonal" ? InvolutionKind::Orthogonal
                                                       : InvolutionKind::None;
      return matrix_with_involution(f, s, kind, !no_unit);
    }
    if (preset == "split_octonion") return split_octonion(f);
    throw UsageError("unknown preset: " + preset);
  }

  /// Dispatches on the field kind; fn receives Algebra<Fq> or Algebra<QQ>.
  template <class Fn>
  int with_algebra(Fn&& fn) const {
    if (preset.empty() == algebra_file.empty())
      throw UsageError("give exactly one algebra source (--preset or --algebra-file)");
    if (!algebra_file.empty()) {
      std::ifstream in(algebra_file);
      if (!in) throw UsageError("cannot open algebra file: " + algebra_file);
      Json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        throw UsageError(std::string("malformed algebra file: ") + e.what());
      }
      if (!j.contains("field")) throw UsageError("algebra file: missing \"field\"");
      FieldSpec spec = field_spec_from_json(j["field"]);
      if (spec.is_rational()) {
        QQ f;
        return fn(algebra_from_json<QQ>(j, f));
      }
      Fq f = spec.make_fq();
      return fn(algebra_from_json<Fq>(j, f));
    }
    FieldSpec spec = field_spec();
    if (spec.is_rational()) {
      QQ f;
      return fn(build_preset<QQ>(f));
    }
    Fq f = spec.make_fq();
    return fn(build_preset<Fq>(f));
  }
};

template <class F>
typename F::Elem parse_scalar(const F& f, const Json& v) {
  if (v.is_number_integer()) return f.from_int(v.get<long long>());
  if (v.is_string()) {
    Rational r = QQ::parse(v.get<std::string>());
    if constexpr (std::is_same_v<F, QQ>) {
      return r;
    } else {
      if (r.get_den() != 1) throw UsageError("non-integer value over a finite field");
      return f.from_int(static_cast<long long>(r.get_num().get_si()));
    }
  }
  if constexpr (std::is_same_v<F, Fq>) {
    if (v.is_array()) {
      // polynomial digits c_0..c_{m-1}
      if (static_cast<int>(v.size()) > f.degree())
        throw UsageError("digit vector longer than the extension degree");
      typename F::Elem out = 0;
      std::uint64_t mult = 1;
      for (const auto& d : v) {
        out += f.from_int(d.get<long long>()) * mult;
        mult *= f.p();
      }
      return out;
    }
  }
  throw UsageError("bad scalar in tuple (expected integer, string, or digit array)");
}

/// Tuple entries: flat arrays of n scalars, or (for matrix presets) arrays of
/// s rows of s scalars which are flattened row-major.
template <class F>
Tuple<F> parse_tuple(const Json& j, const F& f, int n) {
  if (!j.is_array()) throw UsageError("tuple must be a JSON array of elements");
  Tuple<F> out;
  for (const auto& entry : j) {
    if (!entry.is_array()) throw UsageError("tuple entry must be an array");
    Json flat = Json::array();
    if (static_cast<int>(entry.size()) != n && !entry.empty() && entry[0].is_array()) {
      for (const auto& row : entry)
        for (const auto& x : row) flat.push_back(x);
    } else {
      flat = entry;
    }
    if (static_cast<int>(flat.size()) != n)
      throw UsageError("tuple entry has " + std::to_string(flat.size()) +
                       " coordinates, expected " + std::to_string(n));
    Vec<F> v;
    v.reserve(static_cast<std::size_t>(n));
    for (const auto& x : flat) v.push_back(parse_scalar(f, x));
    out.push_back(std::move(v));
  }
  return out;
}

Json read_json_input(const std::string& path) {
  Json j;
  try {
    if (path.empty() || path == "-") {
      std::cin >> j;
    } else {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open tuple file: " + path);
      in >> j;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("malformed tuple JSON: ") + e.what());
  }
  return j;
}

std::vector<std::uint64_t> parse_q_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::strtoull(item.c_str(), nullptr, 10));
    if (out.back() < 2) throw UsageError("bad q in list: " + item);
  }
  if (out.empty()) throw UsageError("empty q list");
  return out;
}

// "5" or "0..10"; also tolerates an "s=" / "d=" prefix.
std::pair<long long, long long> parse_range(std::string s) {
  auto eq = s.find('=');
  if (eq != std::string::npos) s = s.substr(eq + 1);
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      long long v = std::stoll(s);
      return {v, v};
    }
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("bad range: " + s);
  }
}

std::vector<Fq::Elem> parse_csv_elems(const Fq& f, const std::string& s) {
  std::vector<Fq::Elem> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(f.from_int(std::stoll(item)));
  }
  return out;
}

int run_inner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"generator-counting toolkit for finite-dimensional multialgebras"};
  app.require_subcommand(1);

  OutputOpts output;
  std::uint64_t budget_limit = default_budget();

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--format", output.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--canonical", output.canonical, "strip timing fields for golden-file runs");
    cmd->add_option("--out", output.out_path, "output path (default stdout)");
    cmd->add_option("--budget", budget_limit, "enumeration budget in closure evaluations");
  };

  // ---- gen-test ----
  auto* gen_test = app.add_subcommand("gen-test", "does a tuple generate the algebra?");
  AlgebraOpts gt_alg;
  gt_alg.add_to(gen_test);
  std::string gt_tuple_path;
  gen_test->add_option("--tuple", gt_tuple_path, "tuple JSON file ('-' or omit for stdin)");
  add_output(gen_test);

  // ---- gen-min ----
  auto* gen_min = app.add_subcommand("gen-min", "minimal number of generators");
  AlgebraOpts gm_alg;
  gm_alg.add_to(gen_min);
  int gm_rmax = 4, gm_trials = 16, gm_workers = 1;
  std::uint64_t gm_seed = 0;
  std::string gm_mode = "auto";
  gen_min->add_option("--r-max", gm_rmax, "largest r to try");
  gen_min->add_option("--mode", gm_mode, "exhaustive | randomized | auto")
      ->check(CLI::IsMember({"exhaustive", "randomized", "auto"}));
  gen_min->add_option("--trials", gm_trials, "random trials per r (randomized mode)");
  gen_min->add_option("--seed", gm_seed, "RNG seed");
  gen_min->add_option("--workers", gm_workers, "worker threads");
  add_output(gen_min);

  // ---- nmax ----
  auto* nmax_cmd = app.add_subcommand("nmax", "maximal proper op-closed subspace dimension");
  AlgebraOpts nm_alg;
  nm_alg.add_to(nmax_cmd);
  std::string nm_mode = "formula";
  nmax_cmd->add_option("--mode", nm_mode, "exhaustive | formula")
      ->check(CLI::IsMember({"exhaustive", "formula"}));
  add_output(nmax_cmd);

  // ---- count ----
  auto* count_cmd = app.add_subcommand("count", "exact point counts over a finite field");
  AlgebraOpts ct_alg;
  ct_alg.add_to(count_cmd);
  int ct_r = 2, ct_workers = 1, ct_i = 1, ct_maxext = 0;
  std::string ct_pred = "nongen";
  count_cmd->add_option("--r", ct_r, "tuple length");
  count_cmd->add_option("--predicate", ct_pred, "nongen | gen | x<i> | t2");
  count_cmd->add_option("--i", ct_i, "invariant-subspace dimension for the x predicate");
  count_cmd->add_option("--max-ext", ct_maxext, "extension-degree bound (default s)");
  count_cmd->add_option("--workers", ct_workers, "worker threads");
  add_output(count_cmd);

  // ---- estimate ----
  auto* est_cmd = app.add_subcommand("estimate", "Monte-Carlo non-generation estimates");
  AlgebraOpts es_alg;
  es_alg.add_to(est_cmd);
  int es_r = 3, es_workers = 1;
  std::uint64_t es_samples = 100000, es_seed = 0;
  std::string es_qlist;
  est_cmd->add_option("--q-list", es_qlist, "one or two field sizes, e.g. 11,101");
  est_cmd->add_option("--r", es_r, "tuple length");
  est_cmd->add_option("--samples", es_samples, "samples per field");
  est_cmd->add_option("--seed", es_seed, "RNG seed");
  est_cmd->add_option("--workers", es_workers, "worker threads");
  add_output(est_cmd);

  // ---- slope ----
  auto* slope_cmd = app.add_subcommand("slope", "codimension slope from exact counts");
  AlgebraOpts sl_alg;
  sl_alg.add_to(slope_cmd);
  int sl_r = 2, sl_workers = 1;
  std::string sl_qlist = "2,3", sl_pred = "nongen";
  slope_cmd->add_option("--q-list", sl_qlist, "field sizes, e.g. 2,3,4,5");
  slope_cmd->add_option("--r", sl_r, "tuple length");
  slope_cmd->add_option("--predicate", sl_pred, "predicate to count");
  slope_cmd->add_option("--workers", sl_workers, "worker threads");
  add_output(slope_cmd);

  // ---- strata ----
  auto* strata_cmd = app.add_subcommand("strata", "invariant-subspace strata and slice checks");
  AlgebraOpts st_alg;
  st_alg.add_to(strata_cmd, /*field_only=*/true);
  std::string st_check = "invariant-subspace";
  int st_s = 3, st_r = 2, st_i = 1, st_maxext = 0, st_n = 2, st_span = 1;
  std::string st_tuple_path, st_a, st_lambdas;
  strata_cmd->add_option("--check", st_check,
                         "invariant-subspace | commuting-subspace | slice | rank | incidence");
  strata_cmd->add_option("--s", st_s, "matrix size");
  strata_cmd->add_option("--r", st_r, "tuple length");
  strata_cmd->add_option("--i", st_i, "invariant-subspace dimension");
  strata_cmd->add_option("--max-ext", st_maxext, "extension-degree bound (default s)");
  strata_cmd->add_option("--tuple", st_tuple_path, "tuple JSON file ('-' for stdin)");
  strata_cmd->add_option("--n", st_n, "ambient dimension (rank check)");
  strata_cmd->add_option("--span-dim", st_span, "exact span dimension (rank check)");
  strata_cmd->add_option("--a", st_a, "slice matrix a, row-major CSV (default [[0,1],[1,1]])");
  strata_cmd->add_option("--lambdas", st_lambdas, "slice diagonal values, CSV (default 1,2)");
  add_output(strata_cmd);

  // ---- bounds ----
  auto* bounds_cmd = app.add_subcommand("bounds", "generator-bound calculator");
  std::string bd_d = "0";
  std::string bd_azumaya, bd_module, bd_etale, bd_involution, bd_generic, bd_main3;
  bool bd_octonion = false;
  bounds_cmd->add_option("--d", bd_d, "Krull dimension or range, e.g. 5 or 0..10");
  bounds_cmd->add_option("--azumaya", bd_azumaya, "degree s or range (accepts s=3)");
  bounds_cmd->add_flag("--octonion", bd_octonion, "octonion algebras");
  bounds_cmd->add_option("--module", bd_module, "projective module rank n");
  bounds_cmd->add_option("--etale", bd_etale, "etale algebra rank n");
  bounds_cmd->add_option("--involution", bd_involution, "orthogonal:S or symplectic:S");
  bounds_cmd->add_option("--generic", bd_generic, "n,nmax,genk");
  bounds_cmd->add_option("--main3", bd_main3, "n,dimG,rho");
  add_output(bounds_cmd);

  // ---- sextonion ----
  auto* sext_cmd = app.add_subcommand("sextonion", "find the 6-dimensional maximal subalgebra");
  AlgebraOpts sx_alg;
  sx_alg.add_to(sext_cmd, /*field_only=*/true);
  std::uint64_t sx_seed = 0;
  sext_cmd->add_option("--seed", sx_seed, "RNG seed");
  add_output(sext_cmd);

  // parse
  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    int code = app.exit(e, dummy, dummy);
    if (code == 0) {
      out << dummy.str();
      return 0;
    }
    err << dummy.str();
    return 1;
  }

  const Budget budget{budget_limit};
  Emitter emitter(output, out);

  if (gen_test->parsed()) {
    return gt_alg.with_algebra([&](const auto& alg) {
      // read the tuple only once the algebra source has validated, so usage
      // errors never leave the process waiting on stdin
      Json tj = read_json_input(gt_tuple_path);
      auto tuple = parse_tuple(tj, alg.field, alg.n);
      auto res = subalgebra_closure(alg, tuple);
      Json rec;
      rec["record"] = "gen_test";
      rec["config"] = gt_alg.config_json();
      rec["algebra"] = alg.name;
      rec["r"] = tuple.size();
      rec["generates"] = res.generates;
      rec["dim"] = res.dim;
      rec["witness_depth"] = res.witness_depth;
      emitter.emit(std::move(rec));
      return 0;
    });
  }

  if (gen_min->parsed()) {
    return gm_alg.with_algebra([&](const auto& alg) {
      using F = std::decay_t<decltype(alg.field)>;
      Json rec;
      rec["record"] = "gen_min";
      rec["config"] = gm_alg.config_json();
      rec["algebra"] = alg.name;
      rec["r_max"] = gm_rmax;
      if constexpr (std::is_same_v<F, QQ>) {
        if (gm_mode == "exhaustive")
          throw UsageError("exhaustive search needs a finite field");
        auto res = min_generators_randomized(alg, gm_rmax, gm_trials, gm_seed);
        rec["mode"] = "randomized";
        rec["status"] = "probabilistic";
        rec["seed"] = gm_seed;
        rec["trials"] = gm_trials;
        if (res.r) {
          rec["r"] = *res.r;
          rec["witness"] = tuple_json(alg.field, res.witness);
        } else {
          rec["r"] = nullptr;
        }
      } else {
        if (gm_mode == "randomized")
          throw UsageError("randomized search runs over Q (use --rational)");
        auto res = min_generators_exhaustive(alg, gm_rmax, budget, gm_workers);
        rec["mode"] = "exhaustive";
        rec["status"] = "exact";
        rec["q"] = alg.field.q();
        rec["tuples_scanned"] = res.tuples_scanned;
        if (res.r) {
          rec["r"] = *res.r;
          rec["witness"] = tuple_json(alg.field, res.witness);
        } else {
          rec["r"] = nullptr;
        }
      }
      emitter.emit(std::move(rec));
      return 0;
    });
  }

  if (nmax_cmd->parsed()) {
    return nm_alg.with_algebra([&](const auto& alg) {
      using F = std::decay_t<decltype(alg.field)>;
      Json rec;
      rec["record"] = "nmax";
      rec["config"] = nm_alg.config_json();
      rec["algebra"] = alg.name;
      if (nm_mode == "exhaustive") {
        if constexpr (std::is_same_v<F, QQ>) {
          throw UsageError("exhaustive nmax needs a finite field");
        } else {
          auto res = nmax_exhaustive(alg, budget);
          rec["mode"] = "exhaustive";
          rec["status"] = "exact_over_this_field";
          rec["value"] = res.value;
          rec["certificate"] = span_json(res.certificate);
        }
      } else {
        auto res = nmax_formula(alg);
        rec["mode"] = "formula";
        rec["status"] = "formula";
        rec["value"] = res.value;
        rec["certificate"] = span_json(res.certificate);
      }
      emitter.emit(std::move(rec));
      return 0;
    });
  }

  if (count_cmd->parsed()) {
    return ct_alg.with_algebra([&](const auto& alg) {
      using F = std::decay_t<decltype(alg.field)>;
      if constexpr (std::is_same_v<F, QQ>) {
        throw UsageError("exact counting needs a finite field");
        return 1;
      } else {
        auto pred = CountPredicate::parse(ct_pred, ct_i, ct_maxext);
        auto res = count_exhaustive(alg, ct_r, pred, ct_workers, budget);
        Json rec = record_json(res);
        rec["config"] = ct_alg.config_json();
        emitter.emit(std::move(rec));
        return 0;
      }
    });
  }

  if (est_cmd->parsed()) {
    if (es_qlist.empty()) {
      return es_alg.with_algebra([&](const auto& alg) {
        using F = std::decay_t<decltype(alg.field)>;
        if constexpr (std::is_same_v<F, QQ>) {
          throw UsageError("Monte-Carlo estimation needs a finite field");
          return 1;
        } else {
          auto res = monte_carlo(alg, es_r, es_samples, es_seed, es_workers);
          Json rec = record_json(res);
          rec["config"] = es_alg.config_json();
          emitter.emit(std::move(rec));
          return 0;
        }
      });
    }
    auto qs = parse_q_list(es_qlist);
    if (qs.size() > 2) throw UsageError("estimate takes at most two q values");
    if (es_alg.preset.empty()) throw UsageError("estimate with --q-list needs --preset");
    std::vector<McResult> results;
    for (auto qv : qs) {
      AlgebraOpts per = es_alg;
      per.q = qv;
      per.p = 0;
      per.with_algebra([&](const auto& alg) {
        using F = std::decay_t<decltype(alg.field)>;
        if constexpr (std::is_same_v<F, QQ>) {
          throw UsageError("Monte-Carlo estimation needs a finite field");
          return 1;
        } else {
          results.push_back(monte_carlo(alg, es_r, es_samples, es_seed, es_workers));
          return 0;
        }
      });
      Json rec = record_json(results.back());
      rec["config"] = es_alg.config_json();
      rec["config"]["q"] = qv;
      emitter.emit(std::move(rec));
    }
    if (results.size() == 2) {
      Json rec = record_json(codim_from_mc(results[0], results[1]));
      rec["config"] = es_alg.config_json();
      rec["config"]["q_list"] = es_qlist;
      emitter.emit(std::move(rec));
    }
    return 0;
  }

  if (slope_cmd->parsed()) {
    auto qs = parse_q_list(sl_qlist);
    if (qs.size() < 2) throw UsageError("slope needs at least two q values");
    if (sl_alg.preset.empty()) throw UsageError("slope needs --preset");
    std::vector<CountResult> counts;
    auto pred = CountPredicate::parse(sl_pred);
    int ret = 0;
    for (auto qv : qs) {
      AlgebraOpts per = sl_alg;
      per.q = qv;
      per.p = 0;
      ret = per.with_algebra([&](const auto& alg) {
        using F = std::decay_t<decltype(alg.field)>;
        if constexpr (std::is_same_v<F, QQ>) {
          throw UsageError("slope estimation needs finite fields");
          return 1;
        } else {
          counts.push_back(count_exhaustive(alg, sl_r, pred, sl_workers, budget));
          Json rec = record_json(counts.back());
          rec["config"] = sl_alg.config_json();
          rec["config"]["q"] = qv;
          emitter.emit(std::move(rec));
          return 0;
        }
      });
      if (ret != 0) return ret;
    }
    // rebuild one algebra for the preset metadata
    AlgebraOpts per = sl_alg;
    per.q = qs.back();
    per.p = 0;
    return per.with_algebra([&](const auto& alg) {
      using F = std::decay_t<decltype(alg.field)>;
      if constexpr (std::is_same_v<F, QQ>) {
        return 1;
      } else {
        Json rec = record_json(codim_exact_slope(alg, sl_r, counts));
        rec["config"] = sl_alg.config_json();
        rec["config"]["q_list"] = sl_qlist;
        emitter.emit(std::move(rec));
        return 0;
      }
    });
  }

  if (strata_cmd->parsed()) {
    FieldSpec spec = st_alg.field_spec();
    if (spec.is_rational()) throw UsageError("strata checks need a finite field");
    Fq f = spec.make_fq();
    Json rec;
    rec["record"] = "strata";
    rec["config"] = st_alg.config_json();
    rec["config"]["check"] = st_check;
    if (st_check == "invariant-subspace" || st_check == "commuting-subspace") {
      Json tj = read_json_input(st_tuple_path);
      auto tuple = parse_tuple(tj, f, st_s * st_s);
      MatTuple mats = tuple_to_matrices(tuple, st_s);
      rec["s"] = st_s;
      rec["r"] = mats.size();
      rec["max_ext_degree"] = st_maxext > 0 ? st_maxext : st_s;
      if (st_check == "invariant-subspace") {
        rec["i"] = st_i;
        rec["member"] = has_common_invariant_subspace(f, mats, st_i, st_maxext, budget);
      } else {
        rec["member"] = has_commuting_invariant_subspace(f, mats, st_maxext, budget);
      }
    } else if (st_check == "slice") {
      SliceSpec slice;
      if (st_a.empty() && st_lambdas.empty() && st_s == 3 && f.q() == 5) {
        slice = SliceSpec::default_f5(st_r);
      } else {
        slice.field = f;
        slice.s = st_s;
        slice.r = st_r;
        auto a_vals = parse_csv_elems(f, st_a);
        if (static_cast<int>(a_vals.size()) != (st_s - 1) * (st_s - 1))
          throw UsageError("--a must list (s-1)^2 values");
        slice.a = Matrix<Fq>(st_s - 1, st_s - 1);
        slice.a.a = a_vals;
        slice.lambdas = parse_csv_elems(f, st_lambdas);
        slice.validate();
      }
      auto hits = slice_invariant_line_hits(slice, st_maxext, budget);
      rec["s"] = slice.s;
      rec["r"] = slice.r;
      rec["q"] = f.q();
      Json hj = Json::array();
      for (const auto& h : hits) {
        Json one;
        one["x"] = h.x;
        one["in_commuting_stratum"] = h.in_commuting_stratum;
        hj.push_back(std::move(one));
      }
      rec["hits"] = std::move(hj);
    } else if (st_check == "rank") {
      rec["n"] = st_n;
      rec["r"] = st_r;
      rec["span_dim"] = st_span;
      rec["q"] = f.q();
      rec["count"] = u128_str(rank_stratum_count(f.q(), st_n, st_r, st_span));
    } else if (st_check == "incidence") {
      auto res = incidence_count(f, st_s, st_r, st_i, budget);
      rec["s"] = st_s;
      rec["r"] = st_r;
      rec["i"] = st_i;
      rec["q"] = f.q();
      rec["formula"] = u128_str(res.formula);
      if (res.enumerated)
        rec["enumerated"] = *res.enumerated;
      else
        rec["enumerated"] = nullptr;
    } else {
      throw UsageError("unknown --check: " + st_check);
    }
    emitter.emit(std::move(rec));
    return 0;
  }

  if (bounds_cmd->parsed()) {
    auto [d_lo, d_hi] = parse_range(bd_d);
    if (d_lo < 0 || d_hi < d_lo) throw UsageError("bad --d range");
    std::vector<std::pair<bounds::BoundQuery, std::string>> queries;
    if (!bd_azumaya.empty()) {
      auto [s_lo, s_hi] = parse_range(bd_azumaya);
      for (long long s = s_lo; s <= s_hi; ++s) {
        bounds::BoundQuery q;
        q.kind = bounds::BoundQuery::Kind::Azumaya;
        q.s = s;
        queries.push_back({q, "azumaya(s=" + std::to_string(s) + ")"});
      }
    }
    if (bd_octonion) {
      bounds::BoundQuery q;
      q.kind = bounds::BoundQuery::Kind::Octonion;
      queries.push_back({q, "octonion"});
    }
    if (!bd_module.empty()) {
      auto [n_lo, n_hi] = parse_range(bd_module);
      for (long long n = n_lo; n <= n_hi; ++n) {
        bounds::BoundQuery q;
        q.kind = bounds::BoundQuery::Kind::Module;
        q.n = n;
        queries.push_back({q, "module(n=" + std::to_string(n) + ")"});
      }
    }
    if (!bd_etale.empty()) {
      auto [n_lo, n_hi] = parse_range(bd_etale);
      for (long long n = n_lo; n <= n_hi; ++n) {
        bounds::BoundQuery q;
        q.kind = bounds::BoundQuery::Kind::Etale;
        q.n = n;
        queries.push_back({q, "etale(n=" + std::to_string(n) + ")"});
      }
    }
    if (!bd_involution.empty()) {
      auto colon = bd_involution.find(':');
      if (colon == std::string::npos) throw UsageError("--involution expects kind:s");
      std::string kind = bd_involution.substr(0, colon);
      bounds::BoundQuery q;
      q.kind = bounds::BoundQuery::Kind::Involution;
      q.s = std::stoll(bd_involution.substr(colon + 1));
      if (kind == "orthogonal")
        q.inv_kind = bounds::InvKind::Orthogonal;
      else if (kind == "symplectic")
        q.inv_kind = bounds::InvKind::Symplectic;
      else
        throw UsageError("--involution kind must be orthogonal or symplectic");
      queries.push_back({q, bd_involution});
    }
    if (!bd_generic.empty()) {
      bounds::BoundQuery q;
      q.kind = bounds::BoundQuery::Kind::Generic;
      if (std::sscanf(bd_generic.c_str(), "%lld,%lld,%lld", &q.n, &q.n_max, &q.gen_k) != 3)
        throw UsageError("--generic expects n,nmax,genk");
      queries.push_back({q, "generic(" + bd_generic + ")"});
    }
    if (!bd_main3.empty()) {
      bounds::BoundQuery q;
      q.kind = bounds::BoundQuery::Kind::Main3;
      if (std::sscanf(bd_main3.c_str(), "%lld,%lld,%lld", &q.n, &q.dim_g, &q.rho) != 3)
        throw UsageError("--main3 expects n,dimG,rho");
      queries.push_back({q, "main3(" + bd_main3 + ")"});
    }
    if (queries.empty()) throw UsageError("no bound descriptor given");
    for (const auto& [query, label] : queries) {
      for (long long d = d_lo; d <= d_hi; ++d) {
        auto res = bounds::evaluate(query, d);
        Json rec;
        rec["record"] = "bounds";
        rec["config"] = Json{{"descriptor", label}, {"d_range", bd_d}};
        rec["descriptor"] = label;
        rec["d"] = d;
        Json ups = Json::array(), lows = Json::array();
        for (const auto& b : res.uppers) {
          Json bj;
          bj["name"] = b.name;
          bj["value"] = b.value;
          if (!b.note.empty()) bj["note"] = b.note;
          ups.push_back(std::move(bj));
        }
        for (const auto& b : res.lowers) {
          Json bj;
          bj["name"] = b.name;
          bj["value"] = b.value;
          if (!b.note.empty()) bj["note"] = b.note;
          lows.push_back(std::move(bj));
        }
        rec["upper"] = std::move(ups);
        rec["lower"] = std::move(lows);
        emitter.emit(std::move(rec));
      }
    }
    return 0;
  }

  if (sext_cmd->parsed()) {
    FieldSpec spec = sx_alg.field_spec();
    Json rec;
    rec["record"] = "sextonion";
    rec["config"] = sx_alg.config_json();
    rec["config"]["seed"] = sx_seed;
    if (spec.is_rational()) {
      QQ f;
      auto alg = split_octonion(f);
      auto res = find_sextonion(alg, sx_seed);
      rec["basis"] = span_json(res.basis);
      rec["generators"] = tuple_json(f, res.generators);
    } else {
      Fq f = spec.make_fq();
      auto alg = split_octonion(f);
      auto res = find_sextonion(alg, sx_seed);
      rec["basis"] = span_json(res.basis);
      rec["generators"] = tuple_json(f, res.generators);
    }
    emitter.emit(std::move(rec));
    return 0;
  }

  throw UsageError("no subcommand given");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_inner(args, out, err);
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace genbound::cli
