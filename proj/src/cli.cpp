#include "treeshift/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "treeshift/composition.hpp"
#include "treeshift/construct.hpp"
#include "treeshift/report.hpp"

namespace treeshift {
namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string q = "1/4", a = "1", t = "1";
  std::string kappa = "2";  // nonnegative integer or "inf"
  long K = 12;              // materialized atom window
  long N = 6;               // moment horizon 2N+1
  long depth = 4;           // composition truncation depth
  long J = 20;              // slow-growth truncation
  unsigned long seed = 1;
  unsigned precision = 256;
  std::string regime = "exact";
  std::string out_dir;
  std::string gamma_minus1;  // classify candidate; empty = use gamma_0
  long batch = 20;           // composition random-vector batch
};

Scalar sqrt_rational(const Scalar& q) {
  using boost::multiprecision::mpz_int;
  const Rational& r = q.rat();
  if (r <= 0) throw std::invalid_argument("q must be positive");
  mpz_int num = boost::multiprecision::numerator(r);
  mpz_int den = boost::multiprecision::denominator(r);
  mpz_int sn = sqrt(num), sd = sqrt(den);
  if (sn * sn != num || sd * sd != den)
    throw std::invalid_argument("exact regime requires q to be the square of a rational");
  return Scalar(Rational(sn, sd));
}

std::optional<long> parse_kappa(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::nullopt;
  size_t pos = 0;
  long k = std::stol(s, &pos);
  if (pos != s.size() || k < 0) throw std::invalid_argument("kappa must be >= 0 or 'inf'");
  return k;
}

/// Collects per-command output: text to the stream, JSON/CSV to files when an
/// output directory is configured.
struct Emitter {
  std::ostream& out;
  std::string out_dir;
  json report;

  void section(const std::string& title) { out << "\n== " << title << " ==\n"; }
  void line(const std::string& s) { out << s << '\n'; }
  void table(const TextTable& t, const std::string& csv_name) {
    out << t.str();
    if (!out_dir.empty()) write_file(out_dir + "/" + csv_name + ".csv", t.csv());
  }
  void finish(const std::string& name) {
    if (!out_dir.empty()) write_file(out_dir + "/" + name + ".json", report.dump(2) + "\n");
  }
};

// Text tables abbreviate unwieldy exact values; the JSON reports keep the
// full strings.
std::string short_str(const Scalar& s) {
  std::string r = s.str();
  if (r.size() <= 32) return r;
  std::ostringstream os;
  os.precision(12);
  os << "~" << s.to_double();
  return os.str();
}

std::string iv_str(const BoundedSum& b) {
  if (b.is_point()) return short_str(b.partial());
  return "[" + short_str(b.lower()) + ", " + short_str(b.upper()) + "]";
}

MainExample main_example_from(const RunConfig& cfg) {
  Scalar q = Scalar::parse(cfg.q, Regime::exact);
  Scalar a = Scalar::parse(cfg.a, Regime::exact);
  Scalar t = Scalar::parse(cfg.t, Regime::exact);
  return make_main_example(sqrt_rational(q), a, t, parse_kappa(cfg.kappa), cfg.K);
}

/// Sample vertices for per-vertex tables: the branching vertex, the stems in
/// the tree (root excluded), and a few branch positions.
std::vector<VertexId> sample_vertices(const std::optional<long>& kappa, long max_i) {
  std::vector<VertexId> vs = {VertexId::neg(0)};
  long stem_top = kappa ? *kappa - 1 : 3;
  for (long k = 1; k <= stem_top; ++k) vs.push_back(VertexId::neg(k));
  for (long i = 1; i <= std::min<long>(max_i, 3); ++i)
    for (long j : {1, 2}) vs.push_back(VertexId::br(i, j));
  return vs;
}

MomentSequence basis_moments(const WeightedShift& S, const VertexId& u, long horizon) {
  std::map<long, BoundedSum> m;
  bool exact = S.weight_sq(VertexId::br(1, 2)).coeff.partial().is_exact();
  m.emplace(0, BoundedSum(exact ? Scalar(1) : Scalar(Real(1))));
  for (long n = 1; n <= horizon; ++n) m.emplace(n, S.norm_sq_power_basis(u, n));
  return MomentSequence(std::move(m), true);
}

std::vector<FiniteVector> random_vectors(const std::vector<VertexId>& pool, long count,
                                         unsigned long seed) {
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::uniform_int_distribution<int> d(1, 9);
  std::uniform_int_distribution<size_t> pick(0, pool.empty() ? 0 : pool.size() - 1);
  std::vector<FiniteVector> out;
  for (long t = 0; t < count; ++t) {
    FiniteVector f;
    for (int s = 0; s < 5; ++s)
      f.set(pool[pick(rng)], Scalar::rational(d(rng) - 5, d(rng)));
    out.push_back(std::move(f));
  }
  return out;
}

int cmd_verify_main(const RunConfig& cfg, Emitter& em) {
  MainExample ex = main_example_from(cfg);
  std::vector<std::string> mismatches;
  std::vector<VertexId> vs = sample_vertices(ex.kappa, 2 * ex.K + 1);
  em.report["instance"] = {{"q", cfg.q}, {"a", cfg.a}, {"t", cfg.t}, {"kappa", cfg.kappa},
                           {"K", ex.K}, {"cert_window", ex.cert_window}};

  em.section("moment table ||S^n e_u||^2");
  TextTable mt({"vertex", "n", "value"});
  json jm = json::array();
  for (const auto& u : vs)
    for (long n = 0; n <= 2 * cfg.N; ++n) {
      BoundedSum v = n == 0 ? BoundedSum(Scalar(1)) : ex.shift.norm_sq_power_basis(u, n);
      mt.add_row({u.str(), std::to_string(n), iv_str(v)});
      jm.push_back({{"vertex", u.str()}, {"n", n}, {"value", interval_json(v)}});
    }
  em.table(mt, "moments");
  em.report["moments"] = jm;

  em.section("Stieltjes finite-order positivity");
  long n_max = cfg.N - 1;
  json js = json::array();
  for (const auto& u : vs) {
    PositivityReport pr = stieltjes_check(basis_moments(ex.shift, u, 2 * cfg.N), n_max);
    bool ok = pr.verdict == PositivityReport::Verdict::consistent;
    em.line("  " + u.str() + ": " + (ok ? "consistent" : "REFUTED") +
            (pr.degenerate.empty() ? "" : " (degenerate zeros)"));
    js.push_back(json::parse(pr.to_json()));
    if (!ok) mismatches.push_back("stieltjes_check refuted at " + u.str());
  }
  em.report["stieltjes"] = js;

  em.section("paranormality samples");
  std::vector<VertexId> pool = vs;
  std::vector<FiniteVector> fs = {FiniteVector::basis(VertexId::neg(0))};
  for (auto& f : random_vectors(pool, 10, cfg.seed)) fs.push_back(std::move(f));
  long pass = 0;
  for (const auto& f : fs) {
    ParanormalityResult pr = paranormality_check(ex.shift, f);
    if (pr.verdict == TestVerdict::satisfied)
      ++pass;
    else
      mismatches.push_back("paranormality not certified on a sample vector");
  }
  em.line("  " + std::to_string(pass) + "/" + std::to_string(fs.size()) +
          " vectors satisfied (seed " + std::to_string(cfg.seed) + ")");
  em.report["paranormality"] = {{"passed", pass}, {"total", fs.size()}, {"seed", cfg.seed}};

  em.section("hyponormality per vertex");
  auto hyp = hyponormality_test(ex.shift, vs);
  TextTable ht({"vertex", "value", "verdict"});
  json jh = json::array();
  for (const auto& chk : hyp) {
    std::string v = verdict_name(chk.verdict);
    if (chk.vertex == VertexId::neg(0) && chk.verdict == TestVerdict::violated)
      v += "  (" + iv_str(chk.value) + " > 1)";
    ht.add_row({chk.vertex.str(), iv_str(chk.value), v});
    jh.push_back(vertex_check_json(chk));
    bool expect_violated =
        chk.vertex == VertexId::neg(0) && ex.nonhyponormality_certified;
    TestVerdict want = expect_violated ? TestVerdict::violated : TestVerdict::satisfied;
    if (chk.verdict != want)
      mismatches.push_back("hyponormality verdict at " + chk.vertex.str());
  }
  em.table(ht, "hyponormality");
  em.report["hyponormality"] = jh;

  em.section("consistency at vertex 0");
  ConsistencyResult con = consistency_condition(ex.shift, VertexId::neg(0), {});
  em.line("  value = " + iv_str(con.value) + "  (" + cmp_name(con.versus_one) + " 1)");
  em.report["consistency"] = {{"value", interval_json(con.value)},
                              {"versus_one", cmp_name(con.versus_one)}};
  if (ex.nonhyponormality_certified && con.versus_one != Cmp::certified_greater)
    mismatches.push_back("consistency at vertex 0 not certified > 1");

  em.section("backward-extension thresholds");
  std::map<long, BoundedSum> d;
  for (long n = 0; n <= 2 * cfg.N + 1; ++n) d.emplace(n, BoundedSum(ex.gamma(n + 1)));
  std::vector<Scalar> thr = t0_lower_bound(MomentSequence(d), cfg.N);
  Scalar zeta_m1 = ex.fam.zeta(-1);
  TextTable tt({"n", "threshold", "< zeta_{-1}"});
  json jt = json::array();
  for (size_t i = 0; i < thr.size(); ++i) {
    tt.add_row({std::to_string(i + 1), thr[i].str(), thr[i] < zeta_m1 ? "yes" : "NO"});
    jt.push_back({{"n", i + 1}, {"threshold", thr[i].str()}});
    if (i + 1 < thr.size() && thr[i] > thr[i + 1])
      mismatches.push_back("threshold ladder not nondecreasing");
    if (thr[i] >= zeta_m1) mismatches.push_back("threshold reached zeta_{-1}");
  }
  em.table(tt, "t0_ladder");
  em.line("  t = " + ex.t.str() + ", zeta_{-1} = " + zeta_m1.str() +
          (ex.nonhyponormality_certified ? "  (t < zeta_{-1}: non-hyponormal regime)"
                                         : ""));
  em.report["t0"] = jt;

  if (!mismatches.empty()) {
    em.line("\nFIRST MISMATCH: " + mismatches.front());
    em.report["mismatches"] = mismatches;
    return exit_mismatch;
  }
  em.line("\nall expected verdicts matched");
  return exit_ok;
}

int cmd_verify_subnormal(const RunConfig& cfg, Emitter& em) {
  SubnormalExample ex = make_subnormal_example(cfg.J);
  std::vector<std::string> mismatches;
  em.report["instance"] = {{"J", ex.J}, {"kappa", ex.kappa},
                           {"precision", Scalar::float_precision_bits()}};

  em.section("normalizing constant");
  em.line("  c = " + iv_str(ex.c));
  em.report["c"] = interval_json(ex.c);

  em.section("consistency at vertex 0");
  Scalar tol = Scalar::parse("1e-20", Regime::floating);
  const BoundedSum& con = ex.consistency_at_zero;
  em.line("  value = " + iv_str(con));
  em.report["consistency"] = interval_json(con);
  bool within = con.upper() <= Scalar(Real(1)) && con.lower() >= Scalar(Real(1)) - tol;
  if (!within) {
    em.line("  enclosure wider than 1e-20: inconclusive at this precision");
    return exit_inconclusive;
  }
  em.line("  certified within 1e-20 of 1");

  em.section("Carleman growth bounds (n = 4..8)");
  CarlemanReport cr = carleman_bound_check(ex.gamma, ex.c, 4, 8);
  TextTable ct({"n", "odd bound", "even bound"});
  for (const auto& e : cr.entries)
    ct.add_row({std::to_string(e.n), e.odd_bound_holds ? "holds" : "FAILS",
                e.even_bound_holds ? "holds" : "FAILS"});
  em.table(ct, "carleman");
  em.report["carleman"] = json::parse(cr.to_json());
  if (!cr.all_hold()) mismatches.push_back("a Carleman bound failed");

  em.section("hyponormality per vertex");
  std::vector<VertexId> vs = {VertexId::neg(0), VertexId::neg(1), VertexId::br(1, 1),
                              VertexId::br(1, 3), VertexId::br(cfg.J, 2)};
  auto hyp = hyponormality_test(ex.shift, vs);
  TextTable ht({"vertex", "value", "verdict"});
  json jh = json::array();
  for (const auto& chk : hyp) {
    ht.add_row({chk.vertex.str(), iv_str(chk.value), verdict_name(chk.verdict)});
    jh.push_back(vertex_check_json(chk));
    if (chk.verdict != TestVerdict::satisfied)
      mismatches.push_back("hyponormality verdict at " + chk.vertex.str());
  }
  em.table(ht, "hyponormality");
  em.report["hyponormality"] = jh;

  if (!mismatches.empty()) {
    em.line("\nFIRST MISMATCH: " + mismatches.front());
    em.report["mismatches"] = mismatches;
    return exit_mismatch;
  }
  em.line("\nall expected verdicts matched");
  return exit_ok;
}

int cmd_moments(const RunConfig& cfg, Emitter& em) {
  MainExample ex = main_example_from(cfg);
  long lo = ex.kappa ? -*ex.kappa : -3;
  em.section("gamma window");
  TextTable t({"n", "gamma_n"});
  json j = json::array();
  for (long n = lo; n <= 2 * cfg.N + 1; ++n) {
    t.add_row({std::to_string(n), ex.gamma(n).str()});
    j.push_back({{"n", n}, {"gamma", ex.gamma(n).str()}});
  }
  em.table(t, "gamma");
  em.report["gamma"] = j;
  return exit_ok;
}

int cmd_hankel(const RunConfig& cfg, Emitter& em) {
  MainExample ex = main_example_from(cfg);
  PositivityReport pr =
      stieltjes_check(basis_moments(ex.shift, VertexId::neg(0), 2 * cfg.N), cfg.N - 1);
  em.section("Hankel positivity of {||S^n e_0||^2}");
  for (const auto& c : pr.checks)
    em.line("  order " + std::to_string(c.order) +
            (c.kind == HankelKind::plain ? " plain: " : " shifted: ") +
            (c.sign == DetSign::positive
                 ? "positive"
                 : c.sign == DetSign::zero ? "zero (degenerate)" : "NEGATIVE"));
  em.report["positivity"] = json::parse(pr.to_json());
  return pr.verdict == PositivityReport::Verdict::consistent ? exit_ok : exit_mismatch;
}

int cmd_t0(const RunConfig& cfg, Emitter& em) {
  MainExample ex = main_example_from(cfg);
  std::map<long, BoundedSum> d;
  for (long n = 0; n <= 2 * cfg.N + 1; ++n) d.emplace(n, BoundedSum(ex.gamma(n + 1)));
  std::vector<Scalar> thr = t0_lower_bound(MomentSequence(d), cfg.N);
  em.section("t0 lower-bound ladder");
  json j = json::array();
  for (size_t i = 0; i < thr.size(); ++i) {
    em.line("  n=" + std::to_string(i + 1) + ": " + thr[i].str());
    j.push_back({{"n", i + 1}, {"threshold", thr[i].str()}});
  }
  em.report["t0"] = j;
  return exit_ok;
}

int cmd_classify(const RunConfig& cfg, Emitter& em) {
  MainExample ex = main_example_from(cfg);
  Scalar cand = cfg.gamma_minus1.empty() ? ex.gamma(0)
                                         : Scalar::parse(cfg.gamma_minus1, Regime::exact);
  std::map<long, BoundedSum> d;
  for (long n = 0; n <= 2 * cfg.N + 1; ++n) d.emplace(n, BoundedSum(ex.gamma(n + 1)));
  BackwardVerdict bv = classify_backward(MomentSequence(d), cand, cfg.N);
  em.section("backward-extension classification");
  em.line("  candidate gamma_{-1} = " + cand.str());
  em.line(bv.certified_not_stieltjes
              ? "  certified NOT Stieltjes-extendable (witness order " +
                    std::to_string(bv.order) + ")"
              : "  consistent through order " + std::to_string(bv.orders_checked));
  em.report["classify"] = json::parse(bv.to_json());
  return exit_ok;
}

int cmd_composition(const RunConfig& cfg, Emitter& em) {
  RunConfig rootless = cfg;
  rootless.kappa = "inf";  // the realization needs phi defined everywhere
  MainExample ex = main_example_from(rootless);
  Truncation w{4, std::min<long>(2 * ex.K + 1, 9), cfg.depth};
  MeasureSpaceOnV sp = build_alpha(ex.shift, VertexId::neg(0), w);

  std::vector<VertexId> pool;
  for (const auto& v : w.vertices())
    if (w.interior(v)) pool.push_back(v);
  long pass = 0, total = 0;
  std::optional<VertexId> first_bad;
  for (const auto& f : random_vectors(pool, cfg.batch, cfg.seed)) {
    UnitaryReport rep = unitary_check(ex.shift, sp, f);
    ++total;
    if (rep.equal && rep.norm_preserved)
      ++pass;
    else if (!first_bad)
      first_bad = rep.first_mismatch;
  }
  em.section("composition realization");
  em.line("  intertwining exact on " + std::to_string(pass) + "/" +
          std::to_string(total) + " random vectors (seed " + std::to_string(cfg.seed) +
          ")");
  MeasureSpaceOnV sp2 = build_alpha(ex.shift, VertexId::neg(1), w);
  bool unique = true;
  try {
    alpha_ratio_constant(sp, sp2);
  } catch (const std::domain_error&) {
    unique = false;
  }
  em.line(std::string("  alpha unique up to a scalar across anchors: ") +
          (unique ? "yes" : "NO"));
  em.report["composition"] = {{"passed", pass}, {"total", total}, {"seed", cfg.seed},
                              {"alpha_unique", unique}};
  if (first_bad) em.line("  first mismatch at " + first_bad->str());
  return pass == total && unique ? exit_ok : exit_mismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"weighted-shift verification toolkit"};
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--command", cfg.command, "command name");
  app.add_option("--q", cfg.q, "deformation parameter (rational square)");
  app.add_option("--a", cfg.a, "atom family parameter");
  app.add_option("--t", cfg.t, "mass scale");
  app.add_option("--kappa", cfg.kappa, "stem length (integer or 'inf')");
  app.add_option("--truncation-K", cfg.K, "materialized atom window");
  app.add_option("--horizon-N", cfg.N, "moment horizon parameter (indices 0..2N+1)");
  app.add_option("--depth", cfg.depth, "composition truncation depth");
  app.add_option("--J", cfg.J, "slow-growth truncation");
  app.add_option("--seed", cfg.seed, "random-vector seed");
  app.add_option("--precision", cfg.precision, "float precision in bits");
  app.add_option("--regime", cfg.regime, "exact|float");
  app.add_option("--out", cfg.out_dir, "report output directory");
  app.add_option("--gamma-minus1", cfg.gamma_minus1, "classification candidate");
  app.add_option("--batch", cfg.batch, "composition batch size");

  // JSON config supplies defaults; explicit flags override it.
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      err << "cannot read config " << config_path << "\n";
      return exit_config;
    }
    try {
      json j = json::parse(f);
      auto get = [&j](const char* k, auto& slot) {
        if (j.contains(k)) slot = j.at(k).template get<std::decay_t<decltype(slot)>>();
      };
      get("command", cfg.command);
      get("q", cfg.q);
      get("a", cfg.a);
      get("t", cfg.t);
      get("kappa", cfg.kappa);
      get("truncation_K", cfg.K);
      get("horizon_N", cfg.N);
      get("depth", cfg.depth);
      get("J", cfg.J);
      get("seed", cfg.seed);
      get("precision", cfg.precision);
      get("regime", cfg.regime);
      get("out", cfg.out_dir);
      get("gamma_minus1", cfg.gamma_minus1);
      get("batch", cfg.batch);
    } catch (const json::exception& e) {
      err << "config error: " << e.what() << "\n";
      return exit_config;
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "argument error: " << e.what() << "\n";
    return exit_config;
  }

  if (cfg.regime != "exact" && cfg.regime != "float") {
    err << "config error: regime must be exact or float\n";
    return exit_config;
  }
  if (cfg.precision < 64 || cfg.N < 1 || cfg.K < 1 || cfg.depth < 2 || cfg.batch < 0) {
    err << "config error: parameter out of range\n";
    return exit_config;
  }
  Scalar::set_float_precision(cfg.precision);

  Emitter em{out, cfg.out_dir, json::object()};
  em.report["command"] = cfg.command;
  int rc;
  try {
    if (cfg.command == "verify-main")
      rc = cmd_verify_main(cfg, em);
    else if (cfg.command == "verify-subnormal")
      rc = cmd_verify_subnormal(cfg, em);
    else if (cfg.command == "moments")
      rc = cmd_moments(cfg, em);
    else if (cfg.command == "hankel")
      rc = cmd_hankel(cfg, em);
    else if (cfg.command == "t0")
      rc = cmd_t0(cfg, em);
    else if (cfg.command == "classify")
      rc = cmd_classify(cfg, em);
    else if (cfg.command == "composition")
      rc = cmd_composition(cfg, em);
    else {
      err << "config error: unknown command '" << cfg.command << "'\n";
      return exit_config;
    }
  } catch (const inconclusive_comparison& e) {
    err << "inconclusive: " << e.what() << "\n";
    return exit_inconclusive;
  } catch (const truncation_error& e) {
    err << "inconclusive (truncation): " << e.what() << "\n";
    return exit_inconclusive;
  } catch (const decay_certificate_error& e) {
    err << "inconclusive (tail certificate): " << e.what() << "\n";
    return exit_inconclusive;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_config;
  }
  em.report["exit"] = rc;
  em.finish(cfg.command);
  return rc;
}

}  // namespace treeshift
