#include "casas/cli.hpp"

#include "casas/casas.hpp"
#include "casas/groebner.hpp"
#include "casas/koszul.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <sstream>

namespace casas {

namespace {

// Configuration problems found after CLI11 has accepted the arguments.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  bool passed = true;
  Json result = Json::object();
};

struct Common {
  std::string field = "q";
  std::string output = "json";
  int workers = 0;
  bool timing = false;
};

Field parse_field(const std::string& s) {
  try {
    return Field::parse(s);
  } catch (const MathError& e) {
    throw UsageError(e.what());
  }
}

int worker_count(const Common& c) { return c.workers > 0 ? c.workers : default_workers(); }

std::vector<int> parse_tuple(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw UsageError("malformed index tuple '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty index tuple");
  return out;
}

Json failures_json(const VerificationReport& rep) {
  Json arr = Json::array();
  for (const auto& c : rep.checks) {
    if (c.passed) continue;
    Json f{{"name", c.name}, {"method", c.method}};
    if (!c.witness.is_null()) f["witness"] = c.witness;
    arr.push_back(std::move(f));
  }
  return arr;
}

// ------------------------------------------------------------------ text

void render_text(const Json& j, std::ostream& out, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      if ((v.is_object() || v.is_array()) && !v.empty()) {
        out << pad << it.key() << ":\n";
        render_text(v, out, indent + 2);
      } else {
        out << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (scalars) {
      out << pad << j.dump() << "\n";
      return;
    }
    for (const auto& e : j) {
      out << pad << "-\n";
      render_text(e, out, indent + 2);
    }
  } else {
    out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

// ------------------------------------------------------------- commands

Outcome cmd_check_poly(const std::string& text, const Field& field) {
  UniPoly f = UniPoly::parse(field, text);
  if (f.degree() < 1 || !f.coeff(f.degree()).is_one())
    throw UsageError("check-poly needs a monic polynomial of degree >= 1, got " + f.to_string());
  ConjectureVerdict v = check_polynomial(f);
  std::vector<Scalar> res = resultant_profile(f);
  Outcome o;
  o.result = v.to_json();
  Json prof = Json::array();
  bool consistent = true;
  for (std::size_t i = 0; i < res.size(); ++i) {
    prof.push_back(Json{{"i", i + 1}, {"resultant", res[i].to_string()}, {"vanishes", res[i].is_zero()}});
    consistent = consistent && res[i].is_zero() == v.gcd_nontrivial[i];
  }
  o.result["resultant_profile"] = std::move(prof);
  o.result["oracles_consistent"] = consistent;
  o.passed = consistent && !v.counterexample();
  return o;
}

Outcome cmd_verify_degree(int d, const Field& field, int workers, bool tuples) {
  if (d < 3) throw UsageError("verify-degree needs d >= 3");
  DegreeReport rep = verify_degree(d, field, workers);
  return {rep.passed(), rep.to_json(tuples)};
}

Outcome cmd_scan_bad_primes(int d, std::uint64_t bound, int workers) {
  if (d < 3) throw UsageError("scan-bad-primes needs d >= 3");
  BadPrimeReport rep = scan_bad_primes(d, bound, workers);
  // bad primes are the expected output; only disagreeing oracles fail
  return {rep.oracles_consistent(), rep.to_json()};
}

struct KoszulQuery {
  int n = 3;
  std::string indices;
  std::string complex = "full";
  int k = 2;
  int bound = -1;
  std::string homology;
  std::string seq;
  int vars = 0;
};

ChainComplex query_complex(const KoszulQuery& q, const Field& field, Json& config) {
  if (!q.seq.empty()) {
    if (q.vars < 1) throw UsageError("--seq needs --vars");
    Ring r(q.vars, field);
    std::vector<MultiPoly> seq;
    std::stringstream ss(q.seq);
    std::string part;
    while (std::getline(ss, part, ';')) seq.push_back(MultiPoly::parse(r, part));
    config["sequence"] = q.seq;
    return koszul_complex(r, seq, static_cast<int>(seq.size()), "K(seq)");
  }
  if (q.n < 2) throw UsageError("--n must be at least 2");
  if (q.indices.empty()) throw UsageError("--indices is required unless --seq is given");
  std::vector<int> idx = parse_tuple(q.indices);
  if (static_cast<int>(idx.size()) != q.n - 1) throw UsageError("--indices needs n - 1 entries");
  for (int j : idx)
    if (j < 1 || j > q.n + 1 || j == q.n) throw UsageError("--indices entries must lie in [1, n + 1] and differ from n");
  config["n"] = q.n;
  config["indices"] = idx;
  TruncatedSetup s = truncated_setup(q.n, idx, field);
  const std::string& c = q.complex;
  if (c == "full") return koszul_complex(s.ring, s.f, q.n - 1, "K(Shat)");
  if (c == "khat") return full_truncated_complex(s);
  if (c == "truncated") {
    config["k"] = q.k;
    if (q.k < 0) throw UsageError("--k must be >= 0");
    return truncated_complex(s, q.k);
  }
  if (c == "lower") return lower_complex(s);
  if (c == "c0") return c_complex(s, 0);
  if (c == "c1") return c_complex(s, 1);
  if (c == "d1") return d1_complex(s);
  if (c == "coker1") return coker_iota1(s);
  if (c == "coker") return coker_iota(s);
  throw UsageError("unknown complex '" + c + "'");
}

Outcome cmd_koszul(const KoszulQuery& q, const Field& field, Json& config) {
  ChainComplex cx = query_complex(q, field, config);
  int bound = q.bound >= 0 ? q.bound : default_degree_bound(std::max(q.n, 2));
  config["complex"] = q.seq.empty() ? q.complex : "seq";
  config["degree_bound"] = bound;
  std::vector<int> which;
  if (q.homology.empty()) {
    for (int i = 0; i <= cx.length(); ++i) which.push_back(i);
  } else {
    which = parse_tuple(q.homology);
  }
  Outcome o;
  o.result["complex"] = cx.name;
  o.result["length"] = cx.length();
  Json hs = Json::array();
  for (int i : which) {
    if (i < 0 || i > cx.length()) throw UsageError("homology index " + std::to_string(i) + " out of range");
    Json dims = Json::array();
    Json wit = Json::array();
    for (int m = 0; m <= bound; ++m) {
      HomologyReport h = homology_dim(cx, i, m);
      dims.push_back(h.dimension);
      if (h.witness && i > 0) wit.push_back(h.to_json());
    }
    Json e{{"index", i}, {"dimensions", std::move(dims)}};
    if (!wit.empty()) e["witnesses"] = std::move(wit);
    hs.push_back(std::move(e));
  }
  o.result["homology"] = std::move(hs);
  return o;
}

// ----------------------------------------------------------- verify-proof

struct ProofConfig {
  int n = 3;
  std::string indices;
  std::string jn;
  int bound = -1;
  int filtration_k = 3;
};

struct Combo {
  std::vector<int> lower;
  int jn = 0;
  std::vector<std::vector<int>> tuples;
};

Json stage_json(const std::string& name, const std::vector<Json>& items, std::size_t total) {
  bool ok = std::all_of(items.begin(), items.end(), [](const Json& j) { return j["passed"].get<bool>(); });
  Json failing = Json::array();
  for (const auto& it : items)
    if (!it["passed"].get<bool>()) failing.push_back(it);
  std::size_t passed = static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [](const Json& j) { return j["passed"].get<bool>(); }));
  return Json{{"stage", name}, {"passed", ok}, {"items", total}, {"items_passed", passed}, {"failures", failing}};
}

Json report_item(const VerificationReport& rep, Json key) {
  key["passed"] = rep.passed();
  key["checks"] = rep.checks.size();
  Json f = failures_json(rep);
  if (!f.empty()) key["failed_checks"] = std::move(f);
  return key;
}

Outcome cmd_verify_proof(const ProofConfig& pc, const Field& field, int workers, Json& config) {
  const int n = pc.n;
  if (n < 2 || n > 5) throw UsageError("verify-proof needs 2 <= n <= 5");
  int bound = pc.bound >= 0 ? pc.bound : default_degree_bound(n);
  if (pc.filtration_k < 0) throw UsageError("--filtration-k must be >= 0");
  std::optional<std::vector<int>> fixed;
  if (!pc.indices.empty() && pc.indices != "all") {
    fixed = parse_tuple(pc.indices);
    if (static_cast<int>(fixed->size()) != n - 1) throw UsageError("--indices needs n - 1 entries");
  }
  std::optional<int> fixed_jn;
  if (!pc.jn.empty() && pc.jn != "all") {
    std::vector<int> v = parse_tuple(pc.jn);
    if (v.size() != 1) throw UsageError("--jn takes one index");
    fixed_jn = v[0];
  }
  for (int j : fixed ? *fixed : std::vector<int>{})
    if (j < 1 || j > n + 1) throw UsageError("indices must lie in [1, n + 1]");
  if (fixed_jn && (*fixed_jn < 1 || *fixed_jn > n + 1)) throw UsageError("--jn must lie in [1, n + 1]");
  config["n"] = n;
  config["indices"] = fixed ? Json(*fixed) : Json("all");
  config["jn"] = fixed_jn ? Json(*fixed_jn) : Json("all");
  config["degree_bound"] = bound;
  config["filtration_k"] = pc.filtration_k;

  std::map<std::pair<std::vector<int>, int>, std::vector<std::vector<int>>> groups;
  for (auto& t : all_tuples(n, 1, n + 1)) {
    if (fixed && !std::equal(fixed->begin(), fixed->end(), t.begin())) continue;
    if (fixed_jn && t.back() != *fixed_jn) continue;
    IndexReduction red = reduce_indices(n, t);
    std::vector<int> lower(red.reduced.begin(), red.reduced.end() - 1);
    groups[{lower, red.reduced.back()}].push_back(t);
  }
  std::vector<Combo> combos;
  std::vector<std::vector<int>> lowers;
  for (auto& [key, ts] : groups) {
    combos.push_back({key.first, key.second, ts});
    if (std::find(lowers.begin(), lowers.end(), key.first) == lowers.end()) lowers.push_back(key.first);
  }
  std::sort(lowers.begin(), lowers.end());

  auto combo_key = [](const Combo& c) { return Json{{"indices", c.lower}, {"j_n", c.jn}, {"tuples", c.tuples}}; };
  Json stages = Json::array();
  bool all_ok = true;
  auto push = [&](Json st) {
    all_ok = all_ok && st["passed"].get<bool>();
    stages.push_back(std::move(st));
  };

  {
    std::vector<std::pair<int, int>> ij;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n + 1; ++j)
        if (j != n) ij.emplace_back(i, j);
    std::vector<Json> items(ij.size());
    parallel_for(ij.size(), workers, [&](std::size_t k) {
      RecursionCheck r = verify_recursion(n, ij[k].first, ij[k].second, field);
      items[k] = Json{{"i", ij[k].first}, {"j", ij[k].second}, {"passed", r.holds}};
    });
    push(stage_json("recursion identities", items, items.size()));
  }
  {
    std::vector<Json> items(lowers.size());
    parallel_for(lowers.size(), workers, [&](std::size_t k) {
      PolySequence s = build_S_hat(n, lowers[k], field);
      RegularityResult r = is_regular_sequence(s.ring, s.elements);
      items[k] = Json{{"indices", lowers[k]}, {"passed", r.regular}};
      if (!r.regular && r.witness_degree) items[k]["witness_degree"] = *r.witness_degree;
    });
    push(stage_json("truncated sequence regularity", items, items.size()));
  }
  {
    std::vector<Json> items(lowers.size());
    parallel_for(lowers.size(), workers, [&](std::size_t k) {
      items[k] = report_item(filtration_check(n, lowers[k], pc.filtration_k, bound, field),
                             Json{{"indices", lowers[k]}});
    });
    push(stage_json("filtration", items, items.size()));
  }
  {
    std::vector<Json> items(combos.size());
    parallel_for(combos.size(), workers, [&](std::size_t k) {
      const Combo& c = combos[k];
      Json item = combo_key(c);
      try {
        TruncatedSetup s = truncated_setup(n, c.lower, field);
        ChainMap sec = section_map(s, c.jn);
        ChainComplex c0 = c_complex(s, 0);
        ChainMap mu = mu_chain_map(c0, c_complex(s, 1), last_element(n, c.jn, field));
        auto defect = maps_differ(compose(sec, mu), identity_map(c0));
        item["passed"] = !defect.has_value();
        item["scalar"] = nu_scalar(n, c.jn, field).to_bare_string();
      } catch (const CharacteristicObstruction& e) {
        item["passed"] = false;
        item["obstruction"] = e.what();
        item["scalar"] = e.scalar().to_bare_string();
      }
      items[k] = std::move(item);
    });
    push(stage_json("section", items, items.size()));
  }
  {
    std::vector<Json> items(combos.size());
    parallel_for(combos.size(), workers, [&](std::size_t k) {
      const Combo& c = combos[k];
      items[k] = report_item(diagram_check(n, c.lower, c.jn, bound, field), combo_key(c));
    });
    push(stage_json("diagram check", items, items.size()));
  }
  {
    std::vector<Json> items(combos.size());
    parallel_for(combos.size(), workers, [&](std::size_t k) {
      const Combo& c = combos[k];
      items[k] = report_item(h0_mult_injectivity(n, c.lower, c.jn, InjectivityMethod::both, bound, field),
                             combo_key(c));
    });
    push(stage_json("non-zero divisor on H_0", items, items.size()));
  }
  {
    std::vector<std::vector<int>> ts;
    for (const auto& c : combos)
      for (const auto& t : c.tuples) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    std::vector<Json> items(ts.size());
    parallel_for(ts.size(), workers, [&](std::size_t k) {
      PolySequence s = build_S(n + 1, ts[k], field);
      RegularityResult r = is_regular_sequence(s.ring, s.elements);
      items[k] = Json{{"indices", ts[k]}, {"passed", r.regular}};
      if (!r.regular && r.witness_degree) items[k]["witness_degree"] = *r.witness_degree;
    });
    push(stage_json("full sequence regularity", items, items.size()));
  }
  Outcome o;
  o.passed = all_ok;
  o.result["combinations"] = combos.size();
  o.result["stages"] = std::move(stages);
  return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Casas-Alvero verification workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--field", common.field, "q or f<p>")->capture_default_str();
    sub->add_option("--output", common.output, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    sub->add_option("--workers", common.workers, "worker threads (default CA_WORKERS or hardware)")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", common.timing, "include wall-clock time in the report");
  };

  std::string poly;
  auto* check_poly = app.add_subcommand("check-poly", "gcd and resultant checks for one monic polynomial");
  check_poly->add_option("polynomial", poly)->required();
  add_common(check_poly);

  int degree = 0;
  bool tuples = false;
  auto* vdeg = app.add_subcommand("verify-degree", "regularity of every full sequence in degree d");
  vdeg->add_option("d", degree)->required();
  vdeg->add_flag("--tuples", tuples, "list every tuple");
  add_common(vdeg);

  int scan_d = 3;
  std::uint64_t prime_bound = 10;
  auto* scan = app.add_subcommand("scan-bad-primes", "primes p <= bound where regularity fails over F_p");
  scan->add_option("--d", scan_d)->capture_default_str();
  scan->add_option("--bound", prime_bound)->capture_default_str();
  add_common(scan);

  KoszulQuery kq;
  auto* kos = app.add_subcommand("koszul", "homology of a Koszul-type complex per graded degree");
  kos->add_option("--n", kq.n)->capture_default_str();
  kos->add_option("--indices", kq.indices, "j_1,...,j_{n-1}");
  kos->add_option("--complex", kq.complex, "full, khat, truncated, lower, c0, c1, d1, coker1, coker")
      ->capture_default_str();
  kos->add_option("--k", kq.k, "truncation level for --complex truncated")->capture_default_str();
  kos->add_option("--bound", kq.bound, "largest graded degree");
  kos->add_option("--homology", kq.homology, "comma-separated homological indices");
  kos->add_option("--seq", kq.seq, "explicit sequence 'f1; f2; ...' instead of --n/--indices");
  kos->add_option("--vars", kq.vars, "variable count for --seq");
  add_common(kos);

  ProofConfig pc;
  auto* proof = app.add_subcommand("verify-proof", "replay the inductive step for one n");
  proof->add_option("--n", pc.n)->capture_default_str();
  proof->add_option("--indices", pc.indices, "j_1,...,j_{n-1} or all");
  proof->add_option("--jn", pc.jn, "j_n or all");
  proof->add_option("--bound", pc.bound, "largest graded degree (default n(n+1)/2 - 1)");
  proof->add_option("--filtration-k", pc.filtration_k, "top filtration level")->capture_default_str();
  add_common(proof);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_usage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Json config = Json::object();
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    Field field = parse_field(common.field);
    int workers = worker_count(common);
    config["field"] = field.name();
    if (sub == check_poly) {
      config["polynomial"] = poly;
      o = cmd_check_poly(poly, field);
    } else if (sub == vdeg) {
      config["d"] = degree;
      o = cmd_verify_degree(degree, field, workers, tuples);
    } else if (sub == scan) {
      if (common.field != "q") throw UsageError("scan-bad-primes takes no --field");
      config.erase("field");
      config["d"] = scan_d;
      config["prime_bound"] = prime_bound;
      o = cmd_scan_bad_primes(scan_d, prime_bound, workers);
    } else if (sub == kos) {
      o = cmd_koszul(kq, field, config);
    } else {
      o = cmd_verify_proof(pc, field, workers, config);
    }
  } catch (const ParseError& e) {
    err << "parse error at position " << e.position() << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const MathError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  Json report{{"schema", kSchema}, {"version", kVersion}, {"command", sub->get_name()}, {"config", config},
              {"passed", o.passed}, {"result", o.result}};
  if (common.timing)
    report["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (common.output == "text") {
    out << sub->get_name() << ": " << (o.passed ? "PASS" : "FAIL") << "\n";
    render_text(report["result"], out, 2);
  } else {
    out << report.dump(2) << "\n";
  }
  return o.passed ? exit_pass : exit_math_failure;
}

}  // namespace casas
