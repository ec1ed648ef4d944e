#include "flatform/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

namespace flatform::cli {

std::uint64_t default_seed() {
  const char* env = std::getenv("FLATFORM_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  return *end == '\0' ? v : 0;
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

OracleOutcome run_oracle(const Analysis& analysis, const KaehlerPoint& kp) {
  OracleOutcome o;
  const auto start = Clock::now();
  try {
    const oracle::Table table = oracle::compute(kp);
    o.comparison = oracle::compare(analysis, kp, table);
  } catch (const oracle::SizeGuardExceeded& e) {
    o.note = e.what();
  }
  o.millis = millis_since(start);
  return o;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::vector<Family> parse_families(const std::string& list) {
  std::vector<Family> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string name = list.substr(start, comma - start);
    if (!name.empty()) out.push_back(parse_family(name));
    start = comma + 1;
  }
  return out;
}

}  // namespace

Evaluation evaluate(const KaehlerPoint& kp, std::uint64_t seed, bool with_oracle) {
  const auto start = Clock::now();
  const Analysis analysis = analyze(kp, AnalysisOptions{seed});
  const double analysis_ms = millis_since(start);
  std::optional<OracleOutcome> oracle_run;
  Verdict verdict = analysis.verdict;
  if (with_oracle) {
    oracle_run = run_oracle(analysis, kp);
    const bool disagree = oracle_run->comparison && !oracle_run->comparison->agreement;
    if (disagree && verdict != Verdict::outside_theorem_scope) verdict = Verdict::violation_candidate;
  }
  return Evaluation{verdict, report_json(analysis, verdict, analysis_ms, oracle_run)};
}

Json fuzz(const FuzzOptions& options) {
  std::vector<Family> families;
  for (Family f : options.families.empty() ? all_families() : options.families) {
    if (feasible(f, options.n, options.p)) families.push_back(f);
  }
  Json summary;
  summary["trials"] = options.trials;
  summary["n"] = options.n;
  summary["p"] = options.p;
  summary["seed"] = options.seed;
  Json fam = Json::array();
  for (Family f : families) fam.push_back(to_string(f));
  summary["families"] = std::move(fam);

  std::map<std::string, std::size_t> verdicts;
  for (Verdict v : {Verdict::theorem_verified, Verdict::hypothesis_not_met, Verdict::outside_theorem_scope,
                    Verdict::violation_candidate, Verdict::input_invalid}) {
    verdicts[to_string(v)] = 0;
  }
  std::size_t agree = 0, disagree = 0, oracle_skipped = 0, generation_failures = 0, flagged = 0;
  std::vector<std::pair<std::uint64_t, Json>> findings;
  if (options.trials > 0 && families.empty()) {
    throw std::invalid_argument("no requested family can be realized with n = " + std::to_string(options.n) +
                                ", p = " + std::to_string(options.p));
  }
  const auto start = Clock::now();
  for (std::size_t i = 0; i < options.trials; ++i) {
    const std::uint64_t seed = options.seed + i;
    const Family family = families[i % families.size()];
    Json record{{"seed", seed}, {"family", to_string(family)}};
    std::optional<Generated> g;
    try {
      g = gen(FamilySpec{family, options.n, options.p, seed});
    } catch (const GenerationError& e) {
      ++generation_failures;
      record["error"] = e.code();
      findings.emplace_back(seed, std::move(record));
      continue;
    }
    const Evaluation ev = evaluate(g->kp, seed, options.with_oracle);
    ++verdicts[to_string(ev.verdict)];
    const Json& agreement = ev.report["oracle_agreement"];
    if (agreement.is_null()) {
      ++oracle_skipped;
    } else if (agreement.get<bool>()) {
      ++agree;
    } else {
      ++disagree;
    }
    flagged += ev.report["check_counts"]["flagged"].get<std::size_t>();
    if (ev.verdict == Verdict::violation_candidate) {
      record["verdict"] = to_string(ev.verdict);
      Json failed = Json::array();
      for (const auto& c : ev.report["checks"]) {
        if (c["status"] == "fail") failed.push_back(c["name"]);
      }
      if (ev.report.contains("oracle") && ev.report["oracle"].contains("checks")) {
        for (const auto& c : ev.report["oracle"]["checks"]) {
          if (c["status"] == "fail") failed.push_back(c["name"]);
        }
      }
      record["failed_checks"] = std::move(failed);
      findings.emplace_back(seed, std::move(record));
    }
  }
  std::sort(findings.begin(), findings.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  Json vj;
  for (const auto& [k, v] : verdicts) vj[k] = v;
  summary["verdicts"] = std::move(vj);
  summary["oracle"] = Json{{"agree", agree}, {"disagree", disagree}, {"skipped", oracle_skipped}};
  summary["flagged_checks"] = flagged;
  summary["generation_failures"] = generation_failures;
  Json fj = Json::array();
  for (auto& [seed, rec] : findings) fj.push_back(std::move(rec));
  summary["findings"] = std::move(fj);
  summary["elapsed_ms"] = millis_since(start);
  return summary;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact invariants of flat bilinear forms and checks of the Kaehler structure theorem"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::string path, out_path;
  bool with_oracle = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze an instance file and print a JSON report");
  analyze_cmd->add_option("path", path, "Instance file")->required();
  analyze_cmd->add_flag("--oracle", with_oracle, "Cross-check against the brute-force oracle");
  analyze_cmd->add_option("--seed", seed, "Seed for sampled regular elements (default: FLATFORM_SEED or 0)");
  analyze_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string family_name;
  std::size_t n = 0, p = 0;
  long bound = 2;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance of a known family");
  gen_cmd->add_option("--family", family_name, "hypersurface_product, holomorphic, composition, padded, random_filtered")
      ->required();
  gen_cmd->add_option("--n", n, "Complex dimension")->required();
  gen_cmd->add_option("--p", p, "Codimension")->required();
  gen_cmd->add_option("--seed", seed, "Generator seed (default: FLATFORM_SEED or 0)");
  gen_cmd->add_option("--bound", bound, "Coefficients are drawn from {-b..b} without 0");
  gen_cmd->add_option("--out", out_path, "Write the instance here instead of stdout");

  FuzzOptions fuzz_opts;
  std::string family_list;
  bool no_oracle = false;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Run generate -> analyze -> oracle trials");
  fuzz_cmd->add_option("--trials", fuzz_opts.trials, "Number of trials");
  fuzz_cmd->add_option("--n", fuzz_opts.n, "Complex dimension");
  fuzz_cmd->add_option("--p", fuzz_opts.p, "Codimension");
  fuzz_cmd->add_option("--seed", seed, "First trial seed (default: FLATFORM_SEED or 0)");
  fuzz_cmd->add_option("--families", family_list, "Comma-separated family names (default: all feasible)");
  fuzz_cmd->add_flag("--no-oracle", no_oracle, "Skip the oracle cross-check");
  fuzz_cmd->add_option("--out", out_path, "Write the summary here instead of stdout");

  auto* oracle_cmd = app.add_subcommand("oracle", "Compare the main path with the brute-force oracle");
  oracle_cmd->add_option("path", path, "Instance file")->required();
  oracle_cmd->add_option("--seed", seed, "Seed for sampled regular elements (default: FLATFORM_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (analyze_cmd->parsed()) {
      std::optional<KaehlerPoint> kp;
      try {
        kp = read_instance(path);
      } catch (const InputError& e) {
        err << "input_invalid: " << e.what() << "\n";
        emit(input_error_json(e).dump(2) + "\n", out_path, out);
        return exit_code(Verdict::input_invalid);
      }
      const Evaluation ev = evaluate(*kp, seed, with_oracle);
      emit(ev.report.dump(2) + "\n", out_path, out);
      return exit_code(ev.verdict);
    }
    if (gen_cmd->parsed()) {
      const Generated g = gen(FamilySpec{parse_family(family_name), n, p, seed, bound});
      emit(serialize_instance(g.kp), out_path, out);
      return 0;
    }
    if (fuzz_cmd->parsed()) {
      fuzz_opts.seed = seed;
      fuzz_opts.families = parse_families(family_list);
      fuzz_opts.with_oracle = !no_oracle;
      const Json summary = fuzz(fuzz_opts);
      emit(summary.dump(2) + "\n", out_path, out);
      return summary["verdicts"]["violation_candidate"].get<std::size_t>() > 0 ? 2 : 0;
    }
    if (oracle_cmd->parsed()) {
      std::optional<KaehlerPoint> kp;
      try {
        kp = read_instance(path);
      } catch (const InputError& e) {
        err << "input_invalid: " << e.what() << "\n";
        emit(input_error_json(e).dump(2) + "\n", "", out);
        return 1;
      }
      const Analysis analysis = analyze(*kp, AnalysisOptions{seed});
      const oracle::Table table = oracle::compute(*kp);
      const oracle::Comparison cmp = oracle::compare(analysis, *kp, table);
      Json j{{"agreement", cmp.agreement}, {"checks", Json::array()}};
      for (const Check& c : cmp.checks) j["checks"].push_back(check_json(c));
      j["oracle"] = Json{{"delta_c_dim", table.delta_c.size()},
                         {"first_normal_dim", table.first_normal.size()},
                         {"q_dim", table.q.size()},
                         {"compatible", table.compatible},
                         {"kappa_grid", Json{{"gamma", table.gamma.kappa_grid},
                                             {"beta", table.beta.kappa_grid},
                                             {"theta", table.theta.kappa_grid}}}};
      out << j.dump(2) << "\n";
      return cmp.agreement ? 0 : 2;
    }
  } catch (const GenerationError& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace flatform::cli
