// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include "flatform/cli/commands.hpp"
#include "flatform/cli/io.hpp"
#include "flatform/instance_gen.hpp"
#include "flatform/oracle.hpp"
#include "flatform/structure.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace flatform;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CorpusEntry {
  FamilySpec spec;
  Generated generated;
  Analysis analysis;
  std::optional<oracle::Comparison> comparison;
  std::optional<oracle::Table> table;
};

int failures = 0;

void report(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    o.pass = false;
    o.detail += "; exceeded time limit of " + std::to_string(static_cast<int>(limit_seconds)) + " s";
  }
  if (!o.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::cout << "criterion " << id << " [" << (o.pass ? "PASS" : "FAIL") << "] " << name << ": " << o.detail << " ("
            << timing << ")" << std::endl;
}

std::string str(std::size_t v) { return std::to_string(v); }

// Instances of every family on a grid of small shapes, with the analysis and
// the oracle comparison computed once.
std::vector<CorpusEntry> build_corpus() {
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3},
                                                        {5, 2}, {5, 3}, {5, 4}, {6, 3}, {6, 4}};
  std::vector<CorpusEntry> corpus;
  for (auto [n, p] : shapes) {
    const std::uint64_t seeds = n >= 6 ? 2 : 3;
    for (Family f : all_families()) {
      if (!feasible(f, n, p)) continue;
      for (std::uint64_t s = 0; s < seeds; ++s) {
        const FamilySpec spec{f, n, p, 1000 + 97 * s + 7 * n + p};
        std::optional<Generated> made;
        try {
          made = gen(spec);
        } catch (const GenerationError&) {
          continue;  // random_filtered may not find a flat instance
        }
        const Generated& g = *made;
        CorpusEntry e{spec, g, analyze(g.kp, AnalysisOptions{spec.seed}), std::nullopt, std::nullopt};
        if (2 * n <= 12 && p <= 6) {
          e.table = oracle::compute(g.kp);
          e.comparison = oracle::compare(e.analysis, g.kp, *e.table);
        }
        corpus.push_back(std::move(e));
      }
    }
  }
  return corpus;
}

struct Tally {
  std::size_t pass = 0, fail = 0, skipped = 0;
  std::vector<std::string> failed;
  void add(const Analysis& a, const std::string& name, const std::string& where) {
    const Check* c = a.find(name);
    if (c == nullptr || c->status == CheckStatus::skipped) {
      ++skipped;
    } else if (c->status == CheckStatus::pass) {
      ++pass;
    } else {
      ++fail;
      if (failed.size() < 5) failed.push_back(where + " " + name + (c->detail.empty() ? "" : " (" + c->detail + ")"));
    }
  }
  std::string text() const {
    std::string s = str(pass) + " passed, " + str(fail) + " failed, " + str(skipped) + " skipped";
    for (const auto& f : failed) s += "; " + f;
    return s;
  }
};

std::string where(const CorpusEntry& e) {
  return to_string(e.spec.family) + "(n=" + str(e.spec.n) + ",p=" + str(e.spec.p) + ",seed=" +
         std::to_string(e.spec.seed) + ")";
}

int run_binary(const std::string& args, const fs::path& out) {
  const std::string cmd =
      std::string("\"") + FLATFORM_BINARY + "\" " + args + " > \"" + out.string() + "\" 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  std::size_t curvature_checked = 0;
  std::vector<std::string> curvature_failures;

  report(1, "sharpness nu(gamma) = 2n - 2p on hypersurface products", 60, [] {
    std::size_t count = 0, bad = 0;
    std::string first_bad;
    const std::size_t per_p[] = {17, 17, 16};
    for (std::size_t idx = 0; idx < 3; ++idx) {
      const std::size_t p = idx + 2, n = 2 * p;
      for (std::size_t s = 0; s < per_p[idx]; ++s) {
        const Generated g = gen(FamilySpec{Family::hypersurface_product, n, p, 5000 + s});
        const std::size_t nu = nullity(build_gamma(g.kp)).dim();
        ++count;
        if (nu != 2 * n - 2 * p) {
          ++bad;
          if (first_bad.empty()) first_bad = "; p=" + str(p) + " seed " + str(5000 + s) + " nu=" + str(nu);
        }
      }
    }
    return Outcome{count == 50 && bad == 0, str(count) + " instances, " + str(bad) + " mismatches" + first_bad};
  });

  report(2, "structure theorem on composition instances", 300, [&] {
    const std::pair<std::size_t, std::size_t> shapes[] = {{3, 2}, {4, 3}, {5, 4}, {6, 5}};
    std::size_t included = 0, excluded = 0, bad = 0;
    std::vector<std::string> notes;
    for (auto [n, p] : shapes) {
      std::size_t taken = 0;
      for (std::uint64_t s = 0; taken < 50 && s < 200; ++s) {
        const FamilySpec spec{Family::composition, n, p, 7000 + 131 * n + s};
        const Generated g = gen(spec);
        const KaehlerPoint& kp = g.kp;
        const std::size_t nu_c = complex_relative_nullity(kp).dim();
        if (!(nu_c < 2 * n - 2 * p)) {
          ++excluded;
          continue;
        }
        ++taken;
        const QResult q = compute_Q(kp);
        const StructureReport r = split_and_bound(kp, q.q);
        const CurvatureResult c = curvature_check(kp, r);
        ++curvature_checked;
        const std::size_t l = q.q.dim();
        std::string why;
        if (!(l > 0 && l % 2 == 0)) why += " l=" + str(l);
        if (!q.j_squared) why += " J^2";
        if (!q.j_isometric) why += " J-isometry";
        if (!q.j_relation) why += " J-relation";
        if (!q.routes_agree) why += " Q-routes";
        if (!(r.p_part_nullity >= 2 * (n - p + l))) why += " bound";
        if (!(r.gamma_p_flat && r.s_gamma_p_nondegenerate && r.gamma_p_nullity_ok)) why += " gamma_P";
        if (!c.ok) {
          why += " curvature";
          curvature_failures.push_back("composition seed " + std::to_string(spec.seed));
        }
        if (!why.empty()) {
          ++bad;
          if (notes.size() < 5) notes.push_back("n=" + str(n) + " p=" + str(p) + " seed " + std::to_string(spec.seed) + ":" + why);
        }
      }
      included += taken;
    }
    std::string detail = str(included) + " instances (" + str(excluded) + " excluded by nu_c), " + str(bad) + " failures";
    for (const auto& s : notes) detail += "; " + s;
    return Outcome{included >= 200 && bad == 0, detail};
  });

  const auto corpus_start = Clock::now();
  const std::vector<CorpusEntry> corpus = build_corpus();
  const double corpus_secs = std::chrono::duration<double>(Clock::now() - corpus_start).count();
  std::cout << "corpus: " << corpus.size() << " instances, analysis and oracle in " << static_cast<int>(corpus_secs)
            << " s" << std::endl;

  report(3, "nu(beta) = 2n - kappa(beta) on flat-beta instances, kappa against the grid", 0, [&] {
    std::size_t flat = 0, bad = 0, grid_checked = 0, grid_bad = 0;
    std::string notes;
    for (const CorpusEntry& e : corpus) {
      if (!e.analysis.beta.flat) continue;
      ++flat;
      const std::size_t d = 2 * e.spec.n;
      if (e.analysis.beta.nullity_dim + e.analysis.beta.kappa.kappa != d) {
        ++bad;
        notes += "; " + where(e);
      }
      if (e.table) {
        ++grid_checked;
        if (e.table->beta.kappa_grid != e.analysis.beta.kappa.kappa) {
          ++grid_bad;
          notes += "; grid kappa " + str(e.table->beta.kappa_grid) + " at " + where(e);
        }
      }
    }
    return Outcome{flat > 0 && bad == 0 && grid_bad == 0,
                   str(flat) + " flat-beta instances, " + str(bad) + " identity failures, kappa grid-checked on " +
                       str(grid_checked) + " with " + str(grid_bad) + " disagreements" + notes};
  });

  report(4, "S(beta) = U1+U1, N(beta) = N(gamma_U1), N(gamma) = N(beta)∩N(theta), theta flat, parities", 0, [&] {
    Tally t;
    for (const CorpusEntry& e : corpus) {
      for (const char* name : {"sbeta.image", "sbeta.nullity", "nullity.intersection", "theta.flat_if_gamma_flat",
                               "gamma.even", "beta.even", "theta.even"}) {
        t.add(e.analysis, name, where(e));
      }
    }
    return Outcome{t.fail == 0 && t.pass > 0, t.text()};
  });

  report(5, "4 dim S(phi) <= kappa(kappa + 2) for symmetric T-compatible forms", 0, [&] {
    Tally t;
    for (const CorpusEntry& e : corpus) {
      for (const char* name : {"estpluri.theta", "estpluri.gamma", "estpluri.theta1", "estpluri.theta2"}) {
        t.add(e.analysis, name, where(e));
      }
    }
    return Outcome{t.fail == 0 && t.pass > 0, t.text()};
  });

  report(6, "isotropic decomposition postconditions on 500 subspaces of W^{p,p}", 30, [] {
    std::mt19937_64 rng(6060);
    std::size_t bad = 0, degenerate = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t p = 1 + rng() % 6;
      auto w = InnerSpace::split(p);
      Matrix gens(0, 2 * p);
      const std::size_t k = 1 + rng() % (2 * p);
      for (std::size_t i = 0; i < k; ++i) {
        Vector v(2 * p);
        if (trial % 2 == 0 && i % 2 == 0) {
          // Isotropic vector (xi, sigma xi) with sigma a signed permutation.
          std::vector<std::size_t> perm(p);
          for (std::size_t a = 0; a < p; ++a) perm[a] = a;
          std::shuffle(perm.begin(), perm.end(), rng);
          for (std::size_t a = 0; a < p; ++a) {
            const long x = static_cast<long>(rng() % 5) - 2;
            v[a] = x;
            v[p + perm[a]] = rng() % 2 ? x : -x;
          }
        } else {
          for (auto& x : v) x = static_cast<long>(rng() % 5) - 2;
        }
        gens.append_row(v);
      }
      const Subspace l = Subspace::span(w, gens);
      const Decomposition d = decompose(l);
      const std::size_t r = d.radical.dim();
      if (r > 0) ++degenerate;
      const Subspace rd = sum(d.radical, d.dual);
      const bool ok = d.radical.same_as(intersect(l, perp(l))) && is_isotropic(d.radical) && is_isotropic(d.dual) &&
                      d.dual.dim() == r && rank(rd.gram()) == 2 * r && sum(d.radical, d.rest).contains(l) &&
                      d.rest.same_as(perp(rd));
      if (!ok) ++bad;
    }
    return Outcome{bad == 0, "500 subspaces (" + str(degenerate) + " degenerate), " + str(bad) + " failures"};
  });

  report(7, "beta diagonalization (i)-(iii) when beta is flat and kappa(beta) = 2p", 0, [&] {
    std::size_t applicable = 0, exact_unit = 0, weakened = 0, floating = 0, bad = 0;
    double worst = 0;
    std::string notes;
    for (const CorpusEntry& e : corpus) {
      const Analysis& a = e.analysis;
      if (!(a.beta.flat && a.beta.kappa.kappa == 2 * e.spec.p && e.spec.p <= e.spec.n)) continue;
      ++applicable;
      const Check* c = a.find("beta.diagonalization");
      bool ok = c && c->status == CheckStatus::pass && a.diagonalization;
      if (ok) {
        const BetaDiagonalization& d = *a.diagonalization;
        if (d.status == DiagonalizationStatus::irrational_frame) {
          ++floating;
        } else if (d.unit_scaling) {
          ++exact_unit;
        } else {
          ++weakened;
        }
        if (!d.unit_scaling) {
          const double err = d.float_witness_error.value_or(1.0);
          worst = std::max(worst, err);
          if (err > 1e-12) ok = false;
        }
      }
      if (!ok) {
        ++bad;
        if (notes.size() < 300) notes += "; " + where(e) + (c ? " " + c->detail : "");
      }
    }
    char w[32];
    std::snprintf(w, sizeof w, "%.2e", worst);
    return Outcome{applicable > 0 && bad == 0,
                   str(applicable) + " instances: " + str(exact_unit) + " exact orthonormal, " + str(weakened) +
                       " exact diagonal with float witness, " + str(floating) + " floating frames; worst witness " +
                       w + ", " + str(bad) + " failures" + notes};
  });

  report(8, "Q = N1 on holomorphic instances", 0, [&] {
    std::size_t count = 0, bad = 0;
    for (const CorpusEntry& e : corpus) {
      if (e.spec.family != Family::holomorphic) continue;
      ++count;
      if (!compute_Q(e.generated.kp).q.same_as(image(e.generated.kp.alpha()))) ++bad;
    }
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Generated g = gen(FamilySpec{Family::holomorphic, 2 + s % 5, 2 + s % 7, 9000 + s});
      ++count;
      if (!compute_Q(g.kp).q.same_as(image(g.kp.alpha()))) ++bad;
    }
    return Outcome{count > 0 && bad == 0, str(count) + " instances, " + str(bad) + " mismatches"};
  });

  report(9, "K(X,JX) <= 0 and Gauss equation = -|alpha_Q|^2 on N(alpha_P)", 0, [&] {
    Tally t;
    for (const CorpusEntry& e : corpus) t.add(e.analysis, "pipeline.curvature", where(e));
    const std::size_t total = t.pass + t.fail + curvature_checked;
    std::string detail = str(total) + " pipeline-passing instances (" + str(curvature_checked) +
                         " from criterion 2), " + str(t.fail + curvature_failures.size()) + " failures";
    for (const auto& f : t.failed) detail += "; " + f;
    for (const auto& f : curvature_failures) detail += "; " + f;
    return Outcome{total > 0 && t.fail == 0 && curvature_failures.empty(), detail};
  });

  report(10, "oracle agreement, byte-exact round trip, exit-code contract", 0, [&] {
    std::size_t compared = 0, disagree = 0, flagged = 0, roundtrip_bad = 0;
    std::string notes;
    for (const CorpusEntry& e : corpus) {
      const std::string text = cli::serialize_instance(e.generated.kp);
      const KaehlerPoint back = cli::parse_instance(text);
      if (!(back == e.generated.kp) || cli::serialize_instance(back) != text) ++roundtrip_bad;
      if (!e.comparison) continue;
      ++compared;
      for (const Check& c : e.comparison->checks) {
        if (c.status == CheckStatus::flagged) ++flagged;
        if (c.status == CheckStatus::fail && notes.size() < 300) notes += "; " + where(e) + " " + c.name;
      }
      if (!e.comparison->agreement) ++disagree;
    }

    const fs::path dir = fs::temp_directory_path() / ("flatform_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<std::string> contract;
    auto expect = [&](const std::string& label, int got, int want) {
      if (got != want) contract.push_back(label + " exited " + std::to_string(got) + ", expected " + std::to_string(want));
    };
    std::ofstream(dir / "zero.json") << cli::serialize_instance(
        KaehlerPoint::make(3, 2, ComplexStructure::standard(3), BilinearMap(6, 6, InnerSpace::euclidean(2))));
    expect("analyze zero alpha", run_binary("analyze " + (dir / "zero.json").string(), dir / "r0.json"), 0);
    expect("gen composition",
           run_binary("gen --family composition --n 4 --p 3 --seed 11 --out " + (dir / "c.json").string(),
                      dir / "g.txt"),
           0);
    expect("analyze composition", run_binary("analyze --oracle " + (dir / "c.json").string(), dir / "r1.json"), 0);
    const auto r1 = cli::Json::parse(slurp(dir / "r1.json"));
    if (r1["verdict"] != "theorem_verified") contract.push_back("composition verdict " + r1["verdict"].dump());
    std::string bad_text = slurp(dir / "c.json");
    bad_text.replace(bad_text.find("\"J\": [\n    [") + 12, 1, "7");
    std::ofstream(dir / "bad.json") << bad_text;
    expect("analyze corrupted J", run_binary("analyze " + (dir / "bad.json").string(), dir / "r2.json"), 1);
    expect("gen twice", run_binary("gen --family holomorphic --n 3 --p 2 --seed 1", dir / "h1.json"), 0);
    run_binary("gen --family holomorphic --n 3 --p 2 --seed 1", dir / "h2.json");
    if (slurp(dir / "h1.json") != slurp(dir / "h2.json")) contract.push_back("gen not byte-identical");
    expect("fuzz --trials 0", run_binary("fuzz --trials 0", dir / "f0.json"), 0);
    expect("fuzz p=12", run_binary("fuzz --trials 2 --n 3 --p 12 --families holomorphic --no-oracle", dir / "f1.json"), 0);
    const auto f1 = cli::Json::parse(slurp(dir / "f1.json"));
    if (f1["verdicts"]["outside_theorem_scope"] != 2) contract.push_back("p=12 fuzz not outside_theorem_scope");
    if (exit_code(Verdict::violation_candidate) != 2) contract.push_back("violation_candidate does not map to 2");
    fs::remove_all(dir);

    std::string detail = str(compared) + " instances compared, " + str(disagree) + " disagreements, " +
                         str(flagged) + " flagged kappa checks; round trip " + str(corpus.size() - roundtrip_bad) +
                         "/" + str(corpus.size()) + " byte-exact; exit codes " +
                         (contract.empty() ? std::string("0/1 observed as specified, 2 via the verdict map") : "");
    for (const auto& c : contract) detail += " " + c + ";";
    return Outcome{compared > 0 && disagree == 0 && roundtrip_bad == 0 && contract.empty(), detail + notes};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures;
}
