#include "cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include "mol/codes.hpp"
#include "mol/mi.hpp"
#include "mol/orders.hpp"
#include "mol/parallel.hpp"
#include "mol/random.hpp"
#include "mol/sources.hpp"
#include "mol/stats.hpp"
#include "mol/verify.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace mol::cli {

namespace {

using Json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Formatting

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += csv_field(cells[i]);
  }
  return line + '\n';
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[std::size_t(i)] = digits[v & 15];
  return s;
}

// ---------------------------------------------------------------------------
// Options shared by every subcommand

struct Common {
  std::string format = "csv";
  std::string out;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Write output to PATH instead of stdout");
  app->add_option("--jobs", c.jobs, "Worker threads (0 = all cores); output does not depend on it");
  app->add_option("--seed", c.seed, "Master seed (default: MOL_SEED, else 0)");
}

std::uint64_t resolve_seed(const Common& c) {
  if (c.seed) return *c.seed;
  const char* env = std::getenv("MOL_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const std::string_view s(env);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("MOL_SEED is not an unsigned integer: " + std::string(s));
  }
  return v;
}

struct Meta {
  std::string command;
  std::uint64_t seed = 0;
  std::string backend;
  Json config;  // effective options except --jobs and --out

  std::string hash() const { return hex(fnv1a(config.dump())); }

  Json json() const {
    Json j;
    j["tool"] = "mol";
    j["version"] = MOL_VERSION;
    j["command"] = command;
    j["seed"] = seed;
    j["backend"] = backend;
    j["rng"] = kRngVersion;
    j["config_hash"] = hash();
    return j;
  }

  std::string csv_header() const {
    return "# tool: mol\n# version: " MOL_VERSION "\n# command: " + command + "\n# seed: " + std::to_string(seed) +
           "\n# backend: " + backend + "\n# rng: " + std::string(kRngVersion) + "\n# config_hash: " + hash() + '\n';
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << text;
  f.close();
  if (!f) throw IoError("error writing " + path);
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
}

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& s : items) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw std::invalid_argument(std::string(what) + ": not a non-negative integer: " + s);
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Input

struct InputOptions {
  std::string tokens = "bytes";
  std::string alphabet_file;
};

void add_input(CLI::App* app, InputOptions& o) {
  app->add_option("--tokens", o.tokens, "Tokenization of input files")
      ->check(CLI::IsMember({"bytes", "whitespace"}));
  app->add_option("--alphabet", o.alphabet_file, "JSON list of tokens fixing the alphabet");
}

IngestOptions ingest_options(const InputOptions& o) {
  IngestOptions opts;
  opts.tokens = o.tokens == "whitespace" ? TokenMode::whitespace : TokenMode::bytes;
  if (!o.alphabet_file.empty()) opts.alphabet = Alphabet::from_json(read_file(o.alphabet_file));
  return opts;
}

Json input_config(const InputOptions& o) {
  Json j;
  j["tokens"] = o.tokens;
  j["alphabet"] = o.alphabet_file;
  return j;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOptions {
  Common common;
  InputOptions input;
  std::string backend = "ppm";
  bool ppm_exact = false;
  bool kt = false;
  std::optional<double> mgz;
  std::string ram;
  std::vector<std::string> files;
};

struct RamSpec {
  std::size_t order = 0;
  double alpha = 0.0;
};

RamSpec parse_ram(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--ram expects M:alpha, got " + s);
  RamSpec r;
  r.order = parse_sizes({s.substr(0, colon)}, "--ram order").front();
  const std::string a = s.substr(colon + 1);
  const auto res = std::from_chars(a.data(), a.data() + a.size(), r.alpha);
  if (res.ec != std::errc() || res.ptr != a.data() + a.size()) {
    throw std::invalid_argument("--ram alpha is not a number: " + a);
  }
  if (!(r.alpha > 0.0 && r.alpha < 1.0)) throw std::invalid_argument("--ram alpha must lie in (0, 1)");
  return r;
}

struct EstimateResult {
  std::string file;
  std::size_t n = 0;
  std::size_t alphabet_size = 0;
  OrderReport report;
  std::size_t max_repetition = 0;
  std::optional<std::size_t> kt;
  std::optional<std::size_t> mgz;
  std::optional<RamTestResult> ram;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
  Meta meta;
  meta.command = "estimate";
  meta.seed = resolve_seed(o.common);
  meta.backend = o.backend;
  meta.config = {{"command", "estimate"}, {"backend", o.backend}, {"ppm_exact", o.ppm_exact},
                 {"kt", o.kt},             {"mgz", o.mgz ? Json(*o.mgz) : Json()},
                 {"ram", o.ram},           {"input", input_config(o.input)},
                 {"files", o.files},       {"format", o.common.format}};

  const auto code = make_code(o.backend, o.ppm_exact);
  const std::optional<RamSpec> ram = o.ram.empty() ? std::nullopt : std::optional(parse_ram(o.ram));
  const IngestOptions opts = ingest_options(o.input);

  std::vector<std::string> raw;
  for (const auto& f : o.files) raw.push_back(read_file(f));

  std::vector<EstimateResult> results(o.files.size());
  parallel_for(o.files.size(), o.common.jobs, [&](std::size_t i) {
    EstimateResult& r = results[i];
    const Sequence x = ingest(raw[i], opts);
    const FrequencyIndex idx(x);
    r.file = o.files[i];
    r.n = x.size();
    r.alphabet_size = x.alphabet_size();
    r.max_repetition = idx.max_repetition();
    r.report = universal_markov_order(idx, *code);
    if (o.kt) r.kt = kt_order(ppm_ladder(idx, o.ppm_exact ? PpmRange::exact : PpmRange::adaptive));
    if (o.mgz) r.mgz = mgz_order(idx, *o.mgz);
    if (ram) r.ram = ram_test(idx, ram->order, ram->alpha, *code);
  });

  if (o.common.format == "json") {
    Json j;
    j["meta"] = meta.json();
    j["results"] = Json::array();
    for (const auto& r : results) {
      Json e;
      e["file"] = r.file;
      e["n"] = r.n;
      e["alphabet_size"] = r.alphabet_size;
      e["backend"] = r.report.backend;
      e["H_bits"] = r.report.code_bits;
      e["order"] = r.report.order;
      e["max_repetition"] = r.max_repetition;
      e["profile"] = Json::array();
      for (std::size_t k = 0; k < r.report.profile.h.size(); ++k) {
        e["profile"].push_back({{"k", k}, {"h", r.report.profile.h[k]}, {"weighted", r.report.profile.weighted[k]}});
      }
      if (r.kt) e["kt_order"] = *r.kt;
      if (r.mgz) e["mgz_order"] = *r.mgz;
      if (r.ram) {
        e["ram"] = {{"order", r.ram->order},
                    {"alpha", r.ram->alpha},
                    {"statistic", r.ram->statistic},
                    {"reject", r.ram->reject}};
      }
      j["results"].push_back(e);
    }
    emit(o.common, dump(j), out);
    return kExitOk;
  }

  std::string text = meta.csv_header();
  text += join({"file", "n", "D", "backend", "H_bits", "order", "L", "kt_order", "mgz_order", "ram_statistic",
                "ram_reject"});
  for (const auto& r : results) {
    text += join({r.file, std::to_string(r.n), std::to_string(r.alphabet_size), r.report.backend,
                  fmt(r.report.code_bits), std::to_string(r.report.order), std::to_string(r.max_repetition),
                  r.kt ? std::to_string(*r.kt) : "", r.mgz ? std::to_string(*r.mgz) : "",
                  r.ram ? fmt(r.ram->statistic) : "", r.ram ? (r.ram->reject ? "true" : "false") : ""});
  }
  emit(o.common, text, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// profile

struct ProfileOptions {
  Common common;
  InputOptions input;
  std::string backend = "ppm";
  bool ppm_exact = false;
  std::optional<std::size_t> kmax;
  std::vector<std::string> blocks;
  std::string file;
};

int cmd_profile(const ProfileOptions& o, std::ostream& out) {
  Meta meta;
  meta.command = "profile";
  meta.seed = resolve_seed(o.common);
  meta.backend = o.backend;
  meta.config = {{"command", "profile"},
                 {"backend", o.backend},
                 {"ppm_exact", o.ppm_exact},
                 {"kmax", o.kmax ? Json(*o.kmax) : Json()},
                 {"blocks", o.blocks},
                 {"input", input_config(o.input)},
                 {"file", o.file},
                 {"format", o.common.format}};

  const auto code = make_code(o.backend, o.ppm_exact);
  const auto blocks = parse_sizes(o.blocks, "--blocks");
  const Sequence x = ingest(read_file(o.file), ingest_options(o.input));
  const FrequencyIndex idx(x);
  const std::size_t n = x.size();

  EntropyProfile profile;
  profile.n = n;
  if (n > 0) {
    const std::size_t kmax = o.kmax.value_or(std::min(n - 1, idx.max_repetition() + 1));
    if (kmax >= n) throw std::invalid_argument("--kmax must be < n = " + std::to_string(n));
    profile = idx.profile(kmax);
  } else if (o.kmax) {
    throw std::invalid_argument("--kmax needs a non-empty input");
  }
  const auto mi = mi_profile(x, blocks, *code);

  if (o.common.format == "json") {
    Json j;
    j["meta"] = meta.json();
    j["n"] = n;
    j["max_repetition"] = idx.max_repetition();
    j["profile"] = Json::array();
    for (std::size_t k = 0; k < profile.h.size(); ++k) {
      j["profile"].push_back(
          {{"k", k}, {"h", profile.h[k]}, {"weighted", profile.weighted[k]}, {"vocab", profile.vocab[k]}});
    }
    j["mi"] = Json::array();
    for (const auto& r : mi) {
      j["mi"].push_back({{"n", r.n},
                         {"m", r.m},
                         {"I_bits", r.mi},
                         {"order", r.order},
                         {"vocab", r.vocab},
                         {"bound_rhs", r.bound_rhs ? Json(*r.bound_rhs) : Json()},
                         {"bound_ok", r.bound_ok}});
    }
    emit(o.common, dump(j), out);
    return kExitOk;
  }

  std::string text = meta.csv_header();
  text += join({"k", "h_k", "weighted", "vocab"});
  for (std::size_t k = 0; k < profile.h.size(); ++k) {
    text += join({std::to_string(k), fmt(profile.h[k]), fmt(profile.weighted[k]), std::to_string(profile.vocab[k])});
  }
  if (!mi.empty()) {
    text += '\n';
    text += join({"n", "m", "I_bits", "order_M", "vocab_M", "bound_rhs", "bound_ok"});
    for (const auto& r : mi) {
      text += join({std::to_string(r.n), std::to_string(r.m), fmt(r.mi), std::to_string(r.order),
                    std::to_string(r.vocab), r.bound_rhs ? fmt(*r.bound_rhs) : "", r.bound_ok ? "true" : "false"});
    }
  }
  emit(o.common, text, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  Common common;
  std::size_t order = 1;
  std::vector<double> iid;
  std::optional<double> sticky;
  std::optional<std::uint64_t> random_seed;
  double concentration = 0.5;
  std::size_t alphabet_size = 2;
  std::vector<std::string> lengths{"1000", "10000"};
  std::size_t trials = 100;
  std::vector<std::string> backends{"ppm"};
  bool ppm_exact = false;
  bool no_kt = false;
  std::optional<double> mgz;
};

SourceModel make_source(const SimulateOptions& o) {
  const int chosen = int(!o.iid.empty()) + int(o.sticky.has_value()) + int(o.random_seed.has_value());
  if (chosen != 1) throw std::invalid_argument("choose exactly one source: --iid, --sticky or --random-seed");
  if (!o.iid.empty()) return SourceModel::iid(o.iid);
  if (o.sticky) return SourceModel::sticky(o.alphabet_size, o.order, *o.sticky);
  return SourceModel::random(o.alphabet_size, o.order, *o.random_seed, o.concentration);
}

Json experiment_json(const ExperimentReport& rep, const Meta& meta) {
  Json j;
  j["meta"] = meta.json();
  j["source"] = {{"description", rep.source}, {"order", rep.true_order}, {"entropy_rate", rep.entropy_rate}};
  j["trials"] = rep.config.trials;
  j["rows"] = Json::array();
  for (const auto& row : rep.rows) {
    Json r;
    r["n"] = row.n;
    r["backend"] = row.backend;
    r["hit_rate"] = row.hit_rate;
    r["mean_M"] = row.mean_order;
    r["mean_K"] = row.mean_kt;
    r["h_at_M"] = row.mean_h_at_order;
    r["h_P"] = rep.entropy_rate;
    r["mean_rate"] = row.mean_rate;
    Json hist = Json::object();
    for (const auto& [k, c] : row.order_histogram) hist[std::to_string(k)] = c;
    r["order_histogram"] = hist;
    Json orders = Json::array();
    Json kts = Json::array();
    Json mgz = Json::array();
    Json bits = Json::array();
    for (const auto& t : row.trials) {
      orders.push_back(t.order);
      kts.push_back(t.kt);
      if (t.mgz) mgz.push_back(*t.mgz);
      bits.push_back(t.code_bits);
    }
    r["M"] = orders;
    if (rep.config.kt) r["K"] = kts;
    if (rep.config.mgz_lambda) r["mgz"] = mgz;
    r["H_bits"] = bits;
    j["rows"].push_back(r);
  }
  return j;
}

std::string experiment_csv(const ExperimentReport& rep, const Meta& meta) {
  std::string text = meta.csv_header();
  text += join({"n", "backend", "hit_rate", "mean_M", "mean_K", "h_at_M", "h_P"});
  for (const auto& row : rep.rows) {
    text += join({std::to_string(row.n), row.backend, fmt(row.hit_rate), fmt(row.mean_order), fmt(row.mean_kt),
                  fmt(row.mean_h_at_order), fmt(rep.entropy_rate)});
  }
  return text;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  Meta meta;
  meta.command = "simulate";
  meta.seed = resolve_seed(o.common);
  std::string backends;
  for (const auto& b : o.backends) backends += (backends.empty() ? "" : ",") + b;
  meta.backend = backends;
  meta.config = {{"command", "simulate"},
                 {"order", o.order},
                 {"iid", o.iid},
                 {"sticky", o.sticky ? Json(*o.sticky) : Json()},
                 {"random_seed", o.random_seed ? Json(*o.random_seed) : Json()},
                 {"concentration", o.concentration},
                 {"alphabet_size", o.alphabet_size},
                 {"n", o.lengths},
                 {"trials", o.trials},
                 {"backends", o.backends},
                 {"ppm_exact", o.ppm_exact},
                 {"kt", !o.no_kt},
                 {"mgz", o.mgz ? Json(*o.mgz) : Json()},
                 {"seed", meta.seed},
                 {"format", o.common.format}};

  const SourceModel source = make_source(o);
  ExperimentConfig cfg;
  cfg.lengths = parse_sizes(o.lengths, "--n");
  cfg.trials = o.trials;
  cfg.seed = meta.seed;
  cfg.backends = o.backends;
  cfg.ppm_exact = o.ppm_exact;
  cfg.kt = !o.no_kt;
  cfg.mgz_lambda = o.mgz;
  cfg.jobs = o.common.jobs;
  const ExperimentReport rep = consistency_experiment(source, cfg);

  if (!o.common.out.empty()) {
    write_file(o.common.out + ".json", dump(experiment_json(rep, meta)));
    write_file(o.common.out + ".csv", experiment_csv(rep, meta));
    return kExitOk;
  }
  out << (o.common.format == "json" ? dump(experiment_json(rep, meta)) : experiment_csv(rep, meta));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  Common common;
  std::vector<std::string> suites;
  std::size_t max_n = 10;
  std::size_t alphabet_size = 2;
  std::size_t random = 0;
  std::size_t random_max_n = 2000;
  bool faulty = false;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  Meta meta;
  meta.command = "verify";
  meta.seed = resolve_seed(o.common);
  meta.backend = o.faulty ? "faulty" : "ppm,lz78";
  const std::vector<std::string> suites = o.suites.empty() ? suite_names() : o.suites;
  meta.config = {{"command", "verify"},     {"suites", suites},           {"n", o.max_n},
                 {"alphabet_size", o.alphabet_size}, {"random", o.random}, {"random_max_n", o.random_max_n},
                 {"faulty", o.faulty},      {"seed", meta.seed},          {"format", o.common.format}};

  if (o.max_n == 0) throw std::invalid_argument("--n must be >= 1");
  if (std::pow(double(o.alphabet_size), double(o.max_n)) > double(kKraftBudget)) {
    throw std::length_error("D^n exceeds the enumeration budget of " + std::to_string(kKraftBudget) + " strings");
  }
  VerifyConfig cfg;
  cfg.max_n = o.max_n;
  cfg.alphabet_size = o.alphabet_size;
  cfg.random_cases = o.random;
  cfg.random_max_n = o.random_max_n;
  cfg.seed = meta.seed;
  cfg.faulty_backend = o.faulty;
  cfg.jobs = o.common.jobs;
  const auto results = run_suites(suites, cfg);

  bool all = true;
  for (const auto& r : results) all = all && r.passed();

  if (o.common.format == "json") {
    Json j;
    j["meta"] = meta.json();
    j["suites"] = Json::array();
    for (const auto& r : results) {
      j["suites"].push_back({{"suite", r.name},
                             {"cases", r.cases},
                             {"violations", r.violations},
                             {"status", r.passed() ? "pass" : "fail"},
                             {"counterexample", r.counterexample}});
    }
    j["passed"] = all;
    emit(o.common, dump(j), out);
  } else {
    std::string text = meta.csv_header();
    text += join({"suite", "cases", "violations", "status", "counterexample"});
    for (const auto& r : results) {
      text += join({r.name, std::to_string(r.cases), std::to_string(r.violations), r.passed() ? "pass" : "fail",
                    r.counterexample});
    }
    emit(o.common, text, out);
  }
  return all ? kExitOk : kExitViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov order estimation from universal code lengths", "mol"};
  app.set_version_flag("--version", MOL_VERSION);
  app.require_subcommand(1);

  EstimateOptions est;
  auto* e = app.add_subcommand("estimate", "Universal, KT, MGZ orders and the RAM test for input files");
  add_common(e, est.common);
  add_input(e, est.input);
  e->add_option("--backend", est.backend, "Code length")->check(CLI::IsMember({"ppm", "lz78"}));
  e->add_flag("--ppm-exact", est.ppm_exact, "Evaluate every PPM order up to n-2 one by one");
  e->add_flag("--kt", est.kt, "Also report the Krichevsky-Trofimov order");
  e->add_option("--mgz", est.mgz, "Also report the MGZ order with this lambda > 0");
  e->add_option("--ram", est.ram, "Also run the order test M:alpha");
  e->add_option("files", est.files, "Input files")->required();

  ProfileOptions prof;
  auto* p = app.add_subcommand("profile", "Empirical entropy profile and block mutual information");
  add_common(p, prof.common);
  add_input(p, prof.input);
  p->add_option("--backend", prof.backend, "Code length for mutual information")
      ->check(CLI::IsMember({"ppm", "lz78"}));
  p->add_flag("--ppm-exact", prof.ppm_exact, "Evaluate every PPM order up to n-2 one by one");
  p->add_option("--kmax", prof.kmax, "Largest order (default min(n-1, L+1))");
  p->add_option("--blocks", prof.blocks, "Block sizes n for I(x_1^n; x_{n+1}^{2n})")->delimiter(',')->allow_extra_args(false);
  p->add_option("file", prof.file, "Input file")->required();

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo consistency of the order estimators");
  add_common(s, sim.common);
  s->add_option("--order", sim.order, "Markov order of the source");
  s->add_option("--iid", sim.iid, "I.i.d. source with these probabilities")->delimiter(',')->allow_extra_args(false);
  s->add_option("--sticky", sim.sticky, "Repeat the symbol `order` back with this probability");
  s->add_option("--random-seed", sim.random_seed, "Random Markov source drawn with this seed");
  s->add_option("--concentration", sim.concentration, "Dirichlet concentration of random rows");
  s->add_option("--alphabet-size", sim.alphabet_size, "Alphabet size of sticky and random sources");
  s->add_option("--n", sim.lengths, "Sample lengths")->delimiter(',')->allow_extra_args(false);
  s->add_option("--trials", sim.trials, "Samples per length");
  s->add_option("--backend", sim.backends, "Code lengths")->delimiter(',')->allow_extra_args(false)->check(CLI::IsMember({"ppm", "lz78"}));
  s->add_flag("--ppm-exact", sim.ppm_exact, "Evaluate every PPM order up to n-2 one by one");
  s->add_flag("--no-kt", sim.no_kt, "Skip the Krichevsky-Trofimov order");
  s->add_option("--mgz", sim.mgz, "Also estimate the MGZ order with this lambda");

  VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Exhaustive and random invariant suites");
  add_common(v, ver.common);
  v->add_option("--suite", ver.suites, "Suites to run (default all)")->delimiter(',')->allow_extra_args(false)->check(CLI::IsMember(suite_names()));
  v->add_option("--n", ver.max_n, "Enumerate every string of length 1..n");
  v->add_option("--alphabet-size", ver.alphabet_size, "Alphabet of the enumeration");
  v->add_option("--random", ver.random, "Extra seeded random strings");
  v->add_option("--random-max-n", ver.random_max_n, "Longest random string");
  v->add_flag("--faulty-backend", ver.faulty, "Replace the code lengths by H = -1 (negative control)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& ex) {
    return app.exit(ex, out, err);
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitConfig;
  }

  try {
    if (e->parsed()) return cmd_estimate(est, out);
    if (p->parsed()) return cmd_profile(prof, out);
    if (s->parsed()) return cmd_simulate(sim, out);
    return cmd_verify(ver, out);
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitIo;
  }
}

}  // namespace mol::cli
