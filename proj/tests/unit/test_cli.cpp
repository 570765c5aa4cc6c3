#include "doctest.h"
#include "cli.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mol::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("mol_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string alternating_text() {
  std::string s;
  for (int i = 0; i < 300; ++i) s += (i % 7 < 4) ? 'a' : 'b';
  return s;
}

}  // namespace

TEST_CASE("estimate csv and json") {
  const auto flat = write("flat.txt", std::string(200, 'a'));
  const auto mixed = write("mixed.txt", alternating_text());

  const Run csv = run({"estimate", "--kt", "--mgz", "0.1", "--ram", "0:0.05", flat, mixed});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("# tool: mol\n", 0) == 0);
  CHECK(csv.out.find("# config_hash: ") != std::string::npos);
  CHECK(csv.out.find("# rng: ") != std::string::npos);
  const auto lines = data_lines(csv.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "file,n,D,backend,H_bits,order,L,kt_order,mgz_order,ram_statistic,ram_reject");
  const auto row = split(lines[1]);
  REQUIRE(row.size() == 11);
  CHECK(row[1] == "200");
  CHECK(row[5] == "0");
  CHECK(row[7] == "0");

  const Run js = run({"estimate", "--backend", "lz78", "--mgz", "0.1", "--format", "json", mixed});
  REQUIRE(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["meta"]["backend"] == "lz78");
  CHECK(j["meta"]["command"] == "estimate");
  const auto& r = j["results"][0];
  CHECK(r.contains("order"));
  CHECK(r.contains("mgz_order"));
  CHECK(r["profile"].size() == r["order"].get<std::size_t>() + 1);
}

TEST_CASE("estimate with whitespace tokens and explicit alphabet") {
  const auto text = write("words.txt", "x y x y x y z x y");
  const auto alpha = write("alpha.json", R"(["x", "y", "z", "w"])");
  const Run r = run({"estimate", "--tokens", "whitespace", "--alphabet", alpha, "--format", "json", text});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"][0]["n"] == 9);
  CHECK(j["results"][0]["alphabet_size"] == 4);
  const auto bad = write("bad.json", R"(["x"])");
  CHECK(run({"estimate", "--tokens", "whitespace", "--alphabet", bad, text}).code == mol::cli::kExitConfig);
}

TEST_CASE("profile tables") {
  const auto mixed = write("mixed.txt", alternating_text());
  const Run r = run({"profile", "--kmax", "8", "--blocks", "16,64", mixed});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 1 + 9 + 1 + 2);
  CHECK(lines[0] == "k,h_k,weighted,vocab");
  double prev = 1e300;
  for (std::size_t i = 1; i <= 9; ++i) {
    const auto cells = split(lines[i]);
    CHECK(cells[0] == std::to_string(i - 1));
    const double weighted = std::stod(cells[2]);
    CHECK(weighted <= prev + 1e-9);
    prev = weighted;
  }
  CHECK(lines[10] == "n,m,I_bits,order_M,vocab_M,bound_rhs,bound_ok");
  CHECK(split(lines[11])[0] == "16");

  // A list option takes exactly one argument, so the file stays positional.
  const Run trailing = run({"profile", "--kmax", "8", "--blocks", "16,64", mixed, "--jobs", "2"});
  CHECK(trailing.code == 0);
  CHECK(trailing.out == r.out);

  // h is zero past L for a periodic input.
  const auto periodic = write("periodic.txt", "abcabcabcabc");
  const Run p = run({"profile", "--kmax", "10", "--format", "json", periodic});
  REQUIRE(p.code == 0);
  const auto j = nlohmann::json::parse(p.out);
  const std::size_t l = j["max_repetition"];
  for (const auto& row : j["profile"]) {
    if (row["k"].get<std::size_t>() > l) CHECK(row["h"] == 0.0);
  }
  CHECK(run({"profile", "--kmax", "12", periodic}).code == mol::cli::kExitConfig);
  CHECK(run({"profile", "--blocks", "7", periodic}).code == mol::cli::kExitConfig);
}

TEST_CASE("simulate is deterministic across job counts") {
  const std::vector<std::string> base{"simulate", "--order", "1", "--sticky", "0.9", "--n", "500,2000",
                                      "--trials", "8",     "--seed",  "7",       "--backend", "ppm,lz78"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const Run a = with({});
  const Run b = with({});
  const Run c = with({"--jobs", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const auto lines = data_lines(a.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "n,backend,hit_rate,mean_M,mean_K,h_at_M,h_P");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double hit = std::stod(split(lines[i])[2]);
    CHECK(hit >= 0.0);
    CHECK(hit <= 1.0);
  }

  const Run ja = with({"--format", "json"});
  const Run jb = with({"--format", "json", "--jobs", "2"});
  CHECK(ja.out == jb.out);

  const auto prefix1 = (scratch() / "sim1").string();
  const auto prefix2 = (scratch() / "sim2").string();
  REQUIRE(with({"--out", prefix1}).code == 0);
  REQUIRE(with({"--out", prefix2, "--jobs", "4"}).code == 0);
  CHECK(slurp(prefix1 + ".csv") == slurp(prefix2 + ".csv"));
  CHECK(slurp(prefix1 + ".json") == slurp(prefix2 + ".json"));
  CHECK(slurp(prefix1 + ".csv") == a.out);
  const auto j = nlohmann::json::parse(slurp(prefix1 + ".json"));
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][0]["M"].size() == 8);
}

TEST_CASE("seed from the environment") {
  const std::vector<std::string> args{"simulate", "--iid", "0.5,0.5", "--n", "300", "--trials", "3"};
  ::setenv("MOL_SEED", "11", 1);
  const Run env = run(args);
  ::unsetenv("MOL_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "11"});
  const Run flag = run(explicit_args);
  REQUIRE(env.code == 0);
  CHECK(env.out == flag.out);
  CHECK(env.out.find("# seed: 11\n") != std::string::npos);
  ::setenv("MOL_SEED", "eleven", 1);
  CHECK(run(args).code == mol::cli::kExitConfig);
  ::unsetenv("MOL_SEED");
}

TEST_CASE("verify table and negative control") {
  const Run one = run({"verify", "--suite", "kraft", "--n", "3"});
  REQUIRE(one.code == 0);
  const auto lines = data_lines(one.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "suite,cases,violations,status,counterexample");
  CHECK(lines[1].rfind("kraft,6,0,pass", 0) == 0);

  const Run faulty = run({"verify", "--suite", "kraft", "--n", "3", "--faulty-backend"});
  CHECK(faulty.code == mol::cli::kExitViolation);
  CHECK(faulty.out.find("fail,backend=faulty n=1") != std::string::npos);

  const Run all = run({"verify", "--n", "6", "--format", "json"});
  CHECK(all.code == 0);
  CHECK(nlohmann::json::parse(all.out)["passed"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", (scratch() / "missing.txt").string()}).code == mol::cli::kExitIo);
  const auto flat = write("flat2.txt", "aaaa");
  CHECK(run({"estimate", "--backend", "zip", flat}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", "--ram", "1", flat}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", "--ram", "1:1.5", flat}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", "--ram", "9:0.05", flat}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", "--mgz", "-1", flat}).code == mol::cli::kExitConfig);
  CHECK(run({"simulate", "--n", "100"}).code == mol::cli::kExitConfig);
  CHECK(run({"simulate", "--iid", "0.5,0.5", "--sticky", "0.9", "--n", "100"}).code == mol::cli::kExitConfig);
  CHECK(run({"verify", "--n", "25"}).code == mol::cli::kExitConfig);
  CHECK(run({"verify", "--suite", "nope"}).code == mol::cli::kExitConfig);
  CHECK(run({"estimate", "--out", (scratch() / "no" / "dir" / "x.csv").string(), flat}).code == mol::cli::kExitIo);
  CHECK(run({"--help"}).code == 0);
}
