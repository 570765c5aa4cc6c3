#include "mol/verify.hpp"

#include "mol/mi.hpp"
#include "mol/orders.hpp"
#include "mol/parallel.hpp"
#include "mol/random.hpp"
#include "mol/sources.hpp"
#include "mol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mol {

namespace {

constexpr double kTol = 1e-9;
// Strings up to this length use the full-range PPM ladder; longer ones the adaptive one (same value).
constexpr std::size_t kExactPpmLimit = 64;
// Splits, boundaries and prefixes sampled per long random string.
constexpr std::size_t kSampledPoints = 6;

struct Tally {
  std::uint64_t cases = 0;
  std::uint64_t violations = 0;
  std::string first;

  void check(bool ok, const std::function<std::string()>& describe) {
    ++cases;
    if (ok) return;
    if (violations++ == 0) first = describe();
  }
};

struct Env {
  const CodeLength* ppm_exact;
  const CodeLength* ppm_adaptive;
  const CodeLength* lz;
  bool exhaustive;  // case comes from full enumeration: check every order and split

  const CodeLength& ppm(std::size_t n) const { return n <= kExactPpmLimit ? *ppm_exact : *ppm_adaptive; }
};

std::string show(const Sequence& x) {
  const std::string sep = x.alphabet_size() <= 26 ? "" : " ";
  if (x.size() <= 48) return x.render(sep);
  return x.substr(0, 48).render(sep) + "...(n=" + std::to_string(x.size()) + ")";
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Orders worth checking: all of them for enumerated strings, a few past L otherwise.
std::size_t order_cap(std::size_t limit, std::size_t repetition, const Env& env) {
  return env.exhaustive ? limit : std::min(limit, repetition + 2);
}

// Every point of [first, last] for enumerated strings, else kSampledPoints evenly spaced ones.
std::vector<std::size_t> points(std::size_t first, std::size_t last, const Env& env) {
  std::vector<std::size_t> out;
  if (first > last) return out;
  const std::size_t span = last - first + 1;
  if (env.exhaustive || span <= kSampledPoints) {
    for (std::size_t p = first; p <= last; ++p) out.push_back(p);
    return out;
  }
  for (std::size_t j = 0; j < kSampledPoints; ++j) {
    const std::size_t p = first + (span - 1) * j / (kSampledPoints - 1);
    if (out.empty() || out.back() != p) out.push_back(p);
  }
  return out;
}

// h_k of x_first^last (1-based), 0 when the weight it carries vanishes.
double h_of(const Sequence& x, std::size_t first, std::size_t last, std::size_t k) {
  const Sequence s = x.slice(first, last);
  if (k >= s.size()) return 0.0;
  return FrequencyIndex(s).cond_entropy(k);
}

// ---------------------------------------------------------------------------

void suite_forms(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const std::size_t n = x.size();
  const std::size_t top = order_cap(n - 1, idx.max_repetition(), env);
  for (std::size_t k = 0; k <= top && k < n; ++k) {
    const double a = idx.cond_entropy(k);
    const double b = idx.cond_entropy_by_vocabulary(k);
    t.check(std::abs(a - b) <= 1e-12, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " position=" + num(a) + " vocabulary=" + num(b);
    });
  }
  for (std::size_t k = 0; k + 2 <= n && k <= top; ++k) {
    const double a = ppm_log_measure(idx, k);
    const double b = ppm_log_measure_closed(idx, k);
    t.check(std::abs(a - b) <= 1e-9, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " incremental=" + num(a) + " closed=" + num(b);
    });
  }
}

void suite_shift(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t n = x.size();
  if (n < 2) return;
  const FrequencyIndex whole(x);
  const FrequencyIndex tail(x.slice(2, n));
  const double log_d = std::log2(double(x.alphabet_size()));
  const std::size_t top = order_cap(n - 2, whole.max_repetition(), env);
  for (std::size_t k = 0; k <= top; ++k) {
    const double d = tail.cond_entropy(k) - whole.cond_entropy(k + 1);
    t.check(d >= -kTol && d <= log_d + kTol, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " h_k(x_2^n)-h_{k+1}(x_1^n)=" + num(d);
    });
  }
}

void suite_drop(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t n = x.size();
  if (n < 2) return;
  const FrequencyIndex whole(x);
  const FrequencyIndex tail(x.slice(2, n));
  const double c = std::log2(std::min(2.0, double(x.alphabet_size())));
  const std::size_t top = order_cap(n - 2, whole.max_repetition(), env);
  for (std::size_t k = 0; k <= top; ++k) {
    const double d = whole.cond_entropy(k) - double(n - 1 - k) / double(n - k) * tail.cond_entropy(k);
    t.check(d >= -kTol && d <= c + kTol, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " gap=" + num(d);
    });
  }
}

void suite_split(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t m = x.size();
  if (m < 2) return;
  const FrequencyIndex whole(x);
  const double c = std::log2(std::min(3.0, double(x.alphabet_size())));
  for (std::size_t n : points(1, m - 1, env)) {
    const FrequencyIndex head(x.slice(1, n));
    const std::size_t top = order_cap(std::min(n - 1, m - n), whole.max_repetition(), env);
    for (std::size_t k = 0; k <= top; ++k) {
      const double mk = double(m - k);
      double q = whole.cond_entropy(k) - double(n - k) / mk * head.cond_entropy(k);
      if (k > 0) q -= double(k) / mk * h_of(x, n - k + 1, n + k, k);
      if (m - n > k) q -= double(m - n - k) / mk * h_of(x, n + 1, m, k);
      t.check(q >= -kTol && q <= c + kTol, [&] {
        return "x=" + show(x) + " n=" + std::to_string(n) + " k=" + std::to_string(k) + " quantity=" + num(q);
      });
    }
  }
}

void suite_monotone(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const std::size_t n = x.size();
  const auto p = idx.profile(order_cap(n - 1, idx.max_repetition(), env));
  for (std::size_t k = 1; k < p.weighted.size(); ++k) {
    t.check(p.weighted[k] <= p.weighted[k - 1] + kTol, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " (n-k)h_k=" + num(p.weighted[k]) +
             " > (n-k+1)h_{k-1}=" + num(p.weighted[k - 1]);
    });
  }
}

void suite_hzero(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const std::size_t n = x.size();
  const std::size_t l = idx.max_repetition();
  const std::size_t top = env.exhaustive ? n - 1 : std::min(n - 1, l + 3);
  for (std::size_t k = l + 1; k <= top; ++k) {
    const double h = idx.cond_entropy(k);
    t.check(h == 0.0, [&] {
      return "x=" + show(x) + " L=" + std::to_string(l) + " k=" + std::to_string(k) + " h_k=" + num(h);
    });
  }
}

void suite_hbound(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t total = x.size();
  const std::size_t l_max = FrequencyIndex(x).max_repetition();
  for (std::size_t n : points(1, total, env)) {
    // h_l(x_1^{n+l}) = 0 once l exceeds L(x), which bounds L of every prefix.
    double sum = 0.0;
    for (std::size_t l = 0; n + l <= total && l <= l_max + 1; ++l) {
      sum += FrequencyIndex(x.slice(1, n + l)).cond_entropy(l);
    }
    const double bound = std::log2(double(n));
    t.check(sum <= bound + kTol, [&] {
      return "x=" + show(x) + " n=" + std::to_string(n) + " sum=" + num(sum) + " log n=" + num(bound);
    });
  }
}

void suite_lbound(const Sequence& x, const Env&, Tally& t) {
  const double n = double(x.size());
  const double d = double(x.alphabet_size());
  const std::size_t l = FrequencyIndex(x).max_repetition();
  const double bound = std::log(n - std::log(n) / std::log(d)) / std::log(d) - 1.0;
  t.check(double(l) >= bound - kTol, [&] {
    return "x=" + show(x) + " L=" + std::to_string(l) + " bound=" + num(bound);
  });
}

void suite_codeshift(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const double h = env.ppm(x.size()).bits(idx);
  const std::size_t base = universal_markov_order(idx, h, "ppm").order;
  for (double c : {1.0, 10.0}) {
    const std::size_t shifted = universal_markov_order(idx, h + c, "ppm+c").order;
    t.check(base >= shifted, [&] {
      return "x=" + show(x) + " c=" + num(c) + " M=" + std::to_string(base) + " M_c=" + std::to_string(shifted);
    });
  }
}

void suite_orderbound(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const std::size_t l = idx.max_repetition();
  for (const CodeLength* code : {&env.ppm(x.size()), env.lz}) {
    const std::size_t m = universal_markov_order(idx, *code).order;
    t.check(m <= l + 1, [&] {
      return "x=" + show(x) + " backend=" + code->name() + " M=" + std::to_string(m) + " L=" + std::to_string(l);
    });
  }
}

void suite_ktbound(const Sequence& x, const Env& env, Tally& t) {
  const FrequencyIndex idx(x);
  const auto range = x.size() <= kExactPpmLimit ? PpmRange::exact : PpmRange::adaptive;
  const auto ladder = ppm_ladder(idx, range);
  const std::size_t k = kt_order(ladder);
  const double h = env.ppm_exact->name() == "ppm" ? ppm_entropy(ladder) : env.ppm(x.size()).bits(idx);
  const std::size_t m = universal_markov_order(idx, h, "ppm").order;
  t.check(m <= k, [&] { return "x=" + show(x) + " M=" + std::to_string(m) + " K=" + std::to_string(k); });
}

void suite_mlogn(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t n = x.size();
  if (n < 2) return;
  const FrequencyIndex idx(x);
  for (const CodeLength* code : {&env.ppm(n), env.lz}) {
    const OrderReport r = universal_markov_order(idx, *code);
    const double lhs = double(r.order) / std::log2(double(n));
    const double rhs = double(n) / r.code_bits;
    t.check(lhs < rhs, [&] {
      return "x=" + show(x) + " backend=" + code->name() + " M/log n=" + num(lhs) + " n/H=" + num(rhs);
    });
  }
}

void suite_ppmbound(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t n = x.size();
  if (n < 2) return;
  const FrequencyIndex idx(x);
  const double lo = ppm_alpha(x.alphabet_size());
  const double hi = 2.0 * std::numbers::log2e + std::log2(double(n));
  const std::size_t top = order_cap(n - 2, idx.max_repetition(), env);
  for (std::size_t k = 0; k <= top; ++k) {
    const double g = ppm_bound_gap(idx, k);
    t.check(g >= lo - kTol && g <= hi + kTol, [&] {
      return "x=" + show(x) + " k=" + std::to_string(k) + " gap=" + num(g) + " range=[" + num(lo) + "," + num(hi) +
             "]";
    });
  }
}

void suite_mibound(const Sequence& x, const Env& env, Tally& t) {
  const std::size_t m = x.size();
  if (m < 2) return;
  const CodeLength& code = env.ppm(m);
  const FrequencyIndex whole(x);
  const OrderReport r = universal_markov_order(whole, code);
  if (r.order + 1 > m - r.order - 1) return;  // no admissible split
  const double rhs = mi_bound_formula(x.alphabet_size(), whole.vocab_size(r.order), m, r.code_bits);
  for (std::size_t n : points(r.order + 1, m - r.order - 1, env)) {
    const double mi = env.ppm(n).bits(x.slice(1, n)) + env.ppm(m - n).bits(x.slice(n + 1, m)) - r.code_bits;
    t.check(mi <= rhs + kTol, [&] {
      return "x=" + show(x) + " n=" + std::to_string(n) + " I=" + num(mi) + " bound=" + num(rhs);
    });
  }
}

using CaseFn = void (*)(const Sequence&, const Env&, Tally&);

const std::map<std::string, CaseFn>& case_suites() {
  static const std::map<std::string, CaseFn> table{
      {"forms", suite_forms},       {"shift", suite_shift},     {"drop", suite_drop},
      {"split", suite_split},         {"monotone", suite_monotone}, {"hzero", suite_hzero},
      {"hbound", suite_hbound},     {"lbound", suite_lbound}, {"codeshift", suite_codeshift},
      {"orderbound", suite_orderbound},         {"ktbound", suite_ktbound},     {"mlogn", suite_mlogn},
      {"ppmbound", suite_ppmbound}, {"mibound", suite_mibound},
  };
  return table;
}

SuiteResult run_kraft(const VerifyConfig& config, const CodeLength& ppm, const CodeLength& lz) {
  SuiteResult r;
  r.name = "kraft";
  for (const CodeLength* code : {&ppm, &lz}) {
    for (std::size_t n = 1; n <= config.max_n; ++n) {
      const double s = kraft_sum(*code, n, config.alphabet_size);
      ++r.cases;
      if (s <= 1.0 + 1e-9) continue;
      if (r.violations++ == 0) {
        r.counterexample = "backend=" + code->name() + " n=" + std::to_string(n) + " D=" +
                           std::to_string(config.alphabet_size) + " sum=" + num(s);
      }
    }
  }
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"forms", "shift",  "drop",  "split",  "monotone", "hzero",    "hbound",
                                              "lbound", "codeshift", "orderbound", "ktbound", "mlogn",    "kraft", "ppmbound",
                                              "mibound"};
  return names;
}

std::vector<Sequence> random_cases(const VerifyConfig& config) {
  std::vector<Sequence> out;
  out.reserve(config.random_cases);
  const std::size_t max_d = std::max<std::size_t>(2, config.random_max_alphabet);
  const double log_max_n = std::log(double(std::max<std::size_t>(1, config.random_max_n)));
  for (std::size_t c = 0; c < config.random_cases; ++c) {
    Rng rng(derive_seed(config.seed, c));
    const std::size_t d = 2 + rng.next() % (max_d - 1);
    std::size_t order = rng.next() % 4;
    while (order > 0 && std::pow(double(d), double(order)) > 64.0) --order;
    const auto n = std::size_t(std::floor(std::exp(rng.uniform() * log_max_n)));
    const double concentration = 0.2 + 2.0 * rng.uniform();
    const auto source = SourceModel::random(d, order, rng.next(), concentration);
    out.push_back(source.sample(std::clamp<std::size_t>(n, 1, config.random_max_n), rng.next()));
  }
  return out;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  return run_suites({name}, config).front();
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const VerifyConfig& config) {
  for (const auto& name : names) {
    if (name != "kraft" && !case_suites().contains(name)) throw std::invalid_argument("unknown suite: " + name);
  }
  if (config.alphabet_size < 2) throw std::invalid_argument("alphabet size must be >= 2");

  std::unique_ptr<CodeLength> ppm_exact;
  std::unique_ptr<CodeLength> ppm_adaptive;
  std::unique_ptr<CodeLength> lz;
  if (config.faulty_backend) {
    ppm_exact = std::make_unique<FunctionCode>("faulty", [](const Sequence&) { return -1.0; });
    ppm_adaptive = std::make_unique<FunctionCode>("faulty", [](const Sequence&) { return -1.0; });
    lz = std::make_unique<FunctionCode>("faulty", [](const Sequence&) { return -1.0; });
  } else {
    ppm_exact = std::make_unique<PpmCode>(PpmRange::exact);
    ppm_adaptive = std::make_unique<PpmCode>(PpmRange::adaptive);
    lz = std::make_unique<Lz78Code>();
  }

  std::vector<Sequence> cases;
  for (std::size_t n = 1; n <= config.max_n; ++n) {
    for_each_string(n, config.alphabet_size, [&](const Sequence& x) { cases.push_back(x); });
  }
  const std::size_t enumerated = cases.size();
  for (auto& x : random_cases(config)) cases.push_back(std::move(x));

  std::vector<SuiteResult> results;
  for (const auto& name : names) {
    if (name == "kraft") {
      results.push_back(run_kraft(config, *ppm_exact, *lz));
      continue;
    }
    const CaseFn fn = case_suites().at(name);
    std::vector<Tally> tallies(cases.size());
    parallel_for(cases.size(), config.jobs, [&](std::size_t i) {
      const Env env{ppm_exact.get(), ppm_adaptive.get(), lz.get(), i < enumerated};
      try {
        fn(cases[i], env, tallies[i]);
      } catch (const std::exception& e) {
        tallies[i].check(false, [&] { return "x=" + show(cases[i]) + " error: " + e.what(); });
      }
    });
    SuiteResult r;
    r.name = name;
    for (const auto& t : tallies) {
      r.cases += t.cases;
      if (t.violations > 0 && r.violations == 0) r.counterexample = t.first;
      r.violations += t.violations;
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace mol
