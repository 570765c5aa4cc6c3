#include "mol/mi.hpp"

#include "mol/orders.hpp"
#include "mol/parallel.hpp"
#include "mol/random.hpp"
#include "mol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mol {

namespace {

const double kLogPi2Over6 = std::log2(std::numbers::pi * std::numbers::pi / 6.0);
const double kLog2E = std::numbers::log2e;

void check_split(std::size_t split, std::size_t m) {
  if (split < 1 || split >= m) throw std::invalid_argument("split must satisfy 1 <= n < m");
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe r;
  for (double x : xs) r.mean += x;
  r.mean /= double(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / double(xs.size() - 1) / double(xs.size()));
  }
  return r;
}

}  // namespace

double pointwise_mi(const Sequence& x, std::size_t split, const CodeLength& code) {
  check_split(split, x.size());
  return code.bits(x.substr(0, split)) + code.bits(x.substr(split, x.size() - split)) - code.bits(x);
}

double mi_bound_formula(std::size_t alphabet_size, std::uint64_t vocab, std::size_t m, double code_bits) {
  const double d = double(alphabet_size);
  return 2.0 * (d * double(vocab) + double(m) * std::log2(d) / code_bits + 2.0 * kLogPi2Over6 + 4.0) *
         (2.0 * kLog2E + std::log2(double(m)));
}

MiReport mi_report(const Sequence& x, std::size_t split, const CodeLength& code) {
  check_split(split, x.size());
  MiReport r;
  r.n = split;
  r.m = x.size();
  const FrequencyIndex whole(x);
  const OrderReport order = universal_markov_order(whole, code);
  r.code_bits = order.code_bits;
  r.order = order.order;
  r.vocab = whole.vocab_size(order.order);
  r.mi = code.bits(x.substr(0, split)) + code.bits(x.substr(split, r.m - split)) - r.code_bits;
  r.admissible = r.order < split && r.order < r.m - split;
  if (r.admissible && dynamic_cast<const PpmCode*>(&code) != nullptr) {
    r.bound_rhs = mi_bound_formula(x.alphabet_size(), r.vocab, r.m, r.code_bits);
  }
  return r;
}

double mi_bound_rhs(const Sequence& x, std::size_t split, PpmRange range) {
  check_split(split, x.size());
  const FrequencyIndex whole(x);
  const OrderReport order = universal_markov_order(whole, PpmCode(range));
  const std::size_t m = x.size();
  if (order.order >= split) {
    throw std::domain_error("bound needs M(x_1^m) < n; got M=" + std::to_string(order.order) +
                            " n=" + std::to_string(split));
  }
  if (order.order >= m - split) {
    throw std::domain_error("bound needs M(x_1^m) < m-n; got M=" + std::to_string(order.order) +
                            " m-n=" + std::to_string(m - split));
  }
  return mi_bound_formula(x.alphabet_size(), whole.vocab_size(order.order), m, order.code_bits);
}

ExpectedMiReport expected_mi_check(const SourceModel& source, std::size_t n, std::size_t trials, std::uint64_t seed,
                                   std::size_t jobs) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (n == 0) throw std::invalid_argument("block length must be >= 1");
  const PpmCode ppm;
  const double d = double(source.alphabet_size());
  const double log_factor = std::log2(2.0 * double(n)) + 2.0 * kLog2E;
  std::vector<double> lhs(trials);
  std::vector<double> rhs(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    const Sequence x = source.sample(2 * n, derive_seed(seed, t));
    const FrequencyIndex whole(x);
    const OrderReport order = universal_markov_order(whole, ppm);
    lhs[t] = ppm.bits(x.substr(0, n)) + ppm.bits(x.substr(n, n)) - order.code_bits;
    rhs[t] = 2.0 *
             (d * double(whole.vocab_size(order.order)) + 4.0 * double(n) * std::log2(d) / order.code_bits +
              4.0 * kLogPi2Over6 + 6.0) *
             log_factor;
  });
  ExpectedMiReport r;
  r.n = n;
  r.trials = trials;
  const auto l = mean_and_se(lhs);
  const auto u = mean_and_se(rhs);
  r.lhs_mean = l.mean;
  r.lhs_se = l.se;
  r.rhs_mean = u.mean;
  r.rhs_se = u.se;
  r.indicator = r.lhs_mean <= r.rhs_mean + 2.0 * std::sqrt(l.se * l.se + u.se * u.se);
  return r;
}

std::vector<MiProfileRow> mi_profile(const Sequence& x, const std::vector<std::size_t>& blocks,
                                     const CodeLength& code) {
  std::vector<MiProfileRow> rows;
  for (std::size_t n : blocks) {
    if (n == 0 || 2 * n > x.size()) {
      throw std::invalid_argument("block " + std::to_string(n) + " needs 2n <= " + std::to_string(x.size()));
    }
    const MiReport r = mi_report(x.substr(0, 2 * n), n, code);
    rows.push_back({n, 2 * n, r.mi, r.order, r.vocab, r.bound_rhs, r.bound_ok()});
  }
  return rows;
}

double log_plus(double x) { return x >= 0.0 ? std::log2(x + 1.0) : 0.0; }

HilbergEstimate hilberg_estimate(const std::map<double, double>& values) {
  if (values.size() < 4) throw std::invalid_argument("Hilberg estimate needs at least 4 grid points");
  HilbergEstimate e;
  for (const auto& [n, s] : values) {
    if (!(n >= 2.0)) throw std::invalid_argument("grid points must be >= 2");
    e.grid.push_back(n);
    e.values.push_back(s);
    e.log_plus.push_back(log_plus(s));
    e.ratios.push_back(log_plus(s) / std::log2(n));
  }
  const std::size_t count = e.grid.size();
  const std::size_t first = count - (count + 1) / 2;
  e.fitted_points = count - first;

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = first; i < count; ++i) {
    mx += std::log2(e.grid[i]);
    my += e.log_plus[i];
  }
  mx /= double(e.fitted_points);
  my /= double(e.fitted_points);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = first; i < count; ++i) {
    const double dx = std::log2(e.grid[i]) - mx;
    const double dy = e.log_plus[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  e.slope = sxy / sxx;
  e.intercept = my - e.slope * mx;
  e.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  e.exponent = std::clamp(e.slope, 0.0, 1.0);
  return e;
}

}  // namespace mol
