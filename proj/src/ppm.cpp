#include "mol/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mol {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// log2 of small integers, shared across the orders of one ladder.
class Log2Table {
 public:
  explicit Log2Table(std::size_t max_value) : values_(max_value + 1, 0.0) {
    for (std::size_t v = 1; v <= max_value; ++v) values_[v] = std::log2(double(v));
  }
  double operator()(std::uint64_t v) const { return values_[v]; }

 private:
  std::vector<double> values_;
};

// -log2 PPM_k over positions k+1..n given the k-gram and (k+1)-gram classes.
// The first k symbols contribute k log2 D.
double adaptive_bits(std::span<const std::uint32_t> ctx, std::span<const std::uint32_t> joint, std::size_t n,
                     std::size_t k, std::size_t alphabet_size, const Log2Table& log2t) {
  const std::size_t starts = n - k;
  std::uint32_t max_ctx = 0;
  std::uint32_t max_joint = 0;
  for (std::size_t s = 0; s < starts; ++s) {
    max_ctx = std::max(max_ctx, ctx[s]);
    max_joint = std::max(max_joint, joint[s]);
  }
  std::vector<std::uint32_t> ctx_seen(max_ctx + 1ULL, 0);
  std::vector<std::uint32_t> joint_seen(max_joint + 1ULL, 0);
  double bits = double(k) * std::log2(double(alphabet_size));
  for (std::size_t s = 0; s < starts; ++s) {
    // Earlier starts s' < s are exactly the occurrences inside x_1^{i-1} (joint) and x_1^{i-2} (context).
    auto& cc = ctx_seen[ctx[s]];
    auto& jc = joint_seen[joint[s]];
    bits += log2t(cc + alphabet_size) - log2t(jc + 1ULL);
    ++cc;
    ++jc;
  }
  return bits;
}

// sum_{j >= first} 1/j^2.
double inverse_square_tail(std::size_t first) {
  constexpr std::size_t kDirect = 1000;
  double direct = 0.0;
  for (std::size_t j = first + kDirect - 1; j + 1 > first; --j) direct += 1.0 / (double(j) * double(j));
  // Euler-Maclaurin for the rest.
  const double m = double(first + kDirect);
  const double rest = 1.0 / m + 1.0 / (2.0 * m * m) + 1.0 / (6.0 * m * m * m) - 1.0 / (30.0 * std::pow(m, 5));
  return direct + rest;
}

}  // namespace

double ppm_predict(std::span<const Symbol> history, Symbol next, std::size_t k, std::size_t alphabet_size) {
  const std::size_t len = history.size();
  if (k >= len) return 1.0 / double(alphabet_size);
  const auto context = history.subspan(len - k);
  std::uint64_t ctx_count = 0;
  std::uint64_t joint_count = 0;
  for (std::size_t s = 0; s + k < len; ++s) {
    if (!std::equal(context.begin(), context.end(), history.begin() + static_cast<std::ptrdiff_t>(s))) continue;
    ++ctx_count;
    if (history[s + k] == next) ++joint_count;
  }
  return double(joint_count + 1) / double(ctx_count + alphabet_size);
}

double ppm_conditional(const Sequence& x, std::size_t i, std::size_t k) {
  if (i < 1 || i > x.size()) throw std::out_of_range("position must satisfy 1 <= i <= n");
  return ppm_predict(x.symbols().first(i - 1), x[i - 1], k, x.alphabet_size());
}

double ppm_log_measure(const FrequencyIndex& index, std::size_t k) {
  const std::size_t n = index.size();
  const std::size_t d = index.alphabet_size();
  if (k + 2 > n) return double(n) * std::log2(double(d));
  const Log2Table log2t(n + d);
  return adaptive_bits(index.block_classes(k), index.block_classes(k + 1), n, k, d, log2t);
}

double ppm_log_measure_closed(const FrequencyIndex& index, std::size_t k) {
  const std::size_t n = index.size();
  if (k + 2 > n) throw std::domain_error("closed form requires k <= n-2");
  const std::size_t d = index.alphabet_size();
  const auto ctx = index.block_classes(k);
  const auto joint = index.block_classes(k + 1);
  const std::size_t starts = n - k;
  std::vector<std::uint64_t> ctx_count(index.vocab_size(k), 0);
  std::vector<std::uint64_t> joint_count(index.vocab_size(k + 1), 0);
  for (std::size_t s = 0; s < starts; ++s) {
    ++ctx_count[ctx[s]];
    ++joint_count[joint[s]];
  }
  // ln of D^-k prod_w (D-1)! prod_a N(wa)! / (N(w) + D - 1)!
  double ln_measure = -double(k) * std::log(double(d));
  const double ln_gamma_d = std::lgamma(double(d));
  for (auto c : ctx_count) {
    if (c > 0) ln_measure += ln_gamma_d - std::lgamma(double(c + d));
  }
  for (auto c : joint_count) ln_measure += std::lgamma(double(c + 1));
  return -ln_measure / kLn2;
}

double ppm_alpha(std::size_t alphabet_size) {
  return -std::lgamma(1.0 + 1.0 / double(alphabet_size)) / kLn2;
}

double ppm_bound_gap(const FrequencyIndex& index, std::size_t k) {
  const std::size_t n = index.size();
  if (k + 2 > n) throw std::domain_error("PPM bound requires k <= n-2");
  const std::size_t d = index.alphabet_size();
  const auto ctx = index.block_classes(k);
  const auto joint = index.block_classes(k + 1);
  const std::size_t starts = n - k;
  std::vector<bool> seen(index.vocab_size(k), false);
  std::uint64_t prefix_vocab = 0;
  for (std::size_t s = 0; s < starts; ++s) {
    if (!seen[ctx[s]]) {
      seen[ctx[s]] = true;
      ++prefix_vocab;
    }
  }
  const double weighted = weighted_cond_entropy(ctx, joint, n, k);
  const double excess = ppm_log_measure(index, k) - double(k) * std::log2(double(d)) - weighted;
  return excess / (double(d) * double(prefix_vocab));
}

PpmLadder ppm_ladder(const FrequencyIndex& index, PpmRange range) {
  PpmLadder ladder;
  ladder.n = index.size();
  ladder.alphabet_size = index.alphabet_size();
  ladder.uniform_bits = double(ladder.n) * std::log2(double(ladder.alphabet_size));
  if (ladder.n < 2) return ladder;

  std::size_t last = ladder.n - 2;
  if (range == PpmRange::adaptive) last = std::min(last, index.max_repetition());

  const Log2Table log2t(ladder.n + ladder.alphabet_size);
  ladder.bits.reserve(last + 1);
  auto ctx = index.block_classes(0);
  for (std::size_t k = 0; k <= last; ++k) {
    auto joint = index.block_classes(k + 1);
    ladder.bits.push_back(adaptive_bits(ctx, joint, ladder.n, k, ladder.alphabet_size, log2t));
    ctx = std::move(joint);
  }
  return ladder;
}

double ppm_entropy(const PpmLadder& ladder) {
  // log2 of each mixture term: PPM_k / (k+1)^2 for listed orders, then the uniform tail.
  std::vector<double> terms;
  terms.reserve(ladder.bits.size() + 1);
  for (std::size_t k = 0; k < ladder.bits.size(); ++k) {
    terms.push_back(-ladder.bits[k] - 2.0 * std::log2(double(k + 1)));
  }
  terms.push_back(-ladder.uniform_bits + std::log2(inverse_square_tail(ladder.bits.size() + 1)));

  const double anchor = *std::max_element(terms.begin(), terms.end());
  double scaled = 0.0;
  for (double t : terms) scaled += std::exp2(t - anchor);
  const double log_series = anchor + std::log2(scaled);

  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double log_norm = std::log2(36.0 / (pi2 * pi2)) - 2.0 * std::log2(double(ladder.n + 1));
  return -(log_norm + log_series);
}

double ppm_entropy(const FrequencyIndex& index, PpmRange range) { return ppm_entropy(ppm_ladder(index, range)); }

double ppm_entropy(const Sequence& x, PpmRange range) { return ppm_entropy(FrequencyIndex(x), range); }

}  // namespace mol
