#include "mol/sources.hpp"

#include "mol/codes.hpp"
#include "mol/orders.hpp"
#include "mol/parallel.hpp"
#include "mol/random.hpp"
#include "mol/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mol {

namespace {

constexpr double kRowTolerance = 1e-9;
constexpr double kStationaryTolerance = 1e-10;
constexpr std::size_t kEnumerationBudget = std::size_t{1} << 20;

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t budget, const char* what) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    v *= base;
    if (v > budget) throw std::length_error(what);
  }
  return v;
}

std::string format_probabilities(const std::vector<double>& p) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  return os.str();
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  return cdf;
}

}  // namespace

SourceModel::SourceModel(std::size_t alphabet_size, std::size_t order, std::vector<std::vector<double>> rows,
                         std::string description)
    : alphabet_size_(alphabet_size), order_(order), rows_(std::move(rows)), description_(std::move(description)) {
  if (alphabet_size_ < 2) throw std::invalid_argument("alphabet size must be at least 2");
  const std::size_t states = checked_power(alphabet_size_, order_, kMaxContexts, "context space too large");
  if (rows_.size() != states) throw std::invalid_argument("transition table needs D^M rows");
  for (auto& row : rows_) {
    if (row.size() != alphabet_size_) throw std::invalid_argument("transition row needs D entries");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("transition probabilities must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) throw std::invalid_argument("transition row does not sum to 1");
    for (double& p : row) p /= sum;
  }

  // Ergodicity of the context chain: strongly connected and aperiodic.
  std::vector<std::vector<std::size_t>> forward(states);
  std::vector<std::vector<std::size_t>> backward(states);
  for (std::size_t c = 0; c < states; ++c) {
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      if (rows_[c][a] > 0.0) {
        forward[c].push_back(successor(c, a));
        backward[successor(c, a)].push_back(c);
      }
    }
  }
  auto bfs = [states](const std::vector<std::vector<std::size_t>>& graph) {
    std::vector<long> level(states, -1);
    std::deque<std::size_t> queue{0};
    level[0] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : graph[u]) {
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level;
  };
  const auto level = bfs(forward);
  const auto back_level = bfs(backward);
  for (std::size_t c = 0; c < states; ++c) {
    if (level[c] < 0 || back_level[c] < 0) throw std::invalid_argument("source chain is reducible");
  }
  long period = 0;
  for (std::size_t u = 0; u < states; ++u) {
    for (auto v : forward[u]) period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
  }
  if (period != 1) throw std::invalid_argument("source chain is periodic");

  // Stationary law: solve pi (P - I) = 0 with sum(pi) = 1.
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(long(states), long(states));
  for (std::size_t c = 0; c < states; ++c) {
    for (Symbol a = 0; a < alphabet_size_; ++a) system(long(successor(c, a)), long(c)) += rows_[c][a];
    system(long(c), long(c)) -= 1.0;
  }
  system.row(long(states) - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(states));
  rhs(long(states) - 1) = 1.0;
  const Eigen::VectorXd pi = system.fullPivLu().solve(rhs);
  stationary_.resize(states);
  double total = 0.0;
  for (std::size_t c = 0; c < states; ++c) {
    stationary_[c] = std::max(0.0, pi(long(c)));
    total += stationary_[c];
  }
  for (double& p : stationary_) p /= total;
  std::vector<double> image(states, 0.0);
  for (std::size_t c = 0; c < states; ++c) {
    for (Symbol a = 0; a < alphabet_size_; ++a) image[successor(c, a)] += stationary_[c] * rows_[c][a];
  }
  for (std::size_t c = 0; c < states; ++c) {
    if (std::abs(image[c] - stationary_[c]) > kStationaryTolerance) {
      throw std::runtime_error("stationary distribution did not converge");
    }
  }

  for (const auto& row : rows_) cdf_.push_back(cumulative(row));
  stationary_cdf_ = cumulative(stationary_);
}

SourceModel SourceModel::iid(std::vector<double> probabilities) {
  const std::size_t d = probabilities.size();
  std::string description = "iid:" + format_probabilities(probabilities);
  return SourceModel(d, 0, {std::move(probabilities)}, std::move(description));
}

SourceModel SourceModel::markov(std::size_t alphabet_size, std::size_t order, std::vector<std::vector<double>> rows) {
  std::ostringstream os;
  os << "markov:D=" << alphabet_size << ":M=" << order << ":rows=";
  for (std::size_t c = 0; c < rows.size(); ++c) os << (c ? ";" : "") << format_probabilities(rows[c]);
  return SourceModel(alphabet_size, order, std::move(rows), os.str());
}

SourceModel SourceModel::sticky(std::size_t alphabet_size, std::size_t order, double stay) {
  if (order == 0) throw std::invalid_argument("sticky source needs order >= 1");
  if (!(stay >= 0.0 && stay <= 1.0)) throw std::invalid_argument("stay probability must lie in [0, 1]");
  if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be at least 2");
  const std::size_t states = checked_power(alphabet_size, order, kMaxContexts, "context space too large");
  const std::size_t oldest_weight = states / alphabet_size;
  std::vector<std::vector<double>> rows(states, std::vector<double>(alphabet_size));
  for (std::size_t c = 0; c < states; ++c) {
    const std::size_t oldest = c / oldest_weight;
    for (std::size_t a = 0; a < alphabet_size; ++a) {
      rows[c][a] = a == oldest ? stay : (1.0 - stay) / double(alphabet_size - 1);
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "sticky:D=" << alphabet_size << ":M=" << order << ":stay=" << stay;
  return SourceModel(alphabet_size, order, std::move(rows), os.str());
}

SourceModel SourceModel::random(std::size_t alphabet_size, std::size_t order, std::uint64_t seed,
                                double concentration, double floor) {
  if (!(concentration > 0.0)) throw std::invalid_argument("concentration must be positive");
  if (!(floor >= 0.0 && floor * double(alphabet_size) < 1.0)) throw std::invalid_argument("invalid floor");
  if (alphabet_size < 2) throw std::invalid_argument("alphabet size must be at least 2");
  const std::size_t states = checked_power(alphabet_size, order, kMaxContexts, "context space too large");
  Rng rng(seed);
  std::vector<std::vector<double>> rows(states, std::vector<double>(alphabet_size));
  for (auto& row : rows) {
    double sum = 0.0;
    for (double& p : row) sum += (p = rng.gamma(concentration));
    // Mixing with the uniform floor keeps every entry >= floor exactly.
    for (double& p : row) p = floor + (1.0 - double(alphabet_size) * floor) * (p / sum);
  }
  std::ostringstream os;
  os.precision(17);
  os << "random:D=" << alphabet_size << ":M=" << order << ":seed=" << seed << ":c=" << concentration
     << ":floor=" << floor;
  return SourceModel(alphabet_size, order, std::move(rows), os.str());
}

Sequence SourceModel::sample(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::size_t context = rng.categorical(stationary_cdf_);
  std::vector<Symbol> symbols;
  symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<Symbol>(rng.categorical(cdf_[context]));
    symbols.push_back(a);
    context = successor(context, a);
  }
  return Sequence::from_symbols(std::move(symbols), alphabet_size_);
}

double SourceModel::cond_entropy(std::size_t k) const {
  checked_power(alphabet_size_, std::max(k, order_), kEnumerationBudget, "conditional entropy budget exceeded");
  const std::size_t states = rows_.size();
  // Joint law of (last min(k, M) symbols, next symbol).
  const std::size_t kept = checked_power(alphabet_size_, std::min(k, order_), kEnumerationBudget, "budget");
  std::vector<double> joint(kept * alphabet_size_, 0.0);
  for (std::size_t c = 0; c < states; ++c) {
    for (Symbol a = 0; a < alphabet_size_; ++a) joint[(c % kept) * alphabet_size_ + a] += stationary_[c] * rows_[c][a];
  }
  double h = 0.0;
  for (std::size_t c = 0; c < kept; ++c) {
    double marginal = 0.0;
    for (Symbol a = 0; a < alphabet_size_; ++a) marginal += joint[c * alphabet_size_ + a];
    for (Symbol a = 0; a < alphabet_size_; ++a) {
      const double p = joint[c * alphabet_size_ + a];
      if (p > 0.0) h += p * std::log2(marginal / p);
    }
  }
  return h;
}

double SourceModel::entropy_rate() const { return cond_entropy(order_); }

double SourceModel::renyi_block_entropy(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("Renyi block entropy needs n >= 1");
  const std::size_t states = rows_.size();
  if (states * states > kEnumerationBudget) throw std::length_error("context-pair space too large");
  // v(s, t) carries sum over x of P(x, context s) P(x, context t), rescaled each step.
  std::vector<double> v(states * states);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t t = 0; t < states; ++t) v[s * states + t] = stationary_[s] * stationary_[t];
  }
  std::vector<double> next(states * states);
  double log_total = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < states; ++s) {
      for (std::size_t t = 0; t < states; ++t) {
        const double w = v[s * states + t];
        if (w == 0.0) continue;
        for (Symbol a = 0; a < alphabet_size_; ++a) {
          const double p = rows_[s][a] * rows_[t][a];
          if (p > 0.0) next[successor(s, a) * states + successor(t, a)] += w * p;
        }
      }
    }
    const double z = std::accumulate(next.begin(), next.end(), 0.0);
    log_total += std::log2(z);
    for (double& x : next) x /= z;
    v.swap(next);
  }
  return -log_total;
}

double SourceModel::probability(std::span<const Symbol> x) const {
  std::vector<double> forward = stationary_;
  std::vector<double> next(forward.size());
  for (Symbol a : x) {
    if (a >= alphabet_size_) throw std::invalid_argument("symbol outside alphabet");
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c < forward.size(); ++c) next[successor(c, a)] += forward[c] * rows_[c][a];
    forward.swap(next);
  }
  return std::accumulate(forward.begin(), forward.end(), 0.0);
}

// ---------------------------------------------------------------------------

const ExperimentRow& ExperimentReport::row(std::size_t n, const std::string& backend) const {
  for (const auto& r : rows) {
    if (r.n == n && r.backend == backend) return r;
  }
  throw std::out_of_range("no experiment row for n=" + std::to_string(n) + " backend=" + backend);
}

ExperimentReport consistency_experiment(const SourceModel& source, const ExperimentConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (config.lengths.empty()) throw std::invalid_argument("no sequence lengths given");
  std::vector<std::unique_ptr<CodeLength>> codes;
  for (const auto& name : config.backends) codes.push_back(make_code(name, config.ppm_exact));
  if (codes.empty()) throw std::invalid_argument("no backends given");
  if (config.mgz_lambda && !(*config.mgz_lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  const std::size_t lengths = config.lengths.size();
  const std::size_t backends = codes.size();
  const std::size_t longest = *std::max_element(config.lengths.begin(), config.lengths.end());
  const PpmRange range = config.ppm_exact ? PpmRange::exact : PpmRange::adaptive;

  // outcomes[(li * backends + bi) * trials + t]
  std::vector<TrialOutcome> outcomes(lengths * backends * config.trials);
  parallel_for(config.trials, config.jobs, [&](std::size_t t) {
    const Sequence full = source.sample(longest, derive_seed(config.seed, t));
    for (std::size_t li = 0; li < lengths; ++li) {
      const FrequencyIndex index(full.substr(0, config.lengths[li]));
      std::optional<PpmLadder> ladder;
      auto get_ladder = [&]() -> const PpmLadder& {
        if (!ladder) ladder = ppm_ladder(index, range);
        return *ladder;
      };
      const std::size_t kt = config.kt ? kt_order(get_ladder()) : 0;
      const auto mgz = config.mgz_lambda ? std::optional(mgz_order(index, *config.mgz_lambda)) : std::nullopt;
      for (std::size_t bi = 0; bi < backends; ++bi) {
        const double bits = config.backends[bi] == "ppm" ? ppm_entropy(get_ladder()) : codes[bi]->bits(index);
        const OrderReport report = universal_markov_order(index, bits, config.backends[bi]);
        TrialOutcome& out = outcomes[(li * backends + bi) * config.trials + t];
        out.order = report.order;
        out.kt = kt;
        out.mgz = mgz;
        out.code_bits = bits;
        out.h_at_order = report.profile.h.empty() ? 0.0 : report.profile.h[report.order];
        out.max_repetition = index.max_repetition();
      }
    }
  });

  ExperimentReport report;
  report.source = source.description();
  report.true_order = source.order();
  report.entropy_rate = source.entropy_rate();
  report.config = config;
  for (std::size_t li = 0; li < lengths; ++li) {
    for (std::size_t bi = 0; bi < backends; ++bi) {
      ExperimentRow row;
      row.n = config.lengths[li];
      row.backend = config.backends[bi];
      const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>((li * backends + bi) * config.trials);
      row.trials.assign(first, first + static_cast<std::ptrdiff_t>(config.trials));
      std::size_t hits = 0;
      for (const auto& o : row.trials) {
        ++row.order_histogram[o.order];
        hits += o.order == source.order() ? 1 : 0;
        row.mean_order += double(o.order);
        row.mean_kt += double(o.kt);
        row.mean_h_at_order += o.h_at_order;
        row.mean_rate += row.n ? o.code_bits / double(row.n) : 0.0;
      }
      const double trials = double(config.trials);
      row.hit_rate = double(hits) / trials;
      row.mean_order /= trials;
      row.mean_kt /= trials;
      row.mean_h_at_order /= trials;
      row.mean_rate /= trials;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace mol
