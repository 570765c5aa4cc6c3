#include "mol/orders.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mol {

OrderReport universal_markov_order(const FrequencyIndex& index, const CodeLength& code) {
  return universal_markov_order(index, code.bits(index), code.name());
}

OrderReport universal_markov_order(const FrequencyIndex& index, double code_bits, std::string backend) {
  OrderReport report;
  report.n = index.size();
  report.backend = std::move(backend);
  report.code_bits = code_bits;
  report.profile.n = report.n;
  if (report.n == 0) return report;

  // (n-k) h_k is non-increasing in k and vanishes past L, so the scan stops by L+1.
  EntropyScanner scan(index);
  while (!scan.done()) {
    const std::size_t k = scan.order();
    const double weighted = scan.next();
    report.profile.weighted.push_back(weighted);
    report.profile.h.push_back(weighted / double(report.n - k));
    report.profile.vocab.push_back(index.vocab_size(k));
    if (weighted <= code_bits) {
      report.order = k;
      return report;
    }
  }
  throw std::logic_error("universal order scan did not terminate; code length must be positive");
}

std::size_t kt_order(const PpmLadder& ladder) {
  if (ladder.n == 0) return 0;
  // Candidates: every listed order plus the first order past the ladder (value D^-n),
  // restricted to k <= n-1.
  const std::size_t candidates = std::min(ladder.bits.size() + 1, ladder.n);
  double best = ladder.at(0);
  for (std::size_t k = 1; k < candidates; ++k) best = std::min(best, ladder.at(k));
  for (std::size_t k = 0; k < candidates; ++k) {
    if (ladder.at(k) <= best + kKtTieTolerance) return k;
  }
  return 0;
}

std::size_t kt_order(const FrequencyIndex& index) { return kt_order(ppm_ladder(index)); }

std::size_t mgz_order(const FrequencyIndex& index, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const std::size_t n = index.size();
  if (n == 0) return 0;
  const double threshold = lz78_code_length(index.sequence()) / double(n) + lambda;
  EntropyScanner scan(index);
  while (!scan.done()) {
    const std::size_t k = scan.order();
    if (scan.next() / double(n - k) <= threshold) return k;
  }
  throw std::logic_error("MGZ scan did not terminate");
}

RamTestResult ram_test(const FrequencyIndex& index, std::size_t order, double alpha, const CodeLength& code) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const std::size_t n = index.size();
  if (order >= n) throw std::invalid_argument("tested order must satisfy M < n");
  RamTestResult r;
  r.order = order;
  r.alpha = alpha;
  r.statistic = double(n - order) * index.cond_entropy(order) - code.test_bits(index);
  r.reject = r.statistic > std::log2(1.0 / alpha);
  return r;
}

}  // namespace mol
