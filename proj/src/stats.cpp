#include "mol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mol {

namespace {

// Prefix doubling with two counting-sort passes per round, O(n log n).
void build_suffix_array(std::span<const Symbol> s, std::size_t alphabet_size, std::vector<std::uint32_t>& sa,
                        std::vector<std::uint32_t>& rank) {
  const std::size_t n = s.size();
  sa.assign(n, 0);
  rank.assign(n, 0);
  if (n == 0) return;

  std::vector<std::uint32_t> tmp(n);
  std::vector<std::uint32_t> cnt(std::max(n, alphabet_size) + 1, 0);

  for (std::size_t i = 0; i < n; ++i) ++cnt[s[i] + 1];
  for (std::size_t c = 1; c < cnt.size(); ++c) cnt[c] += cnt[c - 1];
  for (std::size_t i = 0; i < n; ++i) sa[cnt[s[i]]++] = static_cast<std::uint32_t>(i);
  rank[sa[0]] = 0;
  for (std::size_t j = 1; j < n; ++j) rank[sa[j]] = rank[sa[j - 1]] + (s[sa[j]] != s[sa[j - 1]] ? 1 : 0);
  std::size_t classes = rank[sa[n - 1]] + 1;

  for (std::size_t k = 1; classes < n; k <<= 1) {
    // Order by second key: suffixes without a k-shifted partner sort first.
    std::size_t p = 0;
    for (std::size_t i = n - std::min(k, n); i < n; ++i) tmp[p++] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (sa[j] >= k) tmp[p++] = static_cast<std::uint32_t>(sa[j] - k);
    }
    // Stable counting sort by first key.
    std::fill(cnt.begin(), cnt.begin() + static_cast<std::ptrdiff_t>(classes + 1), 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[rank[i] + 1];
    for (std::size_t c = 1; c <= classes; ++c) cnt[c] += cnt[c - 1];
    for (std::size_t j = 0; j < n; ++j) sa[cnt[rank[tmp[j]]]++] = tmp[j];

    auto second = [&](std::uint32_t i) -> std::uint64_t { return i + k < n ? rank[i + k] + 1ULL : 0ULL; };
    tmp[sa[0]] = 0;
    for (std::size_t j = 1; j < n; ++j) {
      const bool differs = rank[sa[j]] != rank[sa[j - 1]] || second(sa[j]) != second(sa[j - 1]);
      tmp[sa[j]] = tmp[sa[j - 1]] + (differs ? 1 : 0);
    }
    rank.swap(tmp);
    classes = rank[sa[n - 1]] + 1;
  }
}

// Kasai et al.
std::vector<std::uint32_t> build_lcp(std::span<const Symbol> s, std::span<const std::uint32_t> sa,
                                     std::span<const std::uint32_t> rank) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> lcp(n, 0);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

}  // namespace

FrequencyIndex::FrequencyIndex(Sequence x) : x_(std::move(x)) {
  const std::size_t n = x_.size();
  if (n >= std::numeric_limits<std::uint32_t>::max()) throw std::length_error("sequence too long for index");
  build_suffix_array(x_.symbols(), x_.alphabet_size(), sa_, rank_);
  lcp_ = build_lcp(x_.symbols(), sa_, rank_);

  // Suffix sa[r] contributes a new k-gram for every k in (lcp[r], n - sa[r]].
  std::vector<std::int64_t> diff(n + 2, 0);
  for (std::size_t r = 0; r < n; ++r) {
    diff[lcp_[r] + 1] += 1;
    diff[n - sa_[r] + 1] -= 1;
    max_repetition_ = std::max<std::size_t>(max_repetition_, lcp_[r]);
  }
  vocab_.assign(n + 1, 0);
  vocab_[0] = 1;
  std::int64_t running = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    running += diff[k];
    vocab_[k] = static_cast<std::uint64_t>(running);
  }
}

std::uint64_t FrequencyIndex::count(std::span<const Symbol> w, std::size_t m) const {
  const std::size_t n = size();
  if (m != n && !(n > 0 && m == n - 1)) {
    throw std::invalid_argument("count is only served for prefixes of length n and n-1");
  }
  if (w.empty()) return m + 1;
  if (w.size() > n) return 0;

  const auto symbols = x_.symbols();
  // Three-way comparison of suffix p's |w|-prefix against w.
  auto compare = [&](std::uint32_t p) {
    const std::size_t len = std::min(w.size(), n - p);
    for (std::size_t i = 0; i < len; ++i) {
      if (symbols[p + i] != w[i]) return symbols[p + i] < w[i] ? -1 : 1;
    }
    return len < w.size() ? -1 : 0;
  };
  auto lo = std::partition_point(sa_.begin(), sa_.end(), [&](std::uint32_t p) { return compare(p) < 0; });
  auto hi = std::partition_point(lo, sa_.end(), [&](std::uint32_t p) { return compare(p) == 0; });
  auto total = static_cast<std::uint64_t>(hi - lo);

  if (m == n - 1) {
    const auto tail = symbols.subspan(n - w.size());
    if (std::equal(tail.begin(), tail.end(), w.begin())) --total;
  }
  return total;
}

std::uint64_t FrequencyIndex::vocab_size(std::size_t k) const {
  if (k > size()) return 0;
  return vocab_[k];
}

std::vector<std::uint32_t> FrequencyIndex::block_classes(std::size_t k) const {
  const std::size_t n = size();
  if (k > n) throw std::out_of_range("block length exceeds sequence length");
  std::vector<std::uint32_t> cls(n - k + 1, 0);
  if (k == 0) return cls;
  std::uint32_t next = 0;
  std::uint32_t current = 0;
  bool open = false;
  for (std::size_t r = 0; r < n; ++r) {
    const std::uint32_t p = sa_[r];
    if (n - p < k) {
      open = false;
      continue;
    }
    if (!open || lcp_[r] < k) {
      current = next++;
      open = true;
    }
    cls[p] = current;
  }
  return cls;
}

double weighted_cond_entropy(std::span<const std::uint32_t> context_classes,
                             std::span<const std::uint32_t> joint_classes, std::size_t n, std::size_t k) {
  // (k+1)-grams start at 0..n-k-1; their contexts are exactly the k-grams of x_1^{n-1}.
  const std::size_t starts = n - k;
  std::uint32_t max_ctx = 0;
  std::uint32_t max_joint = 0;
  for (std::size_t j = 0; j < starts; ++j) {
    max_ctx = std::max(max_ctx, context_classes[j]);
    max_joint = std::max(max_joint, joint_classes[j]);
  }
  std::vector<std::uint64_t> ctx_count(max_ctx + 1ULL, 0);
  std::vector<std::uint64_t> joint_count(max_joint + 1ULL, 0);
  for (std::size_t j = 0; j < starts; ++j) {
    ++ctx_count[context_classes[j]];
    ++joint_count[joint_classes[j]];
  }
  std::vector<double> log_ctx(ctx_count.size());
  std::vector<double> log_joint(joint_count.size());
  for (std::size_t c = 0; c < ctx_count.size(); ++c) log_ctx[c] = ctx_count[c] ? std::log2(double(ctx_count[c])) : 0.0;
  for (std::size_t c = 0; c < joint_count.size(); ++c) {
    log_joint[c] = joint_count[c] ? std::log2(double(joint_count[c])) : 0.0;
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < starts; ++j) sum += log_ctx[context_classes[j]] - log_joint[joint_classes[j]];
  return sum;
}

double FrequencyIndex::cond_entropy(std::size_t k) const {
  const std::size_t n = size();
  if (k >= n) throw std::domain_error("h_k is undefined for k >= n");
  if (k > max_repetition_) return 0.0;
  const auto ctx = block_classes(k);
  const auto joint = block_classes(k + 1);
  return weighted_cond_entropy(ctx, joint, n, k) / double(n - k);
}

double FrequencyIndex::cond_entropy_by_vocabulary(std::size_t k) const {
  const std::size_t n = size();
  if (k >= n) throw std::domain_error("h_k is undefined for k >= n");
  const auto ctx = block_classes(k);
  const auto joint = block_classes(k + 1);
  const std::size_t starts = n - k;

  const std::size_t joint_vocab = vocab_size(k + 1);
  std::vector<std::uint64_t> joint_count(joint_vocab, 0);
  std::vector<std::uint32_t> joint_context(joint_vocab, 0);
  std::vector<std::uint64_t> ctx_count(vocab_size(k), 0);
  for (std::size_t j = 0; j < starts; ++j) {
    ++joint_count[joint[j]];
    joint_context[joint[j]] = ctx[j];
    ++ctx_count[ctx[j]];
  }
  double sum = 0.0;
  for (std::size_t w = 0; w < joint_vocab; ++w) {
    const double nw = double(joint_count[w]);
    sum += nw / double(n - k) * std::log2(double(ctx_count[joint_context[w]]) / nw);
  }
  return sum;
}

EntropyProfile FrequencyIndex::profile(std::size_t kmax) const {
  const std::size_t n = size();
  if (kmax >= n) throw std::domain_error("profile requires kmax < n");
  EntropyProfile p;
  p.n = n;
  EntropyScanner scan(*this);
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double weighted = scan.next();
    p.weighted.push_back(weighted);
    p.h.push_back(weighted / double(n - k));
    p.vocab.push_back(vocab_size(k));
  }
  return p;
}

EntropyScanner::EntropyScanner(const FrequencyIndex& index) : index_(&index) {
  if (index.size() > 0) context_ = index.block_classes(0);
}

double EntropyScanner::next() {
  if (done()) throw std::out_of_range("entropy scan past k = n - 1");
  const std::size_t k = k_++;
  // Beyond L every context is unique, so h_k vanishes.
  if (k > index_->max_repetition()) return 0.0;
  auto joint = index_->block_classes(k + 1);
  const double weighted = weighted_cond_entropy(context_, joint, index_->size(), k);
  context_ = std::move(joint);
  return weighted;
}

}  // namespace mol
