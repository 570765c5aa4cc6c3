#pragma once

// Substring statistics of a single sequence: occurrence counts N(w|x),
// vocabulary sizes |V_k|, the maximal repetition length L, and empirical
// conditional entropies h_k (bits).

#include "mol/sequence.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mol {

struct EntropyProfile {
  std::size_t n = 0;
  std::vector<double> h;            // h[k], bits
  std::vector<double> weighted;     // (n - k) * h[k]
  std::vector<std::uint64_t> vocab; // |V_k(x_1^n)|

  std::size_t kmax() const noexcept { return h.empty() ? 0 : h.size() - 1; }
};

/// Suffix array with LCP table over one sequence. Immutable once built.
///
/// Substrings of equal length k are grouped into "block classes": dense ids
/// in lexicographic order, one per distinct k-gram. Most queries reduce to
/// counting start positions per class.
class FrequencyIndex {
 public:
  explicit FrequencyIndex(Sequence x);

  const Sequence& sequence() const noexcept { return x_; }
  std::size_t size() const noexcept { return x_.size(); }
  std::size_t alphabet_size() const noexcept { return x_.alphabet_size(); }

  /// N(w|x_1^m) for m in {n-1, n}; N(lambda|x_1^m) = m + 1.
  std::uint64_t count(std::span<const Symbol> w, std::size_t m) const;
  std::uint64_t count(std::span<const Symbol> w) const { return count(w, size()); }

  /// |V_k(x_1^n)|: 1 for k = 0, 0 for k > n.
  std::uint64_t vocab_size(std::size_t k) const;

  /// L(x_1^n): length of the longest substring occurring at least twice.
  std::size_t max_repetition() const noexcept { return max_repetition_; }

  /// h_k(x_1^n) by the position-sum form. Requires k < n.
  double cond_entropy(std::size_t k) const;

  /// h_k(x_1^n) by the vocabulary-sum form. Requires k < n.
  double cond_entropy_by_vocabulary(std::size_t k) const;

  /// h_0..h_kmax sharing block classes between consecutive orders. Requires kmax < n.
  EntropyProfile profile(std::size_t kmax) const;

  /// Class id of the k-gram starting at each 0-based position 0..n-k.
  /// For k = 0 every position (including n) maps to class 0.
  std::vector<std::uint32_t> block_classes(std::size_t k) const;

  std::span<const std::uint32_t> suffix_array() const noexcept { return sa_; }
  /// lcp[r] = LCP(suffix sa[r-1], suffix sa[r]); lcp[0] = 0.
  std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }

 private:
  Sequence x_;
  std::vector<std::uint32_t> sa_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::uint32_t> lcp_;
  std::vector<std::uint64_t> vocab_;
  std::size_t max_repetition_ = 0;
};

/// Computes (n - k) h_k from the classes of k-grams and (k+1)-grams.
double weighted_cond_entropy(std::span<const std::uint32_t> context_classes,
                             std::span<const std::uint32_t> joint_classes, std::size_t n, std::size_t k);

/// Walks h_0, h_1, ... reusing the block classes of the previous order.
class EntropyScanner {
 public:
  explicit EntropyScanner(const FrequencyIndex& index);

  /// Order of the value returned by the next call to next().
  std::size_t order() const noexcept { return k_; }
  bool done() const noexcept { return k_ >= index_->size(); }

  /// Returns (n - k) h_k for the current order k and advances. Requires !done().
  double next();

 private:
  const FrequencyIndex* index_;
  std::size_t k_ = 0;
  std::vector<std::uint32_t> context_;
};

}  // namespace mol
