#pragma once

// Symbol sequences over a finite alphabet.
//
// Positions are 0-based everywhere in this library except Sequence::slice,
// which takes the 1-based inclusive bounds used in the usual x_j^k notation
// (x_j^{j-1} is the empty string).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mol {

using Symbol = std::uint32_t;

/// Bijection between external tokens and symbol ids 0..D-1, D >= 2.
class Alphabet {
 public:
  /// Letters "a", "b", ... for D <= 26, "s0", "s1", ... otherwise.
  static Alphabet synthetic(std::size_t size);

  /// Explicit token list; ids follow list order. Throws on duplicates or
  /// fewer than two tokens.
  static Alphabet from_tokens(std::vector<std::string> tokens);

  /// Parses a JSON array of strings.
  static Alphabet from_json(std::string_view json_text);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(Symbol id) const;
  std::optional<Symbol> find(std::string_view token) const;
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  Alphabet() = default;
  void add(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol> ids_;

  friend class AlphabetBuilder;
};

/// Immutable string over an alphabet. The empty sequence stands for lambda.
class Sequence {
 public:
  Sequence(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> symbols);

  /// Uniform-alphabet sequence with symbols given as letters 'a' + id.
  static Sequence from_letters(std::string_view letters, std::size_t alphabet_size);
  static Sequence from_symbols(std::vector<Symbol> symbols, std::size_t alphabet_size);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  std::size_t alphabet_size() const noexcept { return alphabet_->size(); }
  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const noexcept { return alphabet_; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  Symbol operator[](std::size_t pos) const noexcept { return symbols_[pos]; }

  /// x_first^last with 1-based inclusive bounds; first == last + 1 yields lambda.
  /// Requires 1 <= first <= last + 1 <= size() + 1.
  Sequence slice(std::size_t first, std::size_t last) const;

  /// 0-based substring [pos, pos + len).
  Sequence substr(std::size_t pos, std::size_t len) const;

  /// Tokens joined by `separator`.
  std::string render(std::string_view separator = "") const;

  friend bool operator==(const Sequence& a, const Sequence& b) {
    return a.alphabet_size() == b.alphabet_size() && a.symbols_ == b.symbols_;
  }

 private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Symbol> symbols_;
};

enum class TokenMode { bytes, whitespace };

struct IngestOptions {
  TokenMode tokens = TokenMode::bytes;
  /// When set, every token must belong to this alphabet.
  std::optional<Alphabet> alphabet;
};

/// Converts raw data into a sequence. Without an explicit alphabet, ids are
/// assigned in order of first occurrence; an inferred alphabet with fewer
/// than two tokens is padded with unused placeholder tokens up to D = 2.
Sequence ingest(std::string_view raw, const IngestOptions& options = {});

}  // namespace mol
