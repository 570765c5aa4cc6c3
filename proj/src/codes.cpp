#include "mol/codes.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace mol {

namespace {

std::uint64_t ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

double length_correction(std::size_t n) {
  return std::log2(std::numbers::pi * std::numbers::pi / 6.0) + 2.0 * std::log2(double(n + 1));
}

}  // namespace

double lz78_code_length(const Sequence& x) {
  const std::uint64_t d = x.alphabet_size();
  std::unordered_map<std::uint64_t, std::uint32_t> trie;
  trie.reserve(x.size() / 4 + 16);
  std::uint32_t nodes = 1;
  std::uint32_t current = 0;
  std::uint64_t phrases = 0;
  std::uint64_t bits = 0;
  const std::uint64_t symbol_bits = ceil_log2(d);
  for (Symbol s : x.symbols()) {
    const std::uint64_t key = std::uint64_t(current) * d + s;
    if (auto it = trie.find(key); it != trie.end()) {
      current = it->second;
      continue;
    }
    trie.emplace(key, nodes++);
    ++phrases;
    bits += ceil_log2(phrases) + symbol_bits;
    current = 0;
  }
  if (current != 0) bits += ceil_log2(phrases + 1);
  return double(bits);
}

double lz78_entropy(const Sequence& x) { return lz78_code_length(x) + length_correction(x.size()); }

std::unique_ptr<CodeLength> make_code(std::string_view name, bool ppm_exact) {
  if (name == "ppm") return std::make_unique<PpmCode>(ppm_exact ? PpmRange::exact : PpmRange::adaptive);
  if (name == "lz78") return std::make_unique<Lz78Code>();
  throw std::invalid_argument("unknown backend '" + std::string(name) + "' (expected ppm or lz78)");
}

void for_each_string(std::size_t n, std::size_t alphabet_size, const std::function<void(const Sequence&)>& fn) {
  auto alphabet = std::make_shared<const Alphabet>(Alphabet::synthetic(alphabet_size));
  std::vector<Symbol> digits(n, 0);
  while (true) {
    fn(Sequence(alphabet, digits));
    std::size_t pos = n;
    while (pos > 0 && digits[pos - 1] + 1 == alphabet_size) digits[--pos] = 0;
    if (pos == 0) return;
    ++digits[pos - 1];
  }
}

double kraft_sum(const CodeLength& code, std::size_t n, std::size_t alphabet_size) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= alphabet_size;
    if (total > kKraftBudget) throw std::length_error("D^n exceeds the Kraft enumeration budget");
  }
  double sum = 0.0;
  for_each_string(n, alphabet_size, [&](const Sequence& x) { sum += std::exp2(-code.bits(x)); });
  return sum;
}

}  // namespace mol
