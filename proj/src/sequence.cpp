#include "mol/sequence.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mol {

class AlphabetBuilder {
 public:
  Symbol intern(std::string_view token) {
    if (auto id = alphabet_.find(token)) return *id;
    alphabet_.add(std::string(token));
    return static_cast<Symbol>(alphabet_.size() - 1);
  }

  // Placeholder tokens keep D >= 2 for inputs with a single distinct token.
  Alphabet finish(TokenMode mode) && {
    for (int c = 0; alphabet_.size() < 2; ++c) {
      std::string candidate;
      if (mode == TokenMode::bytes) {
        candidate.assign(1, static_cast<char>(c));
      } else {
        candidate = "<unused" + std::to_string(c) + ">";
      }
      if (!alphabet_.find(candidate)) alphabet_.add(std::move(candidate));
    }
    return std::move(alphabet_);
  }

 private:
  Alphabet alphabet_;
};

Alphabet Alphabet::synthetic(std::size_t size) {
  if (size < 2) throw std::invalid_argument("alphabet size must be at least 2");
  Alphabet a;
  for (std::size_t i = 0; i < size; ++i) {
    if (size <= 26) {
      a.add(std::string(1, static_cast<char>('a' + i)));
    } else {
      a.add("s" + std::to_string(i));
    }
  }
  return a;
}

Alphabet Alphabet::from_tokens(std::vector<std::string> tokens) {
  if (tokens.empty()) throw std::invalid_argument("empty alphabet");
  if (tokens.size() < 2) throw std::invalid_argument("alphabet needs at least 2 tokens");
  Alphabet a;
  for (auto& t : tokens) {
    if (a.find(t)) throw std::invalid_argument("duplicate alphabet token '" + t + "'");
    a.add(std::move(t));
  }
  return a;
}

Alphabet Alphabet::from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("alphabet spec: ") + e.what());
  }
  if (!j.is_array()) throw std::invalid_argument("alphabet spec must be a JSON list of tokens");
  std::vector<std::string> tokens;
  for (const auto& t : j) {
    if (!t.is_string()) throw std::invalid_argument("alphabet tokens must be strings");
    tokens.push_back(t.get<std::string>());
  }
  return from_tokens(std::move(tokens));
}

const std::string& Alphabet::token(Symbol id) const {
  if (id >= tokens_.size()) throw std::out_of_range("symbol id outside alphabet");
  return tokens_[id];
}

std::optional<Symbol> Alphabet::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Alphabet::add(std::string token) {
  ids_.emplace(token, static_cast<Symbol>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

Sequence::Sequence(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
  if (!alphabet_) throw std::invalid_argument("sequence requires an alphabet");
  const auto d = alphabet_->size();
  if (std::any_of(symbols_.begin(), symbols_.end(), [d](Symbol s) { return s >= d; })) {
    throw std::invalid_argument("symbol id outside alphabet");
  }
}

namespace {

std::shared_ptr<const Alphabet> shared_synthetic(std::size_t size) {
  return std::make_shared<const Alphabet>(Alphabet::synthetic(size));
}

}  // namespace

Sequence Sequence::from_letters(std::string_view letters, std::size_t alphabet_size) {
  std::vector<Symbol> symbols;
  symbols.reserve(letters.size());
  for (char c : letters) {
    if (c < 'a' || static_cast<std::size_t>(c - 'a') >= alphabet_size) {
      throw std::invalid_argument(std::string("letter '") + c + "' outside alphabet");
    }
    symbols.push_back(static_cast<Symbol>(c - 'a'));
  }
  return Sequence(shared_synthetic(alphabet_size), std::move(symbols));
}

Sequence Sequence::from_symbols(std::vector<Symbol> symbols, std::size_t alphabet_size) {
  return Sequence(shared_synthetic(alphabet_size), std::move(symbols));
}

Sequence Sequence::slice(std::size_t first, std::size_t last) const {
  if (first < 1 || first > last + 1 || last > size()) {
    throw std::out_of_range("slice bounds must satisfy 1 <= j <= k+1 <= n+1");
  }
  return substr(first - 1, last + 1 - first);
}

Sequence Sequence::substr(std::size_t pos, std::size_t len) const {
  if (pos > size() || len > size() - pos) throw std::out_of_range("substring out of range");
  return Sequence(alphabet_, std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(pos),
                                                 symbols_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
}

std::string Sequence::render(std::string_view separator) const {
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i > 0) out += separator;
    out += alphabet_->token(symbols_[i]);
  }
  return out;
}

namespace {

template <typename Fn>
void for_each_token(std::string_view raw, TokenMode mode, Fn&& fn) {
  if (mode == TokenMode::bytes) {
    for (char c : raw) fn(std::string_view(&c, 1));
    return;
  }
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t j = i;
    while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
    if (j > i) fn(raw.substr(i, j - i));
    i = j;
  }
}

}  // namespace

Sequence ingest(std::string_view raw, const IngestOptions& options) {
  std::vector<Symbol> symbols;
  if (options.alphabet) {
    const Alphabet& a = *options.alphabet;
    for_each_token(raw, options.tokens, [&](std::string_view tok) {
      auto id = a.find(tok);
      if (!id) throw std::invalid_argument("token '" + std::string(tok) + "' not in alphabet");
      symbols.push_back(*id);
    });
    return Sequence(std::make_shared<const Alphabet>(a), std::move(symbols));
  }
  AlphabetBuilder builder;
  for_each_token(raw, options.tokens, [&](std::string_view tok) { symbols.push_back(builder.intern(tok)); });
  return Sequence(std::make_shared<const Alphabet>(std::move(builder).finish(options.tokens)),
                  std::move(symbols));
}

}  // namespace mol
