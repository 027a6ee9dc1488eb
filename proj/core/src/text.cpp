#include "netab/text.hpp"

#include <algorithm>
#include <cctype>

#include "netab/errors.hpp"

namespace netab {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (std::isspace(ch)) {
      flush();
    } else if (ch < 0x80 && std::ispunct(ch)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary() {
  add(kPadToken);
  add(kUnknownToken);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnknownToken) {
    throw ValidationError("vocabulary must start with <pad>, <unk>");
  }
  Vocabulary vocab;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (vocab.contains(tokens[i])) {
      throw ValidationError("duplicate vocabulary token '" + tokens[i] + "'");
    }
    vocab.add(tokens[i]);
  }
  return vocab;
}

std::int32_t Vocabulary::add(const std::string& token) {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(tokens_.size());
  index_.emplace(token, id);
  tokens_.push_back(token);
  return id;
}

void Vocabulary::add_all(std::span<const std::string> tokens) {
  for (const auto& t : tokens) add(t);
}

std::int32_t Vocabulary::id(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnknownId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

const std::string& Vocabulary::token(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw ValidationError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::int32_t> encode_sentence(std::span<const std::string> tokens,
                                          const Vocabulary& vocab,
                                          std::size_t max_len) {
  std::vector<std::int32_t> ids(max_len, kPadId);
  const std::size_t n = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id(tokens[i]);
  return ids;
}

}  // namespace netab
