#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace netab {

/// Lowercases, splits punctuation into standalone tokens, splits on
/// whitespace. "It's good." -> {"it", "'", "s", "good", "."}.
std::vector<std::string> tokenize(std::string_view text);

inline constexpr std::int32_t kPadId = 0;
inline constexpr std::int32_t kUnknownId = 1;
inline constexpr std::size_t kDefaultMaxLen = 40;

/// Token <-> index bijection. Index 0 is padding, index 1 the unknown token;
/// real tokens start at 2.
class Vocabulary {
 public:
  Vocabulary();

  /// Rebuilds a vocabulary from its index->token list (as saved in a
  /// checkpoint). The first two entries must be the reserved tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::int32_t add(const std::string& token);
  void add_all(std::span<const std::string> tokens);

  /// Index of `token`, or kUnknownId.
  std::int32_t id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(std::int32_t id) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnknownToken = "<unk>";

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::int32_t, Hash, std::equal_to<>> index_;
  std::vector<std::string> tokens_;
};

/// Maps tokens to ids (unknown -> 1), truncates to max_len and right-pads
/// with 0. The result always has exactly max_len entries.
std::vector<std::int32_t> encode_sentence(std::span<const std::string> tokens,
                                          const Vocabulary& vocab,
                                          std::size_t max_len = kDefaultMaxLen);

}  // namespace netab
