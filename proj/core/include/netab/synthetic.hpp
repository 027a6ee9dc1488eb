#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "netab/corpus.hpp"

namespace netab {

/// Generator for sentiment corpora with planted cue tokens.
///
/// Each sentence carries between min_cues and max_cues tokens from its own
/// class's cue pool ("posK" / "negK"), optionally one cue from the opposite
/// pool, and neutral filler ("wK") up to its length. Labels alternate, so
/// the corpus is exactly balanced for even sizes.
struct SyntheticCorpusConfig {
  std::size_t size = 2000;
  std::size_t cue_words_per_class = 60;
  std::size_t filler_words = 400;
  std::size_t min_length = 6;
  std::size_t max_length = 16;
  std::size_t min_cues = 1;
  std::size_t max_cues = 2;
  double contrary_cue_probability = 0.3;
  std::uint64_t seed = 7;
};

std::vector<TextRecord> synthetic_records(const SyntheticCorpusConfig& config);

}  // namespace netab
