#include "netab/synthetic.hpp"

#include <algorithm>
#include <string>

#include "netab/errors.hpp"
#include "netab/rng.hpp"

namespace netab {

std::vector<TextRecord> synthetic_records(const SyntheticCorpusConfig& config) {
  if (config.cue_words_per_class == 0 || config.filler_words == 0) {
    throw ValidationError("synthetic corpus needs cue and filler vocabularies");
  }
  if (config.min_cues == 0 || config.min_cues > config.max_cues ||
      config.min_length > config.max_length ||
      config.max_cues + 1 > config.min_length) {
    throw ValidationError("synthetic corpus: inconsistent length/cue bounds");
  }
  Rng rng(config.seed);
  std::vector<TextRecord> records;
  records.reserve(config.size);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < config.size; ++i) {
    const int label = static_cast<int>(i % 2);
    const std::string own = label == kPositive ? "pos" : "neg";
    const std::string other = label == kPositive ? "neg" : "pos";

    const std::size_t length =
        config.min_length + rng.below(config.max_length - config.min_length + 1);
    const std::size_t cues =
        config.min_cues + rng.below(config.max_cues - config.min_cues + 1);
    words.clear();
    for (std::size_t c = 0; c < cues; ++c) {
      words.push_back(own + std::to_string(rng.below(config.cue_words_per_class)));
    }
    if (rng.uniform() < config.contrary_cue_probability) {
      words.push_back(other + std::to_string(rng.below(config.cue_words_per_class)));
    }
    while (words.size() < length) {
      words.push_back("w" + std::to_string(rng.below(config.filler_words)));
    }
    rng.shuffle(std::span<std::string>(words));

    TextRecord rec;
    rec.label = label;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w > 0) rec.text.push_back(' ');
      rec.text += words[w];
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace netab
