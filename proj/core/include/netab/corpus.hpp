#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "netab/rng.hpp"
#include "netab/text.hpp"

namespace netab {

inline constexpr int kNegative = 0;
inline constexpr int kPositive = 1;
inline constexpr double kMaxNoiseRate = 0.5;

struct LabeledExample {
  std::vector<std::int32_t> ids;  // exactly max_len entries
  int label = 0;                  // observed (possibly corrupted) label
  int original_label = 0;
  bool corrupted = false;         // label != original_label
  std::string text;
};

struct LabeledCorpus {
  std::string name;
  std::vector<LabeledExample> examples;
  std::size_t classes = 2;

  std::size_t size() const noexcept { return examples.size(); }
  bool empty() const noexcept { return examples.empty(); }
  std::size_t corrupted_count() const;
};

/// One parsed row of a `label,text` file, before encoding.
struct TextRecord {
  int label = 0;
  std::string text;
  bool corrupted = false;
};

/// Field delimiter of a corpus file: ',' for CSV, '\t' for TSV.
struct CorpusFormat {
  char delimiter = ',';

  /// TSV for `.tsv`/`.tab` extensions, CSV otherwise.
  static CorpusFormat for_path(const std::filesystem::path& path);
};

/// Parses "0"/"1"/"neg"/"pos" (case-insensitive); throws otherwise.
int parse_label(std::string_view field);

/// Reads an RFC-4180 file whose header names at least `label` and `text`
/// columns; an optional `corrupted` column (0/1) is honoured. File order is
/// preserved.
std::vector<TextRecord> read_records(const std::filesystem::path& path,
                                     CorpusFormat format);
std::vector<TextRecord> parse_records(std::string_view content, CorpusFormat format,
                                      const std::string& source = "<memory>");

void extend_vocabulary(Vocabulary& vocab, const std::vector<TextRecord>& records);

LabeledCorpus encode_corpus(const std::vector<TextRecord>& records,
                            const Vocabulary& vocab, std::string name,
                            std::size_t max_len = kDefaultMaxLen);

/// read_records + encode_corpus.
LabeledCorpus load_corpus(const std::filesystem::path& path, const Vocabulary& vocab,
                          CorpusFormat format, std::size_t max_len = kDefaultMaxLen);

/// Writes `label,text,corrupted` CSV with RFC-4180 quoting.
void write_corpus_csv(const LabeledCorpus& corpus, const std::filesystem::path& path);
std::string corpus_to_csv(const LabeledCorpus& corpus);

struct CorpusSplit {
  LabeledCorpus train;
  LabeledCorpus validation;
  LabeledCorpus test;
};

/// Shuffles, then takes floor(0.8 n) for training; of the remainder one
/// tenth (at least one example) is validation and the rest is test.
CorpusSplit split_corpus(const LabeledCorpus& corpus, Rng& rng);

/// Moves one tenth (at least one example) of `test` into a validation set.
/// Returns {validation, test}.
std::pair<LabeledCorpus, LabeledCorpus> split_validation(const LabeledCorpus& test,
                                                         Rng& rng);

/// Flips exactly round(noise_rate * n) labels chosen uniformly without
/// replacement. The input is not modified. Rates above 0.5 are rejected.
LabeledCorpus corrupt_labels(const LabeledCorpus& corpus, double noise_rate, Rng& rng);

void check_noise_rate(double noise_rate);

}  // namespace netab
