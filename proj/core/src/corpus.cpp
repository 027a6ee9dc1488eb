#include "netab/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "netab/errors.hpp"

namespace netab {

std::size_t LabeledCorpus::corrupted_count() const {
  return static_cast<std::size_t>(std::count_if(
      examples.begin(), examples.end(), [](const auto& e) { return e.corrupted; }));
}

CorpusFormat CorpusFormat::for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return CorpusFormat{ext == ".tsv" || ext == ".tab" ? '\t' : ','};
}

int parse_label(std::string_view field) {
  std::string lower;
  for (char c : field) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (lower == "0" || lower == "neg") return kNegative;
  if (lower == "1" || lower == "pos") return kPositive;
  throw ValidationError("unknown label '" + std::string(field) +
                        "' (expected 0, 1, neg or pos)");
}

namespace {

// RFC-4180 row splitter. Quoted fields may contain delimiters, doubled
// quotes and newlines.
class CsvReader {
 public:
  CsvReader(std::string_view content, char delimiter)
      : content_(content), delimiter_(delimiter) {}

  bool next(std::vector<std::string>& fields, std::size_t& row_line) {
    fields.clear();
    if (pos_ >= content_.size()) return false;
    row_line = line_;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (pos_ < content_.size()) {
      const char c = content_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < content_.size() && content_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
      } else if (c == '"' && field.empty() && !was_quoted) {
        quoted = true;
        was_quoted = true;
      } else if (c == delimiter_) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '\n') {
        ++line_;
        break;
      } else if (c != '\r') {
        field.push_back(c);
      }
    }
    if (quoted) {
      throw ValidationError("unterminated quoted field starting on line " +
                            std::to_string(row_line));
    }
    fields.push_back(std::move(field));
    return true;
  }

 private:
  std::string_view content_;
  char delimiter_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

bool blank_row(const std::vector<std::string>& fields) {
  return fields.size() == 1 && fields[0].empty();
}

std::string quote_field(const std::string& field) {
  const bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::vector<TextRecord> parse_records(std::string_view content, CorpusFormat format,
                                      const std::string& source) {
  if (content.size() >= 3 && content.substr(0, 3) == "\xEF\xBB\xBF") {
    content.remove_prefix(3);
  }
  CsvReader reader(content, format.delimiter);
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!reader.next(fields, line)) throw ValidationError(source + ": empty corpus file");

  std::ptrdiff_t label_col = -1, text_col = -1, corrupted_col = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == "label") label_col = static_cast<std::ptrdiff_t>(i);
    if (fields[i] == "text") text_col = static_cast<std::ptrdiff_t>(i);
    if (fields[i] == "corrupted") corrupted_col = static_cast<std::ptrdiff_t>(i);
  }
  if (label_col < 0 || text_col < 0) {
    throw ValidationError(source + ": header must name 'label' and 'text' columns");
  }
  const auto width = fields.size();

  std::vector<TextRecord> records;
  std::size_t row = 0;
  while (reader.next(fields, line)) {
    if (blank_row(fields)) continue;
    ++row;
    const std::string where = source + ": row " + std::to_string(row) + " (line " +
                              std::to_string(line) + ")";
    if (fields.size() != width) {
      throw ValidationError(where + ": expected " + std::to_string(width) +
                            " fields, found " + std::to_string(fields.size()));
    }
    TextRecord rec;
    try {
      rec.label = parse_label(fields[static_cast<std::size_t>(label_col)]);
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    rec.text = fields[static_cast<std::size_t>(text_col)];
    if (corrupted_col >= 0) {
      const auto& f = fields[static_cast<std::size_t>(corrupted_col)];
      if (f == "1" || f == "true") {
        rec.corrupted = true;
      } else if (f != "0" && f != "false") {
        throw ValidationError(where + ": corrupted flag must be 0 or 1, got '" + f + "'");
      }
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ValidationError(source + ": corpus has no rows");
  return records;
}

std::vector<TextRecord> read_records(const std::filesystem::path& path,
                                     CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_records(buffer.str(), format, path.string());
}

void extend_vocabulary(Vocabulary& vocab, const std::vector<TextRecord>& records) {
  for (const auto& r : records) vocab.add_all(tokenize(r.text));
}

LabeledCorpus encode_corpus(const std::vector<TextRecord>& records,
                            const Vocabulary& vocab, std::string name,
                            std::size_t max_len) {
  LabeledCorpus corpus;
  corpus.name = std::move(name);
  corpus.examples.reserve(records.size());
  for (const auto& r : records) {
    LabeledExample ex;
    ex.ids = encode_sentence(tokenize(r.text), vocab, max_len);
    ex.label = r.label;
    ex.corrupted = r.corrupted;
    ex.original_label = r.corrupted ? 1 - r.label : r.label;
    ex.text = r.text;
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

LabeledCorpus load_corpus(const std::filesystem::path& path, const Vocabulary& vocab,
                          CorpusFormat format, std::size_t max_len) {
  return encode_corpus(read_records(path, format), vocab,
                       path.filename().string(), max_len);
}

std::string corpus_to_csv(const LabeledCorpus& corpus) {
  std::string out = "label,text,corrupted\n";
  for (const auto& ex : corpus.examples) {
    out += std::to_string(ex.label);
    out += ',';
    out += quote_field(ex.text);
    out += ex.corrupted ? ",1\n" : ",0\n";
  }
  return out;
}

void write_corpus_csv(const LabeledCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus file " + path.string());
  out << corpus_to_csv(corpus);
  if (!out) throw IoError("error writing corpus file " + path.string());
}

namespace {

LabeledCorpus subset(const LabeledCorpus& source, std::string name,
                     std::span<const std::size_t> order) {
  LabeledCorpus out;
  out.name = std::move(name);
  out.classes = source.classes;
  out.examples.reserve(order.size());
  for (std::size_t i : order) out.examples.push_back(source.examples[i]);
  return out;
}

std::size_t holdout_size(std::size_t n) { return std::max<std::size_t>(1, n / 10); }

}  // namespace

CorpusSplit split_corpus(const LabeledCorpus& corpus, Rng& rng) {
  const std::size_t n = corpus.size();
  if (n < 10) {
    throw ValidationError("split_corpus: need at least 10 examples, got " +
                          std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));

  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_val = holdout_size(n - n_train);
  std::span<const std::size_t> all(order);
  return CorpusSplit{
      subset(corpus, corpus.name + "/train", all.subspan(0, n_train)),
      subset(corpus, corpus.name + "/validation", all.subspan(n_train, n_val)),
      subset(corpus, corpus.name + "/test", all.subspan(n_train + n_val)),
  };
}

std::pair<LabeledCorpus, LabeledCorpus> split_validation(const LabeledCorpus& test,
                                                         Rng& rng) {
  if (test.size() < 2) {
    throw ValidationError("need at least 2 test examples to carve out validation");
  }
  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t n_val = holdout_size(test.size());
  std::span<const std::size_t> all(order);
  return {subset(test, test.name + "/validation", all.subspan(0, n_val)),
          subset(test, test.name, all.subspan(n_val))};
}

void check_noise_rate(double noise_rate) {
  if (!(noise_rate >= 0.0 && noise_rate <= kMaxNoiseRate)) {
    throw ValidationError(
        "noise rate " + std::to_string(noise_rate) +
        " outside [0, 0.5]: the method assumes fewer than half the training "
        "labels are flipped");
  }
}

LabeledCorpus corrupt_labels(const LabeledCorpus& corpus, double noise_rate, Rng& rng) {
  check_noise_rate(noise_rate);
  if (corpus.classes != 2) {
    throw ValidationError("label corruption is defined for binary corpora only");
  }
  LabeledCorpus out = corpus;
  const std::size_t n = out.size();
  const auto flips = static_cast<std::size_t>(
      std::llround(noise_rate * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `flips` slots are a uniform sample.
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < flips; ++i) {
    auto& ex = out.examples[order[i]];
    ex.label = 1 - ex.label;
    ex.corrupted = ex.label != ex.original_label;
  }
  return out;
}

}  // namespace netab
