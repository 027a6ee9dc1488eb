#include "netab/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>

#include "netab/errors.hpp"

namespace netab {

namespace {

void fill_missing(EmbeddingTable& table, Rng& rng) {
  const std::size_t d = table.dim();
  for (std::size_t r = 1; r < table.rows(); ++r) {
    if (table.pretrained[r]) continue;
    for (std::size_t b = 0; b < d; ++b) {
      table.matrix.at(r, b) = rng.uniform(-kUnknownInitRange, kUnknownInitRange);
    }
  }
  for (std::size_t b = 0; b < d; ++b) table.matrix.at(0, b) = 0.0;
}

}  // namespace

EmbeddingTable random_embeddings(const Vocabulary& vocab, std::size_t dim, Rng& rng) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
  EmbeddingTable table{Tensor({vocab.size(), dim}),
                       std::vector<std::uint8_t>(vocab.size(), 0)};
  fill_missing(table, rng);
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const Vocabulary& vocab, std::size_t dim, Rng& rng) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file " + path.string());

  EmbeddingTable table{Tensor({vocab.size(), dim}),
                       std::vector<std::uint8_t>(vocab.size(), 0)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected a token followed by " +
                            std::to_string(dim) + " values");
    }
    const std::string_view token(line.data(), space);

    row.clear();
    const char* p = line.data() + space;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                              ": unparsable value in vector for '" +
                              std::string(token) + "'");
      }
      row.push_back(v);
      p = next;
    }
    if (row.size() != dim) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": file vector has " + std::to_string(row.size()) +
                            " values but embedding dimension is " +
                            std::to_string(dim));
    }
    if (!vocab.contains(token)) continue;
    const auto id = static_cast<std::size_t>(vocab.id(token));
    if (id == static_cast<std::size_t>(kPadId)) continue;
    std::copy(row.begin(), row.end(), table.matrix.data() + id * dim);
    table.pretrained[id] = 1;
  }
  if (in.bad()) throw IoError("error reading embedding file " + path.string());
  fill_missing(table, rng);
  return table;
}

}  // namespace netab
