#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "netab/rng.hpp"
#include "netab/tensor.hpp"
#include "netab/text.hpp"

namespace netab {

inline constexpr std::size_t kDefaultEmbeddingDim = 300;
inline constexpr double kUnknownInitRange = 0.25;

/// |V| x d word vectors. Row 0 (padding) is all zeros.
struct EmbeddingTable {
  Tensor matrix;
  std::vector<std::uint8_t> pretrained;  // 1 if the row came from a file

  std::size_t rows() const { return matrix.dim(0); }
  std::size_t dim() const { return matrix.dim(1); }
};

/// Every non-pad row uniform in [-0.25, 0.25].
EmbeddingTable random_embeddings(const Vocabulary& vocab, std::size_t dim, Rng& rng);

/// Reads a GloVe text file (`token v1 ... vd` per line). Vocabulary tokens
/// found in the file get their vectors verbatim; the rest are drawn from
/// `rng` in index order as in random_embeddings().
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const Vocabulary& vocab, std::size_t dim, Rng& rng);

}  // namespace netab
