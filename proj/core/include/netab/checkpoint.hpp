#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "netab/errors.hpp"
#include "netab/model.hpp"
#include "netab/text.hpp"

namespace netab {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// 64-bit FNV-1a, used for payload checksums and input digests.
std::uint64_t fnv1a64(std::string_view bytes);

/// Raised when a checkpoint was written by an incompatible format version.
class CheckpointVersionError : public ValidationError {
 public:
  CheckpointVersionError(std::uint32_t found, std::uint32_t expected);
  std::uint32_t found() const noexcept { return found_; }
  std::uint32_t expected() const noexcept { return expected_; }

 private:
  std::uint32_t found_;
  std::uint32_t expected_;
};

struct Checkpoint {
  NetAbModel model;
  Vocabulary vocab;
  std::string metadata_json;  // caller-defined, e.g. the training config
};

// Layout:
//   "NETABCKP"            8 bytes magic
//   version               u32 little-endian
//   header length         u64 little-endian
//   header                JSON: model config, vocabulary, tensor table
//                         (name, shape, offset), payload checksum, metadata
//   payload               f64 little-endian, tensors back to back
void save_checkpoint(const std::filesystem::path& path, const NetAbModel& model,
                     const Vocabulary& vocab, const std::string& metadata_json = "{}");
std::string serialize_checkpoint(const NetAbModel& model, const Vocabulary& vocab,
                                 const std::string& metadata_json = "{}");

Checkpoint load_checkpoint(const std::filesystem::path& path);
Checkpoint deserialize_checkpoint(const std::string& bytes);

}  // namespace netab
