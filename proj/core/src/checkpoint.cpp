#include "netab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netab/errors.hpp"

namespace netab {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr char kMagic[8] = {'N', 'E', 'T', 'A', 'B', 'C', 'K', 'P'};

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_uint(std::string_view bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

const char* mode_name(TransitionMode m) {
  return m == TransitionMode::learned ? "learned" : "pinned_identity";
}

json config_to_json(const ModelConfig& c) {
  return json{{"embedding_dim", c.embedding_dim},
              {"feature_maps", c.feature_maps},
              {"windows", c.windows},
              {"classes", c.classes},
              {"max_len", c.max_len},
              {"init_scale", c.init_scale},
              {"transition_bias_init", c.transition_bias_init},
              {"transition", mode_name(c.transition)}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  c.feature_maps = j.at("feature_maps").get<std::size_t>();
  c.windows = j.at("windows").get<std::vector<std::size_t>>();
  c.classes = j.at("classes").get<std::size_t>();
  c.max_len = j.at("max_len").get<std::size_t>();
  c.init_scale = j.at("init_scale").get<double>();
  c.transition_bias_init = j.at("transition_bias_init").get<double>();
  const auto mode = j.at("transition").get<std::string>();
  if (mode == "learned") {
    c.transition = TransitionMode::learned;
  } else if (mode == "pinned_identity") {
    c.transition = TransitionMode::pinned_identity;
  } else {
    throw ValidationError("checkpoint: unknown transition mode '" + mode + "'");
  }
  return c;
}

}  // namespace

CheckpointVersionError::CheckpointVersionError(std::uint32_t found, std::uint32_t expected)
    : ValidationError("checkpoint format version " + std::to_string(found) +
                      " is not supported (this build reads version " +
                      std::to_string(expected) + ")"),
      found_(found),
      expected_(expected) {}

std::string serialize_checkpoint(const NetAbModel& model, const Vocabulary& vocab,
                                 const std::string& metadata_json) {
  std::string payload;
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (const auto& p : model.all_parameters()) {
    tensors.push_back({{"name", p.name}, {"shape", p.tensor->shape()}, {"offset", offset}});
    for (double v : p.tensor->values()) put_u64(payload, std::bit_cast<std::uint64_t>(v));
    offset += p.tensor->size();
  }
  json header{{"format", "netab-checkpoint"},
              {"format_version", kCheckpointVersion},
              {"model_config", config_to_json(model.config())},
              {"vocabulary", vocab.tokens()},
              {"tensors", tensors},
              {"payload_values", offset},
              {"payload_fnv1a64", fnv1a64(payload)},
              {"metadata", json::parse(metadata_json)}};
  const std::string header_text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u64(out, header_text.size());
  out += header_text;
  out += payload;
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const NetAbModel& model,
                     const Vocabulary& vocab, const std::string& metadata_json) {
  const std::string bytes = serialize_checkpoint(model, vocab, metadata_json);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing checkpoint " + path.string());
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  constexpr std::size_t kPrefix = sizeof(kMagic) + 4 + 8;
  if (bytes.size() < kPrefix || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("not a netab checkpoint (bad magic)");
  }
  const auto version = static_cast<std::uint32_t>(get_uint(bytes, 8, 4));
  if (version != kCheckpointVersion) throw CheckpointVersionError(version, kCheckpointVersion);
  const std::uint64_t header_len = get_uint(bytes, 12, 8);
  if (header_len > bytes.size() - kPrefix) {
    throw ValidationError("checkpoint truncated: header extends past end of file");
  }
  json header;
  try {
    header = json::parse(bytes.substr(kPrefix, header_len));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint header is corrupt: ") + e.what());
  }

  try {
    const std::string_view payload =
        std::string_view(bytes).substr(kPrefix + header_len);
    const auto values = header.at("payload_values").get<std::uint64_t>();
    if (payload.size() != values * 8) {
      throw ValidationError("checkpoint payload has " + std::to_string(payload.size()) +
                            " bytes, expected " + std::to_string(values * 8));
    }
    if (header.at("payload_fnv1a64").get<std::uint64_t>() != fnv1a64(payload)) {
      throw ValidationError("checkpoint payload checksum mismatch");
    }
    ModelConfig config = config_from_json(header.at("model_config"));
    Vocabulary vocab =
        Vocabulary::from_tokens(header.at("vocabulary").get<std::vector<std::string>>());

    Rng unused(0);
    EmbeddingTable table{Tensor({vocab.size(), config.embedding_dim}),
                         std::vector<std::uint8_t>(vocab.size(), 0)};
    NetAbModel model(config, std::move(table), unused);

    const auto& entries = header.at("tensors");
    auto params = model.all_parameters();
    if (entries.size() != params.size()) {
      throw ValidationError("checkpoint lists " + std::to_string(entries.size()) +
                            " tensors, model expects " + std::to_string(params.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& e = entries[i];
      const auto name = e.at("name").get<std::string>();
      const auto shape = e.at("shape").get<Shape>();
      const auto offset = e.at("offset").get<std::uint64_t>();
      if (name != params[i].name || shape != params[i].tensor->shape()) {
        throw ValidationError("checkpoint tensor '" + name + "' " + shape_to_string(shape) +
                              " does not match expected '" + params[i].name + "' " +
                              shape_to_string(params[i].tensor->shape()));
      }
      auto dst = params[i].tensor->values();
      if (offset + dst.size() > values) {
        throw ValidationError("checkpoint tensor '" + name + "' extends past payload");
      }
      for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] = std::bit_cast<double>(get_uint(payload, (offset + k) * 8, 8));
      }
    }
    return Checkpoint{std::move(model), std::move(vocab), header.at("metadata").dump()};
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint header is malformed: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_checkpoint(buffer.str());
}

}  // namespace netab
