#pragma once

#include "idgnn/nn/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace idgnn::nn {

/// Checkpoint byte layout (all integers little-endian):
///
///   offset 0   8 bytes  magic "IDGNNCK1"
///   offset 8   u64      header length H
///   offset 16  H bytes  UTF-8 JSON header
///   offset 16+H         parameter blob, f64 little-endian
///
/// The header holds {"format", "version", "config", "extra", "tensors",
/// "blob_bytes"}; each tensor entry is {"name", "rows", "cols", "offset"}
/// with `offset` in bytes from the start of the blob and values in
/// row-major order. All tensors, including tied msg1 copies, are stored.
std::string serialize_checkpoint(const Model& model, const nlohmann::json& extra = nlohmann::json::object());

struct LoadedCheckpoint {
  Model model;
  nlohmann::json extra;
};

LoadedCheckpoint deserialize_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const Model& model,
                     const nlohmann::json& extra = nlohmann::json::object());
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace idgnn::nn
