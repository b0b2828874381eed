#include "idgnn/nn/checkpoint.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/io.hpp"

#include <bit>
#include <cstring>

namespace idgnn::nn {

namespace {

constexpr char kMagic[8] = {'I', 'D', 'G', 'N', 'N', 'C', 'K', '1'};

void put_u64(std::string& out, std::uint64_t x) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
}

std::uint64_t get_u64(const std::string& in, std::size_t pos) {
  std::uint64_t x = 0;
  for (int b = 0; b < 8; ++b) x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  return x;
}

}  // namespace

std::string serialize_checkpoint(const Model& model, const nlohmann::json& extra) {
  Parameters params = model.params;
  const auto list = tensors(params, model.config, false);
  nlohmann::json index = nlohmann::json::array();
  std::string blob;
  for (const auto& t : list) {
    index.push_back({{"name", t.name}, {"rows", t.tensor->rows()}, {"cols", t.tensor->cols()}, {"offset", blob.size()}});
    for (Index i = 0; i < t.tensor->size(); ++i) put_u64(blob, std::bit_cast<std::uint64_t>(t.tensor->data()[i]));
  }
  const nlohmann::json header = {{"format", "idgnn-checkpoint"}, {"version", 1},       {"config", to_json(model.config)},
                                 {"extra", extra},                {"tensors", index}, {"blob_bytes", blob.size()}};
  const std::string h = header.dump();
  std::string out(kMagic, sizeof kMagic);
  put_u64(out, h.size());
  out += h;
  out += blob;
  return out;
}

LoadedCheckpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw ParseError("not an idgnn checkpoint (bad magic)", 0);
  }
  const std::uint64_t header_len = get_u64(bytes, 8);
  if (16 + header_len > bytes.size()) throw ParseError("truncated checkpoint header", 0);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(16, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what(), 0);
  }
  const std::size_t blob_start = 16 + header_len;
  if (bytes.size() - blob_start != header.at("blob_bytes").get<std::size_t>()) {
    throw ParseError("checkpoint blob size mismatch", 0);
  }

  LoadedCheckpoint out{init_model(config_from_json(header.at("config"))), header.value("extra", nlohmann::json::object())};
  auto list = tensors(out.model.params, out.model.config, false);
  const auto& index = header.at("tensors");
  if (index.size() != list.size()) throw ParseError("checkpoint tensor count does not match its config", 0);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& entry = index[i];
    auto& t = *list[i].tensor;
    if (entry.at("name").get<std::string>() != list[i].name || entry.at("rows").get<Index>() != t.rows() ||
        entry.at("cols").get<Index>() != t.cols()) {
      throw ParseError("checkpoint tensor " + list[i].name + " does not match the config", 0);
    }
    const std::size_t offset = blob_start + entry.at("offset").get<std::size_t>();
    if (offset + static_cast<std::size_t>(t.size()) * 8 > bytes.size()) throw ParseError("tensor outside blob", 0);
    for (Index k = 0; k < t.size(); ++k) t.data()[k] = std::bit_cast<double>(get_u64(bytes, offset + 8 * k));
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Model& model, const nlohmann::json& extra) {
  io::write_file_atomic(path, serialize_checkpoint(model, extra));
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) { return deserialize_checkpoint(io::read_file(path)); }

}  // namespace idgnn::nn
