#include "wakegnn/nncore/checkpoint.hpp"

#include "wakegnn/common/binary_io.hpp"

namespace wakegnn::nn {

namespace {

constexpr char kMagic[4] = {'C', 'K', 'P', '1'};

nlohmann::json directory(const std::vector<Blob>& blobs) {
  auto dir = nlohmann::json::array();
  for (const auto& b : blobs) {
    dir.push_back({{"name", b.name}, {"rows", b.rows}, {"cols", b.cols}});
  }
  return dir;
}

std::vector<Blob> blobs_from_directory(const nlohmann::json& dir) {
  std::vector<Blob> out;
  for (const auto& e : dir) {
    Blob b;
    b.name = e.at("name").get<std::string>();
    b.rows = e.at("rows").get<std::int64_t>();
    b.cols = e.at("cols").get<std::int64_t>();
    if (b.rows < 0 || b.cols < 0) {
      throw FormatError(FormatErrorKind::Malformed, "header", "negative blob dimensions for '" + b.name + "'");
    }
    out.push_back(std::move(b));
  }
  return out;
}

void check_blob(const Blob& b) {
  if (static_cast<std::int64_t>(b.data.size()) != b.rows * b.cols) {
    throw DimensionError("checkpoint blob '" + b.name + "' holds " + std::to_string(b.data.size()) +
                         " values for a " + std::to_string(b.rows) + "x" + std::to_string(b.cols) + " shape");
  }
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckp) {
  const bool has_moments = !ckp.first_moments.empty() || !ckp.second_moments.empty();
  if (has_moments && (ckp.first_moments.size() != ckp.parameters.size() ||
                      ckp.second_moments.size() != ckp.parameters.size())) {
    throw DimensionError("checkpoint moment blobs must match the parameter count");
  }
  for (const auto& b : ckp.parameters) check_blob(b);
  for (const auto& b : ckp.first_moments) check_blob(b);
  for (const auto& b : ckp.second_moments) check_blob(b);

  nlohmann::json header = {
      {"metadata", ckp.metadata},
      {"parameters", directory(ckp.parameters)},
      {"optimizer_step", ckp.optimizer_step},
      {"has_moments", has_moments},
  };
  if (has_moments) {
    header["first_moments"] = directory(ckp.first_moments);
    header["second_moments"] = directory(ckp.second_moments);
  }
  const std::string text = header.dump();

  io::ByteWriter w;
  w.put_bytes(kMagic, 4);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint64_t>(text.size());
  w.put_bytes(text.data(), text.size());
  for (const auto* group : {&ckp.parameters, &ckp.first_moments, &ckp.second_moments}) {
    for (const auto& b : *group) w.put_array(b.data.data(), b.data.size());
  }
  io::write_file_bytes(path, w.bytes());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  io::ByteReader r(io::read_file_bytes(path));
  const unsigned char* magic = r.take(4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(FormatErrorKind::BadMagic, "magic", "'" + path.string() + "' is not a CKP1 checkpoint");
  }
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError(FormatErrorKind::BadVersion, "version",
                      "unsupported checkpoint version " + std::to_string(version));
  }
  const auto header_len = r.get<std::uint64_t>("header");
  if (header_len > r.remaining()) {
    throw FormatError(FormatErrorKind::Truncated, "header", "truncated file: block 'header' is incomplete");
  }
  const unsigned char* text = r.take(static_cast<std::size_t>(header_len), "header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text, text + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::Malformed, "header", std::string("checkpoint header is not valid JSON: ") + e.what());
  }

  Checkpoint ckp;
  try {
    ckp.metadata = header.at("metadata");
    ckp.optimizer_step = header.at("optimizer_step").get<std::int64_t>();
    ckp.parameters = blobs_from_directory(header.at("parameters"));
    if (header.at("has_moments").get<bool>()) {
      ckp.first_moments = blobs_from_directory(header.at("first_moments"));
      ckp.second_moments = blobs_from_directory(header.at("second_moments"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrorKind::Malformed, "header", std::string("checkpoint header incomplete: ") + e.what());
  }

  auto fill = [&](std::vector<Blob>& group, const std::string& kind) {
    for (auto& b : group) {
      b.data.resize(static_cast<std::size_t>(b.rows * b.cols));
      r.get_array(b.data.data(), b.data.size(), kind + ":" + b.name);
    }
  };
  fill(ckp.parameters, "parameters");
  fill(ckp.first_moments, "first_moments");
  fill(ckp.second_moments, "second_moments");
  if (r.remaining() != 0) {
    throw FormatError(FormatErrorKind::Malformed, "trailer",
                      std::to_string(r.remaining()) + " unexpected trailing bytes in checkpoint");
  }
  return ckp;
}

}  // namespace wakegnn::nn
