#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace stratatopics {

inline constexpr std::string_view kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
/// Throws IoError if the file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

struct ManifestInput {
  std::string role;  // corpus, taxonomy, stopwords
  std::string path;  // as given on the command line
  std::string sha256;
};

/// Provenance record written next to every output directory.
struct RunManifest {
  std::string command;
  std::string status = "in_progress";  // "complete" once outputs are in place
  std::string created_at;              // UTC, ISO 8601; excluded from comparisons
  std::vector<ManifestInput> inputs;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;

  /// sha256 over the concatenated input digests, in order.
  std::string inputs_hash() const;
  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& doc);
};

std::string utc_timestamp();

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace stratatopics
