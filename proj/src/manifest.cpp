#include "stratatopics/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "stratatopics/error.hpp"

namespace stratatopics {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string RunManifest::inputs_hash() const {
  std::string joined;
  for (const auto& i : inputs) joined += i.sha256;
  return sha256_hex(joined);
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = "stratatopics";
  doc["version"] = std::string(kToolVersion);
  doc["command"] = command;
  doc["status"] = status;
  doc["createdAt"] = created_at;
  doc["inputs"] = nlohmann::ordered_json::array();
  for (const auto& i : inputs) {
    doc["inputs"].push_back({{"role", i.role}, {"path", i.path}, {"sha256", i.sha256}});
  }
  doc["inputsHash"] = inputs_hash();
  doc["seed"] = seed;
  doc["config"] = config;
  doc["outputs"] = outputs;
  return doc;
}

RunManifest RunManifest::from_json(const nlohmann::json& doc) {
  RunManifest m;
  try {
    m.command = doc.at("command").get<std::string>();
    m.status = doc.at("status").get<std::string>();
    m.created_at = doc.at("createdAt").get<std::string>();
    for (const auto& i : doc.at("inputs")) {
      m.inputs.push_back({i.at("role").get<std::string>(), i.at("path").get<std::string>(),
                          i.at("sha256").get<std::string>()});
    }
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.config = doc.at("config");
    m.outputs = doc.at("outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace stratatopics
