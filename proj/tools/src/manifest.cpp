#include "manifest.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "softsensor/error.hpp"

#ifndef SOFTSENSOR_VERSION
#define SOFTSENSOR_VERSION "0.0.0"
#endif

namespace softsensor::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

void RunManifest::write(const std::filesystem::path& dir) const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = SOFTSENSOR_VERSION;
  j["config_digest"] = sha256_hex(config);
  j["config"] = nlohmann::ordered_json::parse(config);
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  auto& in = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.generic_string()}, {"sha256", sha256_file(p)}});
  auto& out = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& p : outputs) {
    out.push_back({{"path", p.lexically_relative(dir).generic_string()}, {"sha256", sha256_file(p)}});
  }
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw Error("cannot write " + (dir / "manifest.json").string());
  f << j.dump(2) << '\n';
}

}  // namespace softsensor::cli
