#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace softsensor::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// One per output directory. Paths of outputs are stored relative to the
/// directory; nothing time-dependent is recorded.
struct RunManifest {
  std::string command;
  std::string config;  // canonical JSON of the resolved settings
  std::vector<std::filesystem::path> inputs;
  std::optional<std::uint64_t> seed;
  std::vector<std::filesystem::path> outputs;

  void write(const std::filesystem::path& dir) const;
};

}  // namespace softsensor::cli
