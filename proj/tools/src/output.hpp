#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ifp::cli {

/// %.17g, so values survive a text round trip.
std::string fmt17(double v);

/// Finite doubles as numbers, non-finite ones as the strings "inf", "-inf",
/// "nan" (JSON has no literal for them).
nlohmann::json num(double v);
nlohmann::json nums(const std::vector<double>& v);

std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t v);

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Output directory for one run. Tracks every file written so the manifest
/// can list them.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);
  void write(const std::string& name, const std::string& contents);
  void write_json(const std::string& name, const nlohmann::json& doc);
  /// Writes manifest.json; the digest covers `config` as dumped with sorted keys.
  void write_manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed);
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }

 private:
  std::filesystem::path root_;
  std::vector<std::string> outputs_;
};

}  // namespace ifp::cli
