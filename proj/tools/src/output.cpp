#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ifp/error.hpp"

#ifndef IFP_TOOL_VERSION
#define IFP_TOOL_VERSION "unknown"
#endif

namespace ifp::cli {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json nums(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt17(row[i]);
    }
    out += '\n';
  }
  return out;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ParamValidation("cannot create output directory " + root_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, const std::string& contents) {
  const auto path = root_ / name;
  std::ofstream f(path, std::ios::binary);
  f << contents;
  if (!f) throw ParamValidation("cannot write " + path.string());
  outputs_.push_back(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& doc) {
  write(name, doc.dump(2) + "\n");
}

void OutputDir::write_manifest(const std::string& command, const nlohmann::json& config, std::uint64_t seed) {
  nlohmann::json m;
  m["command"] = command;
  m["config_digest"] = hex64(fnv1a(config.dump()));
  m["seed"] = seed;
  m["tool_version"] = IFP_TOOL_VERSION;
  m["outputs"] = outputs_;
  m["config"] = config;
  write_json("manifest.json", m);
}

}  // namespace ifp::cli
