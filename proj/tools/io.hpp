#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace qdiff::cli {

using Json = nlohmann::json;

/// 17 significant digits, which round-trips every double. Non-finite values
/// become empty fields.
std::string format_number(double v);

/// Comma-separated file with a single header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header);

  void row(std::initializer_list<double> values);
  std::size_t columns() const noexcept { return columns_; }

 private:
  struct Closer {
    void operator()(std::FILE* f) const noexcept { std::fclose(f); }
  };
  std::unique_ptr<std::FILE, Closer> file_;
  std::size_t columns_;
};

/// Run-scoped output directory. Every file goes through here so the manifest
/// can list it; the manifest itself is written by finish(), last.
class RunContext {
 public:
  RunContext(std::string command, const std::filesystem::path& out);

  CsvWriter csv(const std::string& name, std::initializer_list<const char*> header);
  void write_json(const std::string& name, const Json& value);

  Json& parameters() noexcept { return parameters_; }
  void warn(std::string message);
  void warn_all(const std::vector<std::string>& messages);
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  void finish();

 private:
  std::filesystem::path path_for(const std::string& name);

  std::string command_;
  std::filesystem::path out_;
  Json parameters_ = Json::object();
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qdiff::cli
