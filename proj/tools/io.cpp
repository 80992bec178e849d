#include "io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qdiff::cli {

std::string format_number(double v) {
  if (!std::isfinite(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
  if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  bool first = true;
  for (const char* h : header) {
    std::fputs(first ? "" : ",", file_.get());
    std::fputs(h, file_.get());
    first = false;
  }
  std::fputc('\n', file_.get());
}

void CsvWriter::row(std::initializer_list<double> values) {
  if (values.size() != columns_) throw std::logic_error("csv row has the wrong number of columns");
  bool first = true;
  for (double v : values) {
    if (!first) std::fputc(',', file_.get());
    if (std::isfinite(v)) std::fprintf(file_.get(), "%.17g", v);
    first = false;
  }
  std::fputc('\n', file_.get());
}

RunContext::RunContext(std::string command, const std::filesystem::path& out)
    : command_(std::move(command)), out_(out), start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(out_);
  // a stale manifest would claim a completed run
  std::filesystem::remove(out_ / "manifest.json");
}

std::filesystem::path RunContext::path_for(const std::string& name) {
  outputs_.push_back(name);
  return out_ / name;
}

CsvWriter RunContext::csv(const std::string& name, std::initializer_list<const char*> header) {
  return CsvWriter(path_for(name), header);
}

void RunContext::write_json(const std::string& name, const Json& value) {
  std::ofstream f(path_for(name));
  if (!f) throw std::runtime_error("cannot open " + (out_ / name).string() + " for writing");
  f << value.dump(2) << '\n';
}

void RunContext::warn(std::string message) { warnings_.push_back(std::move(message)); }

void RunContext::warn_all(const std::vector<std::string>& messages) {
  for (const auto& m : messages) warn(m);
}

void RunContext::finish() {
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  Json manifest = {{"command", command_},
                   {"parameters", parameters_},
                   {"outputs", outputs_},
                   {"wall_time", wall},
                   {"warnings", warnings_}};
  std::ofstream f(out_ / "manifest.json");
  if (!f) throw std::runtime_error("cannot write manifest.json");
  f << manifest.dump(2) << '\n';
}

}  // namespace qdiff::cli
