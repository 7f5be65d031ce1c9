#include "extinctlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "extinctlab/error.hpp"

#ifndef EXTINCTLAB_VERSION
#define EXTINCTLAB_VERSION "0.0.0"
#endif

namespace extinctlab {

const char* tool_version() { return EXTINCTLAB_VERSION; }

nlohmann::json jnum(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

nlohmann::json num_array(const std::vector<double>& xs) {
  auto j = nlohmann::json::array();
  for (double x : xs) j.push_back(jnum(x));
  return j;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvTable::sep() {
  if (col_ >= width_) throw InvalidInput("csv: too many columns in row");
  if (col_++) text_ += ',';
}

CsvTable& CsvTable::add(double x) {
  sep();
  text_ += fmt(x);
  return *this;
}

CsvTable& CsvTable::add(const std::string& s) {
  sep();
  text_ += s;
  return *this;
}

CsvTable& CsvTable::add(std::size_t x) {
  sep();
  text_ += std::to_string(x);
  return *this;
}

CsvTable& CsvTable::add(bool b) {
  sep();
  text_ += b ? "1" : "0";
  return *this;
}

void CsvTable::end_row() {
  if (col_ != width_) throw InvalidInput("csv: row has the wrong number of columns");
  text_ += '\n';
  col_ = 0;
  ++rows_;
}

std::string CsvTable::str() const { return text_; }

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  lock_ = dir_ / ".extinctlab.lock";
  // "x" fails when the file exists: one run per directory
  std::FILE* f = std::fopen(lock_.c_str(), "wx");
  if (!f) throw Error("output directory " + dir_.string() + " is locked by another run");
  std::fclose(f);
}

OutputDir::~OutputDir() {
  std::error_code ec;
  std::filesystem::remove(lock_, ec);
}

void OutputDir::record(const std::string& name) {
  if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
}

void OutputDir::write_text(const std::string& name, const std::string& text) {
  std::ofstream os(dir_ / name, std::ios::binary);
  if (!os) throw Error("cannot write " + (dir_ / name).string());
  os << text;
  record(name);
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& j) {
  write_text(name, j.dump(2) + "\n");
}

void OutputDir::write_csv(const std::string& name, const CsvTable& t) { write_text(name, t.str()); }

void OutputDir::write_summary(nlohmann::json summary) {
  record("summary.json");
  summary["schema"] = kSchemaVersion;
  summary["tool_version"] = tool_version();
  summary["files"] = files_;
  write_text("summary.json", summary.dump(2) + "\n");
}

}  // namespace extinctlab
