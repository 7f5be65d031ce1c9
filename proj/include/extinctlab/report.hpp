#pragma once

// Output directory handling: an exclusive lock for the duration of a run,
// CSV and JSON writers and the file manifest that goes into summary.json.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace extinctlab {

inline constexpr const char* kSchemaVersion = "v1";
const char* tool_version();

/// Finite doubles as numbers, the rest as "inf", "-inf" or "nan".
nlohmann::json jnum(double x);
nlohmann::json num_array(const std::vector<double>& xs);

class OutputDir {
 public:
  /// Creates the directory and takes the lock. Throws Error when another
  /// run holds it.
  explicit OutputDir(std::filesystem::path dir);
  ~OutputDir();
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  const std::filesystem::path& path() const { return dir_; }

  /// Writes name into the directory and records it in the manifest.
  void write_text(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& j);
  void write_csv(const std::string& name, const class CsvTable& t);
  /// Adds "files" and writes summary.json last.
  void write_summary(nlohmann::json summary);

  const std::vector<std::string>& manifest() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path lock_;
  std::vector<std::string> files_;
  void record(const std::string& name);
};

/// Comma separated, header row, one line per row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& add(double x);
  CsvTable& add(const std::string& s);
  CsvTable& add(std::size_t x);
  CsvTable& add(bool b);
  void end_row();
  std::string str() const;
  std::size_t rows() const { return rows_; }

 private:
  std::size_t width_;
  std::size_t col_ = 0;
  std::size_t rows_ = 0;
  std::string text_;
  void sep();
};

/// Formats a double with 17 significant digits ("inf", "nan" for the rest).
std::string fmt(double x);

}  // namespace extinctlab
