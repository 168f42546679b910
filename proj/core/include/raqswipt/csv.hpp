#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace raq {

/// Version tag written as the first line of every CSV.
inline constexpr int kCsvSchema = 1;

/// Formats doubles with 12 significant digits (NaN as "nan").
std::string csv_number(double v);

/// Writes "# schema=1", a header row, then data rows. Fields containing
/// commas or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  void end_row();

  const std::filesystem::path& path() const { return path_; }

 private:
  void separator();

  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

/// Minimal reader for CSVs written by CsvWriter (no embedded newlines).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace raq
