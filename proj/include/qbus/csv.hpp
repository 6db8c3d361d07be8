#pragma once

// Deterministic CSV output: a '#' comment header with the tool version, study
// name and resolved configuration, one header row, then data rows. Numbers use
// 12 significant digits and lines end in '\n'.

#include <fstream>
#include <string>
#include <vector>

namespace qbus {

inline constexpr const char* kVersion = "0.1.0";

std::string csv_field(double v);
std::string csv_field(int v);
std::string csv_field(bool v);
std::string csv_field(const std::string& v);
inline std::string csv_field(const char* v) { return csv_field(std::string(v)); }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& study, const std::string& resolved_config,
            const std::vector<std::string>& columns);

  template <class... Ts>
  void row(const Ts&... values) {
    write_row({csv_field(values)...});
  }
  void write_row(const std::vector<std::string>& fields);
  /// Flushes and throws std::runtime_error if any write failed.
  void close();

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t n_columns_;
};

}  // namespace qbus
