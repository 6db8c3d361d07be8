#include "qbus/csv.hpp"

#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace qbus {

std::string csv_field(double v) { return fmt::format("{:.12g}", v); }
std::string csv_field(int v) { return fmt::format("{}", v); }
std::string csv_field(bool v) { return v ? "1" : "0"; }

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

CsvWriter::CsvWriter(const std::string& path, const std::string& study,
                     const std::string& resolved_config, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), n_columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
  out_ << "# qbus " << kVersion << "\n";
  out_ << "# study: " << study << "\n";
  out_ << "# config:\n";
  std::istringstream lines(resolved_config);
  for (std::string line; std::getline(lines, line);) out_ << "#   " << line << "\n";
  write_row(columns);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  if (fields.size() != n_columns_)
    throw std::logic_error("CsvWriter: row width does not match the header in " + path_);
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
  out_ << "\n";
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
  out_.close();
}

}  // namespace qbus
