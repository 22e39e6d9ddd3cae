#pragma once

#include <string>
#include <vector>

namespace carom {

// RFC 4180 CSV builder: header row, CRLF line endings, minimal quoting.
// Numeric cells are rendered with 9 significant digits; non-finite numbers
// raise SerializationError.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  static std::string format_number(double v);

  CsvTable& add_row(std::vector<std::string> cells);
  CsvTable& add_numeric_row(const std::vector<double>& values);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Parsed CSV (used by the renderer): header plus string cells.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData parse_csv(const std::string& text);
CsvData read_csv_file(const std::string& path);

}  // namespace carom
