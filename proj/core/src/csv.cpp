#include "carom/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "carom/errors.hpp"

namespace carom {

namespace {

bool needs_quotes(const std::string& cell) {
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
  if (!needs_quotes(cell)) {
    out += cell;
    return;
  }
  out += '"';
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    append_cell(out, cells[i]);
  }
  out += "\r\n";
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw SerializationError("CSV table needs a header row");
}

std::string CsvTable::format_number(double v) {
  if (!std::isfinite(v)) throw SerializationError("non-finite number in CSV payload");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

CsvTable& CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw SerializationError("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
  return *this;
}

CsvTable& CsvTable::add_numeric_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  return add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  append_row(out, header_);
  for (const auto& row : rows_) append_row(out, row);
  return out;
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SerializationError("cannot open CSV output file: " + path);
  const std::string body = str();
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw SerializationError("failed writing CSV file: " + path);
}

CsvData parse_csv(const std::string& text) {
  CsvData data;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_started = false;
  auto end_cell = [&]() {
    row.push_back(cell);
    cell.clear();
  };
  auto end_row = [&]() {
    end_cell();
    if (data.header.empty())
      data.header = row;
    else
      data.rows.push_back(row);
    row.clear();
    row_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    row_started = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      end_cell();
    } else if (c == '\r') {
      // swallow; newline handling on '\n'
    } else if (c == '\n') {
      end_row();
    } else {
      cell += c;
    }
  }
  if (quoted) throw SerializationError("unterminated quoted CSV cell");
  if (row_started || !cell.empty() || !row.empty()) end_row();
  return data;
}

CsvData read_csv_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SerializationError("cannot open CSV input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace carom
