#include "bball/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bball/domain.hpp"

namespace bball {

namespace {

// Splits one logical CSV record. `line` is advanced past continuation lines
// when a quoted field spans newlines.
std::vector<std::string> split_record(const std::string& text, size_t& pos, int& line) {
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool done = false;
  while (pos < text.size() && !done) {
    char c = text[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field += '"';
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else {
      switch (c) {
        case '"': in_quotes = true; break;
        case ',':
          fields.push_back(std::move(field));
          field.clear();
          break;
        case '\r': break;
        case '\n':
          ++line;
          done = true;
          break;
        default: field += c;
      }
    }
    ++pos;
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

CsvReader::CsvReader(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  size_t pos = 0;
  int line = 1;
  if (!text.empty()) {
    int header_line = line;
    header_ = split_record(text, pos, line);
    (void)header_line;
  }
  while (pos < text.size()) {
    int row_line = line;
    auto fields = split_record(text, pos, line);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    rows_.push_back(CsvRow{row_line, std::move(fields)});
  }
}

void CsvReader::require_header(const std::vector<std::string>& expected,
                               const std::string& what) const {
  if (header_ != expected) {
    throw Error(what + ": unexpected header '" + csv_join(header_) + "', expected '" +
                csv_join(expected) + "'");
  }
}

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  return out;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw Error("cannot open '" + path + "' for writing");
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(static_cast<FILE*>(file_));
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  std::string row = csv_join(fields);
  row += '\n';
  if (std::fwrite(row.data(), 1, row.size(), static_cast<FILE*>(file_)) != row.size())
    throw Error("write failed for '" + path_ + "'");
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace bball
