#pragma once

#include <string>
#include <vector>

namespace bball {

/// One parsed CSV row plus its 1-based line number in the source file.
struct CsvRow {
  int line = 0;
  std::vector<std::string> fields;
};

/// Minimal RFC-4180 reader: comma separated, double quotes escape fields
/// containing commas, quotes or newlines. UTF-8 passes through untouched.
class CsvReader {
 public:
  explicit CsvReader(const std::string& path);  // throws Error if unreadable

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  /// Throws Error unless the header matches exactly.
  void require_header(const std::vector<std::string>& expected, const std::string& what) const;

 private:
  std::vector<std::string> header_;
  std::vector<CsvRow> rows_;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);  // throws Error if unwritable
  ~CsvWriter();

  void write_row(const std::vector<std::string>& fields);

 private:
  void* file_;
  std::string path_;
};

/// Formats a double with enough digits to be stable and readable in reports.
std::string format_double(double v, int decimals = 6);

}  // namespace bball
