#ifndef WARDFLOW_CSV_HPP
#define WARDFLOW_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace wardflow {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line the record starts on
};

/// Incremental RFC-4180 reader: comma-separated, double-quote quoting with
/// "" escapes, LF or CRLF line endings, fields may contain embedded
/// newlines when quoted.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads one record. Returns false at end of input. Throws InputError on a
  /// quote opened but never closed.
  bool next(CsvRecord& out);

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

/// Quotes the field only when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace wardflow

#endif  // WARDFLOW_CSV_HPP
