#include "wardflow/csv.hpp"

#include <istream>
#include <ostream>

#include "wardflow/types.hpp"

namespace wardflow {

bool CsvReader::next(CsvRecord& out) {
  out.fields.clear();
  out.line = line_;

  int c = in_.get();
  if (c == std::istream::traits_type::eof()) return false;

  std::string field;
  bool quoted = false;
  bool at_field_start = true;
  for (;;) {
    if (c == std::istream::traits_type::eof()) {
      if (quoted) {
        throw InputError("line " + std::to_string(out.line) +
                         ": unterminated quoted field");
      }
      out.fields.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field += ch;
      }
    } else if (ch == '"' && at_field_start) {
      quoted = true;
      at_field_start = false;
    } else if (ch == ',') {
      out.fields.push_back(std::move(field));
      field.clear();
      at_field_start = true;
    } else if (ch == '\n' || (ch == '\r' && in_.peek() == '\n')) {
      if (ch == '\r') in_.get();
      ++line_;
      out.fields.push_back(std::move(field));
      return true;
    } else {
      field += ch;  // stray quotes and bare CR kept verbatim
      at_field_start = false;
    }
    c = in_.get();
  }
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

}  // namespace wardflow
