#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace darkpat::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line where the record starts
};

// RFC 4180 reader. CRLF and LF are both accepted as record terminators;
// CRLF inside quoted fields is normalized to LF. A final empty line is not a
// record.
std::vector<Record> read_all(std::istream& in);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Writes one record terminated by LF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace darkpat::csv
