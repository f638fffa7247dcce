#include "darkpat/csv.hpp"

#include "darkpat/error.hpp"

#include <iterator>

namespace darkpat::csv {

std::vector<Record> read_all(std::istream& in) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};

  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  std::size_t pos = 0;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_open = false;

  current.line = line;
  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
    record_open = false;
  };

  while (pos < data.size()) {
    const char c = data[pos];
    if (in_quotes) {
      if (c == '"') {
        if (pos + 1 < data.size() && data[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        in_quotes = false;
        ++pos;
        continue;
      }
      if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') {
        ++pos;
        continue;
      }
      if (c == '\n') ++line;
      field.push_back(c);
      ++pos;
      continue;
    }

    if (!record_open) {
      current.line = line;
      record_open = true;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw ParseError("line " + std::to_string(line) + ": stray quote inside unquoted field");
      }
      in_quotes = true;
      field_was_quoted = true;
      ++pos;
    } else if (c == ',') {
      end_field();
      ++pos;
    } else if (c == '\r' && pos + 1 < data.size() && data[pos + 1] == '\n') {
      end_record();
      ++line;
      pos += 2;
    } else if (c == '\n') {
      end_record();
      ++line;
      ++pos;
    } else {
      if (field_was_quoted) {
        throw ParseError("line " + std::to_string(line) + ": text after closing quote");
      }
      field.push_back(c);
      ++pos;
    }
  }
  if (in_quotes) {
    throw ParseError("line " + std::to_string(current.line) + ": unterminated quoted field");
  }
  if (record_open) end_record();
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace darkpat::csv
