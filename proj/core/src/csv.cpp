#include "postedit/csv.hpp"

#include "postedit/error.hpp"

namespace postedit::csv {

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_row(std::string& out, const Row& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(fields[i]);
  }
  out += "\r\n";
}

std::vector<Record> parse(std::string_view doc) {
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = doc.size();
  bool record_open = false;

  const auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
  };
  const auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = Record{};
    record_open = false;
  };

  while (i < n) {
    if (!record_open) {
      current.line = line;
      record_open = true;
    }
    const char c = doc[i];
    if (c == '"' && field.empty()) {
      // Quoted field.
      const std::size_t open = i++;
      for (;;) {
        if (i >= n) throw ParseError(open, "unterminated quoted field");
        if (doc[i] == '"') {
          if (i + 1 < n && doc[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (doc[i] == '\n') ++line;
        field.push_back(doc[i++]);
      }
      if (i < n && doc[i] != ',' && doc[i] != '\r' && doc[i] != '\n') {
        throw ParseError(i, "unexpected character after closing quote");
      }
      if (i >= n) break;
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < n && doc[i + 1] == '\n') {
      end_record();
      i += 2;
      ++line;
    } else if (c == '\n') {
      end_record();
      ++i;
      ++line;
    } else if (c == '"') {
      throw ParseError(i, "quote inside unquoted field");
    } else {
      field.push_back(c);
      ++i;
    }
  }
  if (record_open) end_record();
  return records;
}

}  // namespace postedit::csv
