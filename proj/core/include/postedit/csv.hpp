#pragma once

// RFC 4180 reading and writing.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace postedit::csv {

using Row = std::vector<std::string>;

/// Quote a field when it contains a comma, double quote, CR or LF; inner
/// quotes are doubled.
std::string escape_field(std::string_view field);

/// Append one record terminated by CRLF.
void append_row(std::string& out, const Row& fields);

struct Record {
  Row fields;
  /// 1-based line on which the record starts.
  std::size_t line = 0;
};

/// Parse a whole document. Accepts CRLF or bare LF terminators; a final
/// terminator is optional. Throws ParseError (byte offset) on a stray quote
/// inside an unquoted field or an unterminated quoted field.
std::vector<Record> parse(std::string_view document);

}  // namespace postedit::csv
