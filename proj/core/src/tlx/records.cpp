#include "postedit/tlx/records.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "postedit/csv.hpp"

namespace postedit::tlx {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(Dimension d) noexcept {
  switch (d) {
    case Dimension::kMental: return "mental";
    case Dimension::kPhysical: return "physical";
    case Dimension::kTemporal: return "temporal";
    case Dimension::kPerformance: return "performance";
    case Dimension::kEffort: return "effort";
    case Dimension::kFrustration: return "frustration";
  }
  return "";
}

std::string_view to_string(Condition c) noexcept {
  switch (c) {
    case Condition::kExcel: return "excel";
    case Condition::kNoSuggestions: return "no_suggestions";
    case Condition::kXcomet: return "xcomet";
    case Condition::kEc1: return "ec1";
  }
  return "";
}

std::optional<Dimension> parse_dimension(std::string_view text) noexcept {
  const auto key = lower(trim(text));
  for (const auto d : kAllDimensions) {
    if (key == to_string(d)) return d;
  }
  return std::nullopt;
}

std::optional<Condition> parse_condition(std::string_view text) noexcept {
  const auto key = lower(trim(text));
  for (const auto c : kAllConditions) {
    if (key == to_string(c)) return c;
  }
  return std::nullopt;
}

double composite_workload(const TlxRecord& r) noexcept {
  return r[Dimension::kMental] + r[Dimension::kPhysical] + r[Dimension::kTemporal] +
         r[Dimension::kEffort] + r[Dimension::kFrustration];
}

RowError::RowError(std::size_t line, const std::string& what)
    : Error(ErrorCode::kRow, "line " + std::to_string(line) + ": " + what), line_(line) {}

std::vector<TlxRecord> ingest_tlx_csv(std::string_view document, double scale_max) {
  auto rows = csv::parse(document);
  if (rows.empty()) throw SchemaError("participant_id", "TLX file is empty (no header row)");

  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i) {
    columns.emplace(lower(trim(rows.front().fields[i])), i);
  }
  std::array<std::size_t, kCsvColumns.size()> index{};
  for (std::size_t k = 0; k < kCsvColumns.size(); ++k) {
    const auto it = columns.find(std::string(kCsvColumns[k]));
    if (it == columns.end()) {
      throw SchemaError(std::string(kCsvColumns[k]),
                        "TLX header lacks column '" + std::string(kCsvColumns[k]) + "'");
    }
    index[k] = it->second;
  }

  std::vector<TlxRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    // Skip blank lines.
    if (row.fields.size() == 1 && trim(row.fields[0]).empty()) continue;
    const auto cell = [&](std::size_t k) -> std::string_view {
      const std::size_t col = index[k];
      if (col >= row.fields.size()) {
        throw RowError(row.line, "missing value for '" + std::string(kCsvColumns[k]) + "'");
      }
      return trim(row.fields[col]);
    };

    TlxRecord rec;
    rec.participant_id = std::string(cell(0));
    if (rec.participant_id.empty()) throw RowError(row.line, "empty participant_id");
    const auto condition = parse_condition(cell(1));
    if (!condition) {
      throw RowError(row.line, "unknown condition '" + std::string(cell(1)) + "'");
    }
    rec.condition = *condition;
    for (std::size_t d = 0; d < kAllDimensions.size(); ++d) {
      const auto text = cell(d + 2);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw RowError(row.line, "'" + std::string(kCsvColumns[d + 2]) + "' is not a number: '" +
                                     std::string(text) + "'");
      }
      if (value < 0.0 || value > scale_max) {
        throw RowError(row.line, "'" + std::string(kCsvColumns[d + 2]) + "' score " +
                                     std::string(text) + " outside [0, " +
                                     std::to_string(scale_max) + "]");
      }
      rec.scores[d] = value;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace postedit::tlx
