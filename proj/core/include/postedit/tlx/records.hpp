#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "postedit/error.hpp"

namespace postedit::tlx {

enum class Dimension { kMental, kPhysical, kTemporal, kPerformance, kEffort, kFrustration };

inline constexpr std::array<Dimension, 6> kAllDimensions = {
    Dimension::kMental,      Dimension::kPhysical, Dimension::kTemporal,
    Dimension::kPerformance, Dimension::kEffort,   Dimension::kFrustration,
};

enum class Condition { kExcel, kNoSuggestions, kXcomet, kEc1 };

inline constexpr std::array<Condition, 4> kAllConditions = {
    Condition::kExcel, Condition::kNoSuggestions, Condition::kXcomet, Condition::kEc1};

std::string_view to_string(Dimension d) noexcept;
std::string_view to_string(Condition c) noexcept;
/// Case-insensitive.
std::optional<Dimension> parse_dimension(std::string_view text) noexcept;
/// Case-insensitive; "Excel" normalizes to excel.
std::optional<Condition> parse_condition(std::string_view text) noexcept;

inline constexpr double kDefaultScaleMax = 10.0;

struct TlxRecord {
  std::string participant_id;
  Condition condition = Condition::kExcel;
  std::array<double, 6> scores{};  // indexed by Dimension

  double& operator[](Dimension d) noexcept { return scores[static_cast<std::size_t>(d)]; }
  double operator[](Dimension d) const noexcept { return scores[static_cast<std::size_t>(d)]; }

  friend bool operator==(const TlxRecord&, const TlxRecord&) = default;
};

/// Sum of the five workload dimensions; Performance is excluded because
/// higher is better there.
double composite_workload(const TlxRecord& record) noexcept;

/// A CSV row failed validation.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::array<std::string_view, 8> kCsvColumns = {
    "participant_id", "condition", "mental",      "physical",
    "temporal",       "performance", "effort",    "frustration",
};

/// Header-driven parse (columns in any order, extra columns ignored). Scores
/// must lie in [0, scale_max]. Throws SchemaError for a missing column and
/// RowError citing the line for a bad row.
std::vector<TlxRecord> ingest_tlx_csv(std::string_view document,
                                      double scale_max = kDefaultScaleMax);

}  // namespace postedit::tlx
