#pragma once

// Nonparametric and correlation statistics for TLX study data.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postedit/tlx/records.hpp"

namespace postedit::tlx {

enum class PMethod { kExact, kApproximation, kAllZero };

std::string_view to_string(PMethod m) noexcept;

struct StatResult {
  std::string statistic;  // "chi_squared" or "w"
  double value = 0.0;
  std::optional<int> degrees_of_freedom;  // set for chi_squared only
  double p_value = 1.0;
  PMethod method = PMethod::kApproximation;
  std::size_t n = 0;  // participants (Friedman) or non-zero pairs (Wilcoxon)
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what)
      : Error(ErrorCode::kDegenerateInput, what) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& what)
      : Error(ErrorCode::kInsufficientData, what) {}
};

class IncompleteDesignError : public Error {
 public:
  IncompleteDesignError(std::string participant, const std::string& what)
      : Error(ErrorCode::kIncompleteDesign, what), participant_(std::move(participant)) {}

  const std::string& participant() const noexcept { return participant_; }

 private:
  std::string participant_;
};

// ---------------------------------------------------------------------------
// Summaries

struct DimensionSummary {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample (n - 1) standard deviation; null for n < 2
};

struct ConditionSummary {
  Condition condition;
  std::size_t n = 0;
  std::array<DimensionSummary, 6> dimensions{};
  DimensionSummary composite;
};

DimensionSummary summarize(std::span<const double> values);

/// One entry per condition present, in condition order. Empty input gives an
/// empty summary.
std::vector<ConditionSummary> condition_summary(const std::vector<TlxRecord>& records);

// ---------------------------------------------------------------------------
// Correlation

/// Pearson r of two equal-length samples. Throws DegenerateInputError when a
/// sample is constant and InsufficientDataError below 3 points.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::array<std::array<double, 6>, 6> r{};  // indexed by Dimension

  double at(Dimension a, Dimension b) const noexcept {
    return r[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
};

/// Pairwise Pearson r over all records pooled across conditions.
CorrelationMatrix pearson_matrix(const std::vector<TlxRecord>& records);

// ---------------------------------------------------------------------------
// Friedman

struct FriedmanOptions {
  /// Use the exact within-row permutation distribution while enumerating it
  /// takes at most this many state updates (states times row orderings,
  /// summed over rows); 0 forces the chi-squared tail.
  std::size_t exact_work_limit = 4'000'000;
};

/// Friedman test on an n x k complete block design (rows are participants,
/// columns conditions). Midranks on ties, tie-corrected statistic, df = k-1.
/// Throws IncompleteDesignError for a ragged row and InsufficientDataError
/// for n < 2 or k < 3.
StatResult friedman_test(const std::vector<std::vector<double>>& scores,
                         const FriedmanOptions& options = {});

struct BlockDesign {
  std::vector<std::string> participants;
  std::vector<Condition> conditions;
  std::vector<std::vector<double>> scores;  // participants x conditions
};

/// Arrange one dimension as a complete block design. Throws
/// IncompleteDesignError naming the first participant with a missing cell
/// and for duplicate (participant, condition) rows.
BlockDesign build_block_design(const std::vector<TlxRecord>& records, Dimension dimension,
                               const std::vector<Condition>& conditions);

// ---------------------------------------------------------------------------
// Wilcoxon

/// Samples at or below this effective size get an exact p by enumerating
/// the sign-flip distribution; larger ones use the normal approximation.
inline constexpr std::size_t kWilcoxonExactMaxN = 20;

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped; ties get midranks; W = min(W+, W-).
StatResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

struct PairedSamples {
  std::vector<std::string> participants;
  std::vector<double> a;
  std::vector<double> b;
  std::size_t unpaired = 0;  // participants present under only one condition
};

PairedSamples pair_by_participant(const std::vector<TlxRecord>& records, Dimension dimension,
                                  Condition first, Condition second);

// ---------------------------------------------------------------------------
// Shared helpers

/// Midranks (1-based) of `values`.
std::vector<double> midranks(std::span<const double> values);

/// Upper tail of the chi-squared distribution.
double chi_squared_upper_tail(double x, int df);

}  // namespace postedit::tlx
