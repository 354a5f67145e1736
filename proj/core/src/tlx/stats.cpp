#include "postedit/tlx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <boost/math/special_functions/gamma.hpp>

namespace postedit::tlx {

std::string_view to_string(PMethod m) noexcept {
  switch (m) {
    case PMethod::kExact: return "exact";
    case PMethod::kApproximation: return "approximation";
    case PMethod::kAllZero: return "all-zero";
  }
  return "";
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 share the average of ranks i+1..j
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double chi_squared_upper_tail(double x, int df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

// ---------------------------------------------------------------------------
// Summaries

DimensionSummary summarize(std::span<const double> values) {
  DimensionSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

std::vector<ConditionSummary> condition_summary(const std::vector<TlxRecord>& records) {
  std::vector<ConditionSummary> out;
  for (const auto condition : kAllConditions) {
    std::array<std::vector<double>, 6> columns;
    std::vector<double> composite;
    for (const auto& r : records) {
      if (r.condition != condition) continue;
      for (std::size_t d = 0; d < 6; ++d) columns[d].push_back(r.scores[d]);
      composite.push_back(composite_workload(r));
    }
    if (composite.empty()) continue;
    ConditionSummary cs{condition, composite.size(), {}, summarize(composite)};
    for (std::size_t d = 0; d < 6; ++d) cs.dimensions[d] = summarize(columns[d]);
    out.push_back(cs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correlation

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InsufficientDataError("samples differ in length");
  if (x.size() < 3) throw InsufficientDataError("Pearson correlation needs at least 3 points");
  if (is_constant(x)) throw DegenerateInputError("first sample is constant");
  if (is_constant(y)) throw DegenerateInputError("second sample is constant");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix pearson_matrix(const std::vector<TlxRecord>& records) {
  if (records.size() < 3) {
    throw InsufficientDataError("correlation matrix needs at least 3 records");
  }
  std::array<std::vector<double>, 6> columns;
  for (const auto& r : records) {
    for (std::size_t d = 0; d < 6; ++d) columns[d].push_back(r.scores[d]);
  }
  for (std::size_t d = 0; d < 6; ++d) {
    if (is_constant(columns[d])) {
      throw DegenerateInputError("dimension '" + std::string(to_string(kAllDimensions[d])) +
                                 "' is constant across all records");
    }
  }
  CorrelationMatrix m;
  for (std::size_t i = 0; i < 6; ++i) {
    m.r[i][i] = 1.0;
    for (std::size_t j = i + 1; j < 6; ++j) {
      m.r[i][j] = m.r[j][i] = pearson(columns[i], columns[j]);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Friedman

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (const int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Exact upper tail P(sum of squared column rank sums >= observed) when each
// row is an independent uniform permutation of its own (doubled) ranks. The
// joint law is exchangeable across columns, so states are kept sorted.
std::optional<double> friedman_exact_tail(const std::vector<std::vector<int>>& doubled_ranks,
                                          long long observed_sum_sq, std::size_t work_limit) {
  if (work_limit == 0) return std::nullopt;
  const std::size_t k = doubled_ranks.front().size();
  using Dist = std::unordered_map<std::vector<int>, long double, VectorHash>;
  Dist dist;
  dist.emplace(std::vector<int>(k, 0), 1.0L);

  std::size_t work = 0;
  for (const auto& row : doubled_ranks) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p = row;
    std::sort(p.begin(), p.end());
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    work += perms.size() * dist.size();
    if (work > work_limit) return std::nullopt;
    const long double weight = 1.0L / static_cast<long double>(perms.size());

    Dist next;
    next.reserve(dist.size() * 4);
    std::vector<int> state(k);
    for (const auto& [sums, prob] : dist) {
      for (const auto& perm : perms) {
        for (std::size_t j = 0; j < k; ++j) state[j] = sums[j] + perm[j];
        std::sort(state.begin(), state.end());
        next[state] += prob * weight;
      }
    }
    dist = std::move(next);
  }

  long double tail = 0.0L;
  for (const auto& [sums, prob] : dist) {
    long long ss = 0;
    for (const int s : sums) ss += static_cast<long long>(s) * s;
    if (ss >= observed_sum_sq) tail += prob;
  }
  return std::clamp(static_cast<double>(tail), 0.0, 1.0);
}

}  // namespace

StatResult friedman_test(const std::vector<std::vector<double>>& scores,
                         const FriedmanOptions& options) {
  const std::size_t n = scores.size();
  if (n < 2) throw InsufficientDataError("Friedman test needs at least 2 participants");
  const std::size_t k = scores.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i].size() != k) {
      throw IncompleteDesignError("row " + std::to_string(i),
                                  "participant row " + std::to_string(i) + " has " +
                                      std::to_string(scores[i].size()) + " cells, expected " +
                                      std::to_string(k));
    }
  }
  if (k < 3) throw InsufficientDataError("Friedman test needs at least 3 conditions");

  std::vector<std::vector<int>> doubled(n);
  std::vector<long long> rank_sums2(k, 0);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ranks = midranks(scores[i]);
    doubled[i].resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      doubled[i][j] = static_cast<int>(std::lround(ranks[j] * 2.0));
      rank_sums2[j] += doubled[i][j];
    }
    // tie groups within the row
    std::vector<double> sorted = scores[i];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t a = 0; a < k;) {
      std::size_t b = a + 1;
      while (b < k && sorted[b] == sorted[a]) ++b;
      const double t = static_cast<double>(b - a);
      tie_term += t * t * t - t;
      a = b;
    }
  }

  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  long long sum_sq2 = 0;
  double sum_sq = 0.0;
  for (const long long r2 : rank_sums2) {
    sum_sq2 += r2 * r2;
    const double r = static_cast<double>(r2) / 2.0;
    sum_sq += r * r;
  }

  StatResult out;
  out.statistic = "chi_squared";
  out.degrees_of_freedom = static_cast<int>(k - 1);
  out.n = n;

  const double correction = 1.0 - tie_term / (nd * kd * (kd * kd - 1.0));
  if (correction <= 1e-12) {
    // every row is a complete tie
    out.value = 0.0;
    out.p_value = 1.0;
    out.method = PMethod::kExact;
    return out;
  }
  const double raw = 12.0 / (nd * kd * (kd + 1.0)) * sum_sq - 3.0 * nd * (kd + 1.0);
  out.value = std::max(0.0, raw / correction);

  if (const auto exact = friedman_exact_tail(doubled, sum_sq2, options.exact_work_limit)) {
    out.p_value = *exact;
    out.method = PMethod::kExact;
  } else {
    out.p_value = chi_squared_upper_tail(out.value, *out.degrees_of_freedom);
    out.method = PMethod::kApproximation;
  }
  return out;
}

BlockDesign build_block_design(const std::vector<TlxRecord>& records, Dimension dimension,
                               const std::vector<Condition>& conditions) {
  BlockDesign design;
  design.conditions = conditions;
  std::map<std::string, std::vector<std::optional<double>>> cells;
  for (const auto& r : records) {
    const auto col = std::find(conditions.begin(), conditions.end(), r.condition);
    if (col == conditions.end()) continue;
    auto& row = cells[r.participant_id];
    row.resize(conditions.size());
    auto& cell = row[static_cast<std::size_t>(col - conditions.begin())];
    if (cell) {
      throw IncompleteDesignError(r.participant_id,
                                  "participant '" + r.participant_id + "' has more than one '" +
                                      std::string(to_string(r.condition)) + "' record");
    }
    cell = r[dimension];
  }
  for (const auto& [participant, row] : cells) {
    for (std::size_t j = 0; j < conditions.size(); ++j) {
      if (!row[j]) {
        throw IncompleteDesignError(participant, "participant '" + participant +
                                                     "' has no record for condition '" +
                                                     std::string(to_string(conditions[j])) + "'");
      }
    }
    design.participants.push_back(participant);
    std::vector<double> values;
    for (const auto& v : row) values.push_back(*v);
    design.scores.push_back(std::move(values));
  }
  return design;
}

// ---------------------------------------------------------------------------
// Wilcoxon

StatResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InsufficientDataError("paired samples differ in length");
  if (a.empty()) throw InsufficientDataError("Wilcoxon test needs at least one pair");

  std::vector<double> magnitude;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    magnitude.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }

  StatResult out;
  out.statistic = "w";
  out.n = magnitude.size();
  if (magnitude.empty()) {
    out.value = 0.0;
    out.p_value = 1.0;
    out.method = PMethod::kAllZero;
    return out;
  }

  const auto ranks = midranks(magnitude);
  const std::size_t n = ranks.size();
  std::vector<long long> doubled(n);
  long long w_plus2 = 0;
  long long total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    doubled[i] = std::llround(ranks[i] * 2.0);
    total2 += doubled[i];
    if (positive[i]) w_plus2 += doubled[i];
  }
  const long long w2 = std::min(w_plus2, total2 - w_plus2);
  out.value = static_cast<double>(w2) / 2.0;

  if (n <= kWilcoxonExactMaxN) {
    // counts[s] = number of sign assignments whose doubled W+ equals s
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(total2) + 1, 0);
    counts[0] = 1;
    long long reach = 0;
    for (const long long r : doubled) {
      for (long long s = reach; s >= 0; --s) {
        if (counts[static_cast<std::size_t>(s)]) {
          counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
        }
      }
      reach += r;
    }
    std::uint64_t hits = 0;
    for (long long s = 0; s <= total2; ++s) {
      if (std::min(s, total2 - s) <= w2) hits += counts[static_cast<std::size_t>(s)];
    }
    out.p_value = static_cast<double>(hits) / std::ldexp(1.0, static_cast<int>(n));
    out.method = PMethod::kExact;
    return out;
  }

  double tie_term = 0.0;
  {
    std::vector<double> sorted = magnitude;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  const double w_plus = static_cast<double>(w_plus2) / 2.0;
  const double z = (std::fabs(w_plus - mean) - 0.5) / std::sqrt(var);
  out.p_value = z <= 0.0 ? 1.0 : std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  out.method = PMethod::kApproximation;
  return out;
}

PairedSamples pair_by_participant(const std::vector<TlxRecord>& records, Dimension dimension,
                                  Condition first, Condition second) {
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> by_participant;
  for (const auto& r : records) {
    if (r.condition != first && r.condition != second) continue;
    auto& slot = by_participant[r.participant_id];
    auto& cell = r.condition == first ? slot.first : slot.second;
    if (cell) {
      throw IncompleteDesignError(r.participant_id,
                                  "participant '" + r.participant_id + "' has more than one '" +
                                      std::string(to_string(r.condition)) + "' record");
    }
    cell = r[dimension];
  }
  PairedSamples out;
  for (const auto& [participant, values] : by_participant) {
    if (values.first && values.second) {
      out.participants.push_back(participant);
      out.a.push_back(*values.first);
      out.b.push_back(*values.second);
    } else {
      ++out.unpaired;
    }
  }
  return out;
}

}  // namespace postedit::tlx
