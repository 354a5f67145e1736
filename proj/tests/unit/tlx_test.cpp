#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "postedit/tlx/report.hpp"
#include "postedit/tlx/stats.hpp"
#include "tlx_data.hpp"

namespace postedit::tlx {
namespace {

constexpr const char* kHeader = "participant_id,condition,mental,physical,temporal,performance,effort,frustration\n";

TlxRecord record(std::string participant, Condition c, std::array<double, 6> scores) {
  return {std::move(participant), c, scores};
}

std::vector<double> random_scores(testing::Rng& rng, std::size_t n, std::size_t levels) {
  std::vector<double> out(n);
  for (auto& v : out) v = static_cast<double>(testing::uniform(rng, 0, levels));
  return out;
}

// --- records -------------------------------------------------------------

TEST(TlxRecords, CompositeExcludesPerformance) {
  const auto r = record("p", Condition::kExcel, {1, 2, 3, 10, 4, 5});
  EXPECT_DOUBLE_EQ(composite_workload(r), 15.0);
}

TEST(TlxRecords, CompositeIsLinear) {
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    TlxRecord a;
    TlxRecord b;
    TlxRecord sum;
    for (std::size_t k = 0; k < 6; ++k) {
      a.scores[k] = static_cast<double>(testing::uniform(rng, 0, 50)) / 10.0;
      b.scores[k] = static_cast<double>(testing::uniform(rng, 0, 50)) / 10.0;
      sum.scores[k] = a.scores[k] + b.scores[k];
    }
    EXPECT_NEAR(composite_workload(sum), composite_workload(a) + composite_workload(b), 1e-12);
  }
}

TEST(TlxRecords, IngestReordersColumnsAndNormalizesConditions) {
  const auto records = ingest_tlx_csv(
      "effort,participant_id,extra,condition,mental,physical,temporal,performance,frustration\n"
      "3,P1,x,Excel,1,2,3,4,5\n"
      "1,P1,y, EC1 ,0,0,0,10,0\n");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].condition, Condition::kExcel);
  EXPECT_EQ(records[0][Dimension::kEffort], 3.0);
  EXPECT_EQ(records[0][Dimension::kFrustration], 5.0);
  EXPECT_EQ(records[1].condition, Condition::kEc1);
}

TEST(TlxRecords, IngestReportsOffendingLine) {
  EXPECT_THROW(ingest_tlx_csv("participant_id,condition\nP1,excel\n"), SchemaError);
  const auto line_of = [](const std::string& doc) -> std::size_t {
    try {
      ingest_tlx_csv(doc);
    } catch (const RowError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of(std::string(kHeader) + "P1,excel,1,1,1,1,1,1\nP2,pencil,1,1,1,1,1,1\n"), 3u);
  EXPECT_EQ(line_of(std::string(kHeader) + "P1,excel,1,1,11,1,1,1\n"), 2u);
  EXPECT_EQ(line_of(std::string(kHeader) + "P1,excel,1,1,one,1,1,1\n"), 2u);
  EXPECT_EQ(line_of(std::string(kHeader) + ",excel,1,1,1,1,1,1\n"), 2u);
  EXPECT_NO_THROW(ingest_tlx_csv(std::string(kHeader) + "P1,excel,1,1,55,1,1,1\n", 100.0));
}

// --- summaries -----------------------------------------------------------

TEST(TlxSummary, MeanAndSampleSd) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(v);
  EXPECT_EQ(s.n, 8u);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  ASSERT_TRUE(s.sd);
  EXPECT_NEAR(*s.sd, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_FALSE(summarize(std::vector<double>{3}).sd);
}

TEST(TlxSummary, ConditionsInOrderWithUnbalancedCounts) {
  std::vector<TlxRecord> records{
      record("a", Condition::kEc1, {1, 1, 1, 9, 1, 1}),
      record("a", Condition::kExcel, {5, 5, 5, 5, 5, 5}),
      record("b", Condition::kExcel, {7, 5, 5, 5, 5, 5}),
  };
  const auto summary = condition_summary(records);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[0].condition, Condition::kExcel);
  EXPECT_EQ(summary[0].n, 2u);
  EXPECT_DOUBLE_EQ(summary[0].dimensions[0].mean, 6.0);
  EXPECT_DOUBLE_EQ(summary[0].composite.mean, 26.0);
  EXPECT_EQ(summary[1].n, 1u);
  EXPECT_TRUE(condition_summary({}).empty());
}

TEST(TlxSummary, StudyMeansGiveCompositeSums) {
  testing::Rng rng(11);
  const auto summary = condition_summary(ingest_tlx_csv(testing::study_csv(rng)));
  ASSERT_EQ(summary.size(), 4u);
  const std::array<double, 4> expected{17.80, 15.42, 11.59, 11.25};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(summary[i].composite.mean, expected[i], 0.005) << to_string(summary[i].condition);
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_NEAR(summary[i].dimensions[k].mean, testing::kStudyMeans[i].means[k], 1e-9);
    }
  }
}

TEST(TlxReport, JsonAndTableRender) {
  testing::Rng rng(5);
  const auto summary = condition_summary(ingest_tlx_csv(testing::study_csv(rng)));
  const auto json = to_json(summary);
  ASSERT_TRUE(json.is_array());
  EXPECT_EQ(json.size(), 4u);
  EXPECT_NE(format_table(summary).find("no_suggestions"), std::string::npos);
}

// --- correlation ---------------------------------------------------------

TEST(TlxPearson, MatchesDefinitionOracle) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = testing::uniform(rng, 3, 40);
    const auto x = random_scores(rng, n, 10);
    const auto y = random_scores(rng, n, 10);
    if (std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end() ||
        std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
      continue;
    }
    EXPECT_NEAR(pearson(x, y), oracle::pearson_definition(x, y), 1e-12);
  }
}

TEST(TlxPearson, RejectsDegenerateInput) {
  const std::vector<double> flat{2, 2, 2, 2};
  const std::vector<double> ramp{1, 2, 3, 4};
  EXPECT_THROW(pearson(flat, ramp), DegenerateInputError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{2, 1}), InsufficientDataError);
}

TEST(TlxPearson, MatrixIsSymmetricWithUnitDiagonal) {
  testing::Rng rng(8);
  const auto records = ingest_tlx_csv(testing::study_csv(rng));
  const auto m = pearson_matrix(records);
  for (const auto a : kAllDimensions) {
    EXPECT_DOUBLE_EQ(m.at(a, a), 1.0);
    for (const auto b : kAllDimensions) {
      EXPECT_EQ(m.at(a, b), m.at(b, a));
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& r : records) {
        x.push_back(r[a]);
        y.push_back(r[b]);
      }
      EXPECT_NEAR(m.at(a, b), oracle::pearson_definition(x, y), 1e-12);
    }
  }
}

// --- ranks ---------------------------------------------------------------

TEST(TlxRanks, MidranksMatchCounting) {
  testing::Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto v = random_scores(rng, testing::uniform(rng, 1, 15), 5);
    EXPECT_EQ(midranks(v), oracle::ranks_by_counting(v));
  }
}

// --- wilcoxon ------------------------------------------------------------

TEST(TlxWilcoxon, ExactPMatchesEnumeration) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = testing::uniform(rng, 1, 12);
    const auto a = random_scores(rng, n, 10);
    const auto b = random_scores(rng, n, 10);
    const auto result = wilcoxon_signed_rank(a, b);
    EXPECT_NEAR(result.p_value, oracle::wilcoxon_enumerated_p(a, b), 1e-10);
  }
}

TEST(TlxWilcoxon, StatisticIsSmallerRankSum) {
  const std::vector<double> a{8, 7, 9, 6, 8, 7};
  const std::vector<double> b{4, 5, 9, 7, 3, 2};
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_EQ(r.statistic, "w");
  EXPECT_EQ(r.n, 5u);  // one zero difference dropped
  // |d| = 4,2,1,5,5 -> ranks 3,2,1,4.5,4.5; only the 1 is negative.
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_EQ(r.method, PMethod::kExact);
}

TEST(TlxWilcoxon, AllZeroDifferences) {
  const std::vector<double> a{1, 2, 3};
  const auto r = wilcoxon_signed_rank(a, a);
  EXPECT_EQ(r.method, PMethod::kAllZero);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.n, 0u);
}

TEST(TlxWilcoxon, LargeSampleUsesApproximation) {
  testing::Rng rng(4);
  const auto a = random_scores(rng, 40, 10);
  const auto b = random_scores(rng, 40, 10);
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_EQ(r.method, PMethod::kApproximation);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
}

TEST(TlxWilcoxon, PairsByParticipant) {
  const std::vector<TlxRecord> records{
      record("p1", Condition::kExcel, {5, 0, 0, 0, 0, 0}),  record("p1", Condition::kEc1, {3, 0, 0, 0, 0, 0}),
      record("p2", Condition::kEc1, {2, 0, 0, 0, 0, 0}),    record("p2", Condition::kExcel, {6, 0, 0, 0, 0, 0}),
      record("p3", Condition::kExcel, {1, 0, 0, 0, 0, 0}),
  };
  const auto paired = pair_by_participant(records, Dimension::kMental, Condition::kExcel, Condition::kEc1);
  EXPECT_EQ(paired.participants, (std::vector<std::string>{"p1", "p2"}));
  EXPECT_EQ(paired.a, (std::vector<double>{5, 6}));
  EXPECT_EQ(paired.b, (std::vector<double>{3, 2}));
  EXPECT_EQ(paired.unpaired, 1u);
}

// --- friedman ------------------------------------------------------------

TEST(TlxFriedman, StatisticMatchesTextbook) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> rows(testing::uniform(rng, 2, 12));
    const auto k = testing::uniform(rng, 3, 5);
    for (auto& row : rows) row = random_scores(rng, k, 4);
    EXPECT_NEAR(friedman_test(rows, FriedmanOptions{0}).value, oracle::friedman_statistic(rows), 1e-9);
  }
}

TEST(TlxFriedman, PValueMatchesPermutationOracle) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::vector<double>> rows(5);
    for (auto& row : rows) row = random_scores(rng, 4, 10);
    const auto result = friedman_test(rows);
    EXPECT_EQ(result.degrees_of_freedom, 3);
    EXPECT_NEAR(result.p_value, oracle::friedman_permutation_p(rows, 20'000, 100 + trial), 0.02);
  }
}

TEST(TlxFriedman, ChiSquaredTailWhenExactDisabled) {
  const std::vector<std::vector<double>> rows{{1, 2, 3}, {1, 3, 2}, {1, 2, 3}, {2, 1, 3}, {1, 2, 3}, {1, 2, 3}};
  const auto r = friedman_test(rows, FriedmanOptions{0});
  EXPECT_EQ(r.method, PMethod::kApproximation);
  EXPECT_NEAR(r.p_value, chi_squared_upper_tail(r.value, 2), 1e-15);
}

TEST(TlxFriedman, ChiSquaredTailKnownValues) {
  EXPECT_NEAR(chi_squared_upper_tail(7.814727903, 3), 0.05, 1e-8);
  EXPECT_NEAR(chi_squared_upper_tail(2.0, 2), std::exp(-1.0), 1e-12);
}

TEST(TlxFriedman, RejectsBadShapes) {
  EXPECT_THROW(friedman_test({{1, 2, 3}}), InsufficientDataError);
  EXPECT_THROW(friedman_test({{1, 2}, {2, 1}}), InsufficientDataError);
  EXPECT_THROW(friedman_test({{1, 2, 3}, {1, 2}}), IncompleteDesignError);
}

TEST(TlxFriedman, BlockDesignNamesMissingParticipant) {
  std::vector<TlxRecord> records;
  for (const auto* p : {"p1", "p2"}) {
    for (const auto c : kAllConditions) records.push_back(record(p, c, {1, 1, 1, 1, 1, 1}));
  }
  records.pop_back();
  try {
    build_block_design(records, Dimension::kMental, {kAllConditions.begin(), kAllConditions.end()});
    FAIL();
  } catch (const IncompleteDesignError& e) {
    EXPECT_EQ(e.participant(), "p2");
  }
  records.push_back(records.front());
  EXPECT_THROW(build_block_design(records, Dimension::kMental, {kAllConditions.begin(), kAllConditions.end()}),
               IncompleteDesignError);
}

TEST(TlxFriedman, BlockDesignLayout) {
  std::vector<TlxRecord> records{
      record("b", Condition::kXcomet, {3, 0, 0, 0, 0, 0}), record("a", Condition::kExcel, {1, 0, 0, 0, 0, 0}),
      record("a", Condition::kXcomet, {2, 0, 0, 0, 0, 0}), record("b", Condition::kExcel, {4, 0, 0, 0, 0, 0}),
  };
  const auto design = build_block_design(records, Dimension::kMental, {Condition::kExcel, Condition::kXcomet});
  EXPECT_EQ(design.participants, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(design.scores, (std::vector<std::vector<double>>{{1, 2}, {4, 3}}));
}

}  // namespace
}  // namespace postedit::tlx
