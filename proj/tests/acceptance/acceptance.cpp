// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "postedit/csv.hpp"
#include "postedit/detection/engine.hpp"
#include "postedit/exporter.hpp"
#include "postedit/json_codec.hpp"
#include "postedit/spans.hpp"
#include "postedit/tlx/stats.hpp"
#include "service_harness.hpp"
#include "tlx_data.hpp"

namespace {

using namespace postedit;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Verdict sample_response_fidelity() {
  Verdict v;
  const auto pair = pair_from_json(parse_json(testing::read_fixture("romani_pair.json")));
  const auto out =
      detection::sanitize_spans(detection::parse_ec1_response(testing::read_fixture("romani_response.json")), pair);
  if (out.spans.size() != 1) {
    v.fail(std::to_string(out.spans.size()) + " spans");
    return v;
  }
  const auto& s = out.spans[0];
  if (s.category != ErrorCategory::kSpelling) v.fail("category");
  if (s.severity != Severity::kMinor) v.fail("severity");
  if (s.source_range != CharRange{0, 5}) v.fail("source range");
  if (s.translation_range != CharRange{0, 7}) v.fail("translation range");
  v.detail = v.ok ? "1 span Spelling/Minor src [0,5) mt [0,7)" : v.detail;
  return v;
}

Verdict span_invariants() {
  Verdict v;
  testing::Rng rng(0x5eed);
  constexpr int kTrials = 10'000;
  int failures = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto pair = testing::random_pair(rng);
    const auto before = testing::random_annotation(rng, pair);
    const auto splice = testing::random_splice(rng, before.corrected_text);
    const auto result = apply_edit(before, splice);
    bool ok = validate_annotation(result.annotation, pair).empty();
    if (extract_span_text(before.corrected_text, splice.target()) == splice.replacement) {
      ok = ok && result.annotation == before;
    } else {
      const auto delta = static_cast<std::ptrdiff_t>(code_point_length(splice.replacement)) -
                         static_cast<std::ptrdiff_t>(splice.end - splice.start);
      for (const auto& old : before.spans) {
        if (old.translation_range.start < splice.end) continue;
        const auto it = std::find_if(result.annotation.spans.begin(), result.annotation.spans.end(),
                                     [&](const ErrorSpan& s) { return s.span_id == old.span_id; });
        ok = ok && it != result.annotation.spans.end() &&
             static_cast<std::ptrdiff_t>(it->translation_range.start) ==
                 static_cast<std::ptrdiff_t>(old.translation_range.start) + delta &&
             it->translation_range.length() == old.translation_range.length();
      }
    }
    if (!ok) ++failures;
  }
  if (failures) v.fail(std::to_string(failures) + " failing trials");
  v.detail = v.ok ? std::to_string(kTrials) + " trials" : v.detail;
  return v;
}

Verdict export_round_trip() {
  Verdict v;
  testing::Rng rng(1000);
  std::vector<exporter::ExportRecord> records;
  for (std::size_t i = 0; i < 1000; ++i) records.push_back(testing::random_record(rng, i));
  const auto back = exporter::from_json(exporter::to_json(records));
  std::size_t mismatches = back.size() == records.size() ? 0 : records.size();
  for (std::size_t i = 0; i < std::min(back.size(), records.size()); ++i) {
    if (!(back[i] == records[i])) ++mismatches;
  }
  if (mismatches) v.fail(std::to_string(mismatches) + " JSON mismatches");
  const auto rows = csv::parse(exporter::to_csv(records));
  const auto flat = exporter::flatten(records);
  if (rows.size() != flat.size() + 1) {
    v.fail("CSV row count");
  } else {
    for (std::size_t i = 0; i < flat.size(); ++i) {
      if (rows[i + 1].fields != flat[i]) {
        v.fail("CSV row " + std::to_string(i + 1));
        break;
      }
    }
  }
  v.detail = v.ok ? "1000 records, " + std::to_string(flat.size()) + " CSV rows" : v.detail;
  return v;
}

Verdict composite_workload() {
  Verdict v;
  testing::Rng rng(17);
  const auto summary = tlx::condition_summary(tlx::ingest_tlx_csv(testing::study_csv(rng)));
  const std::array<double, 4> expected{17.80, 15.42, 11.59, 11.25};
  std::ostringstream detail;
  if (summary.size() != 4) {
    v.fail("expected 4 conditions");
    return v;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const double got = summary[i].composite.mean;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.2f ", std::string(tlx::to_string(summary[i].condition)).c_str(), got);
    detail << buf;
    if (std::abs(got - expected[i]) > 0.005) v.fail(std::string("composite ") + buf);
  }
  const auto by_condition = [&](tlx::Condition c) {
    return std::find_if(summary.begin(), summary.end(), [&](const auto& s) { return s.condition == c; })
        ->composite.mean;
  };
  const double excel = by_condition(tlx::Condition::kExcel);
  const double ec1 = by_condition(tlx::Condition::kEc1);
  for (const auto& s : summary) {
    if (s.composite.mean > excel || s.composite.mean < ec1) v.fail("ordering");
  }
  if (v.ok) v.detail = detail.str();
  return v;
}

Verdict statistics() {
  Verdict v;
  testing::Rng rng(2024);
  const auto scores = [&](std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = static_cast<double>(testing::uniform(rng, 0, 10));
    return out;
  };
  double worst_wilcoxon = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto n = testing::uniform(rng, 1, 12);
    const auto a = scores(n);
    const auto b = scores(n);
    const double diff = std::abs(tlx::wilcoxon_signed_rank(a, b).p_value - oracle::wilcoxon_enumerated_p(a, b));
    worst_wilcoxon = std::max(worst_wilcoxon, diff);
  }
  if (worst_wilcoxon > 1e-10) v.fail("wilcoxon diff " + std::to_string(worst_wilcoxon));

  double worst_friedman = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<std::vector<double>> rows(5);
    for (auto& row : rows) row = scores(4);
    const double p = tlx::friedman_test(rows).p_value;
    worst_friedman = std::max(worst_friedman, std::abs(p - oracle::friedman_permutation_p(rows, 100'000, 7 + i)));
  }
  if (worst_friedman > 0.02) v.fail("friedman diff " + std::to_string(worst_friedman));

  double worst_pearson = 0.0;
  const auto records = tlx::ingest_tlx_csv(testing::study_csv(rng));
  const auto m = tlx::pearson_matrix(records);
  for (const auto a : tlx::kAllDimensions) {
    if (m.at(a, a) != 1.0) v.fail("diagonal");
    for (const auto b : tlx::kAllDimensions) {
      if (m.at(a, b) != m.at(b, a)) v.fail("asymmetric");
      std::vector<double> x;
      std::vector<double> y;
      for (const auto& r : records) {
        x.push_back(r[a]);
        y.push_back(r[b]);
      }
      worst_pearson = std::max(worst_pearson, std::abs(m.at(a, b) - oracle::pearson_definition(x, y)));
    }
  }
  if (worst_pearson > 1e-12) v.fail("pearson diff " + std::to_string(worst_pearson));
  if (v.ok) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "max |dp| wilcoxon %.1e, friedman %.4f; max |dr| pearson %.1e", worst_wilcoxon,
                  worst_friedman, worst_pearson);
    v.detail = buf;
  }
  return v;
}

Verdict service_contract() {
  Verdict v;
  {
    auto svc = testing::make_service(std::make_shared<service::Store>());
    svc->ingest_pairs("d1", testing::pairs_of(testing::kThreePairs));
    const auto outcome = testing::hammer_one_pair(*svc, "p1", 16, 100);
    if (outcome.other_failures) v.fail(std::to_string(outcome.other_failures) + " unexpected write errors");
    if (outcome.final_version != outcome.successes) {
      v.fail("final version " + std::to_string(outcome.final_version) + " != " + std::to_string(outcome.successes) +
             " successful writes");
    }
    if (outcome.successes + outcome.conflicts != 1600) v.fail("attempts lost");
    v.detail = std::to_string(outcome.successes) + " writes, " + std::to_string(outcome.conflicts) + " conflicts";
  }
  {
    testing::TempDir dir;
    const auto path = (dir / "store.json").string();
    std::shared_ptr<const service::StoreState> before;
    {
      auto svc = testing::make_service(std::make_shared<service::Store>(path));
      svc->ingest_pairs("d1", testing::pairs_of(testing::kThreePairs));
      svc->run_detection("p1", "stub", false);
      svc->run_detection("p2", "stub", false);
      Annotation a;
      a.annotator_id = "alice";
      a.corrected_text = "Today Romani は話されています。";
      a.overall_score = 64;
      svc->submit_annotation("p1", a, 0);
      before = svc->snapshot();
    }
    const auto bytes = testing::read_file(path);
    const service::Store reopened(path);
    if (!reopened.snapshot()->equals(*before)) v.fail("restart lost state");
    if (dump_json(service::to_json(*reopened.snapshot())) + "\n" != bytes) v.fail("restart not byte-exact");
  }
  const auto table = testing::run_error_table();
  for (const auto& row : table) {
    if (row.actual_status != row.expected_status) {
      v.fail(row.name + ": got " + std::to_string(row.actual_status));
    }
  }
  if (v.ok) v.detail += "; restart exact; " + std::to_string(table.size()) + " status cases";
  return v;
}

Verdict stub_determinism() {
  Verdict v;
  const auto pairs = testing::pairs_of(testing::read_fixture("stub_corpus.json"));
  const detection::StubEngine stub;
  std::vector<std::string> first;
  std::size_t spans = 0;
  for (int run = 0; run < 100; ++run) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto out = stub.detect(pairs[i]);
      Annotation a;
      a.pair_id = pairs[i].pair_id;
      a.annotator_id = "stub";
      a.corrected_text = pairs[i].mt_text;
      a.spans = out.spans;
      if (!validate_annotation(a, pairs[i]).empty()) v.fail(pairs[i].pair_id + " invalid");
      Json arr = Json::array();
      for (const auto& s : out.spans) arr.push_back(to_json(s));
      const auto bytes = dump_json(arr);
      if (run == 0) {
        first.push_back(bytes);
        spans += out.spans.size();
      } else if (bytes != first[i]) {
        v.fail(pairs[i].pair_id + " differs on run " + std::to_string(run));
      }
    }
  }
  if (v.ok) v.detail = std::to_string(pairs.size()) + " pairs x 100 runs, " + std::to_string(spans) + " spans each";
  return v;
}

struct Criterion {
  const char* name;
  double budget_s;  // 0 means unbounded
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"sample_response_fidelity", 1.0, sample_response_fidelity},
      {"span_invariant_suite", 30.0, span_invariants},
      {"export_round_trip", 0.0, export_round_trip},
      {"composite_workload_table", 0.0, composite_workload},
      {"statistics_oracle_equivalence", 0.0, statistics},
      {"service_contract", 60.0, service_contract},
      {"stub_engine_determinism", 0.0, stub_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.fail(std::string("threw: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.budget_s > 0 && elapsed > c.budget_s) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "over budget (%.2fs > %.0fs)", elapsed, c.budget_s);
      v.fail(buf);
    }
    if (!v.ok) ++failed;
    std::printf("%s %s (%.2fs) %s\n", v.ok ? "PASS" : "FAIL", c.name, elapsed, v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
