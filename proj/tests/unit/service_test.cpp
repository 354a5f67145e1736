#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "postedit/csv.hpp"
#include "postedit/exporter.hpp"
#include "postedit/service/config.hpp"
#include "service_harness.hpp"

namespace postedit::service {
namespace {

using testing::call;
using testing::pairs_of;
using testing::TempDir;

std::vector<TranslationPair> numbered_pairs(int n) {
  std::vector<TranslationPair> out;
  for (int i = 0; i < n; ++i) {
    TranslationPair p;
    p.pair_id = "q" + std::to_string(i);
    p.source_lang = "en";
    p.target_lang = "de";
    p.source_text = "text " + std::to_string(i);
    p.mt_text = "Text " + std::to_string(i);
    out.push_back(p);
  }
  return out;
}

// --- config --------------------------------------------------------------

TEST(Config, ParsesDocumentedShape) {
  const auto c = parse_config(R"({
    "bind": "0.0.0.0:9000",
    "store": {"backend": "file", "path": "data/store.json"},
    "engines": [{"engine_id": "stub", "kind": "stub"},
                {"engine_id": "ec1", "kind": "llm", "endpoint": "https://x/v1", "model": "gpt-4o",
                 "credential_env": "OPENAI_API_KEY", "timeout_s": 12.5, "max_in_flight": 4}],
    "auth_tokens": {"alice": "ALICE_TOKEN"}})");
  EXPECT_EQ(c.bind, "0.0.0.0:9000");
  EXPECT_EQ(c.store, StoreBackend::kFile);
  ASSERT_EQ(c.engines.size(), 2u);
  EXPECT_DOUBLE_EQ(c.engines[1].timeout_seconds, 12.5);
  EXPECT_EQ(c.engines[1].max_in_flight, 4);
  EXPECT_EQ(c.auth_tokens.at("alice"), "ALICE_TOKEN");
}

TEST(Config, RejectsInvariantViolations) {
  EXPECT_THROW(parse_config(R"({"engines": []})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"store": {"backend": "file"}, "engines": [{"engine_id":"s","kind":"stub"}]})"),
               ConfigError);
  EXPECT_THROW(parse_config(R"({"engines": [{"engine_id":"s","kind":"magic"}]})"), ConfigError);
  EXPECT_THROW(parse_config("not json"), ConfigError);
  EXPECT_THROW(parse_bind("localhost"), ConfigError);
  EXPECT_EQ(parse_bind(":8080").host, "0.0.0.0");
}

TEST(Config, ResolvesTokensFromEnvironment) {
  auto c = default_config();
  c.auth_tokens["alice"] = "POSTEDIT_TEST_ALICE";
  ::unsetenv("POSTEDIT_TEST_ALICE");
  EXPECT_THROW(resolve_tokens(c), ConfigError);
  ::setenv("POSTEDIT_TEST_ALICE", "secret", 1);
  EXPECT_EQ(resolve_tokens(c).at("secret"), "alice");
  ::unsetenv("POSTEDIT_TEST_ALICE");
}

// --- service operations --------------------------------------------------

TEST(Ingest, StoresPendingAndIsIdempotent) {
  auto svc = testing::make_service(std::make_shared<Store>());
  auto r = svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  EXPECT_EQ(r.created, 3u);
  for (const auto& id : {"p1", "p2", "p3"}) EXPECT_EQ(svc->get_pair(id).pair.status, PairStatus::kPending);
  r = svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  EXPECT_EQ(r.created, 0u);
  EXPECT_EQ(r.unchanged, 3u);
  EXPECT_EQ(svc->snapshot()->pairs.size(), 3u);
}

TEST(Ingest, InvalidPairRejectsWholeRequest) {
  auto svc = testing::make_service(std::make_shared<Store>());
  auto pairs = pairs_of(testing::kThreePairs);
  pairs[2].mt_text.clear();
  EXPECT_THROW(svc->ingest_pairs("d1", pairs), ValidationError);
  EXPECT_TRUE(svc->snapshot()->pairs.empty());
}

TEST(Ingest, DuplicateIdsInRequestRejected) {
  auto svc = testing::make_service(std::make_shared<Store>());
  auto pairs = pairs_of(testing::kThreePairs);
  pairs.push_back(pairs[0]);
  EXPECT_THROW(svc->ingest_pairs("d1", pairs), ValidationError);
}

TEST(Ingest, CollisionListsIds) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  auto pairs = pairs_of(testing::kThreePairs);
  pairs[1].mt_text = "changed";
  try {
    svc->ingest_pairs("d1", pairs);
    FAIL();
  } catch (const ConflictError& e) {
    EXPECT_EQ(e.ids(), std::vector<std::string>{"p2"});
  }
  EXPECT_THROW(svc->ingest_pairs("d2", pairs_of(testing::kThreePairs)), ConflictError);
}

TEST(ListPairs, PagesInPairIdOrder) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", numbered_pairs(5));
  std::vector<std::string> seen;
  for (std::size_t page = 1; page <= 3; ++page) {
    const auto p = svc->list_pairs("d1", std::nullopt, page, 2);
    EXPECT_EQ(p.total_pages, 3u);
    EXPECT_EQ(p.items.size(), page < 3 ? 2u : 1u);
    for (const auto& s : p.items) seen.push_back(s.pair_id);
  }
  EXPECT_EQ(seen, (std::vector<std::string>{"q0", "q1", "q2", "q3", "q4"}));
  EXPECT_TRUE(svc->list_pairs("d1", PairStatus::kCompleted, 1, 50).items.empty());
  EXPECT_TRUE(svc->list_pairs("d1", std::nullopt, 4, 2).items.empty());
  EXPECT_THROW(svc->list_pairs("nope", std::nullopt, 1, 10), NotFoundError);
  EXPECT_THROW(svc->list_pairs("d1", std::nullopt, 1, 0), BadRequestError);
  EXPECT_THROW(svc->list_pairs("d1", std::nullopt, 1, 501), BadRequestError);
  EXPECT_NO_THROW(svc->list_pairs("d1", std::nullopt, 1, 500));
}

TEST(Detection, CachesPerEngineAndAdvancesStatus) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  const auto first = svc->run_detection("p2", "stub", false);
  EXPECT_FALSE(first.cached);
  EXPECT_EQ(first.status, PairStatus::kInProgress);
  ASSERT_EQ(first.spans.size(), 1u);
  const auto second = svc->run_detection("p2", "stub", false);
  EXPECT_TRUE(second.cached);
  EXPECT_EQ(second.spans, first.spans);
  EXPECT_FALSE(svc->run_detection("p2", "stub", true).cached);
  EXPECT_TRUE(svc->list_pairs("d1", std::nullopt, 1, 10).items[1].has_detection);
}

TEST(Detection, EngineFailureLeavesStatus) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  EXPECT_THROW(svc->run_detection("p1", "down", false), detection::EngineUnavailableError);
  EXPECT_EQ(svc->get_pair("p1").pair.status, PairStatus::kPending);
  svc->run_detection("p1", "stub", false);
  EXPECT_THROW(svc->run_detection("p1", "down", false), detection::EngineUnavailableError);
  EXPECT_EQ(svc->get_pair("p1").pair.status, PairStatus::kInProgress);
  EXPECT_THROW(svc->run_detection("p1", "nope", false), BadRequestError);
}

TEST(Submit, VersionsAndCompletes) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  Annotation a;
  a.annotator_id = "alice";
  a.corrected_text = "Bonjour !";
  const auto stored = svc->submit_annotation("p3", a, 0);
  EXPECT_EQ(stored.version, 1u);
  EXPECT_EQ(stored.pair_id, "p3");
  EXPECT_EQ(svc->get_pair("p3").pair.status, PairStatus::kCompleted);
  try {
    svc->submit_annotation("p3", a, 0);
    FAIL();
  } catch (const ConflictError& e) {
    EXPECT_EQ(e.current_version(), 1u);
  }
  const auto again = svc->submit_annotation("p3", a, 1);
  EXPECT_EQ(again.version, 2u);
  EXPECT_EQ(again.created_at, stored.created_at);
  EXPECT_GT(again.updated_at, stored.updated_at);
}

TEST(Submit, InvalidAnnotationIsRejectedWithViolations) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  Annotation a;
  a.annotator_id = "alice";
  a.corrected_text = "Bonjour.";
  ErrorSpan s;
  s.span_id = "x";
  s.translation_range = {0, 20};
  a.spans.push_back(s);
  try {
    svc->submit_annotation("p3", a, 0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.violations().at(0).rule, rules::kTranslationOutOfBounds);
  }
  EXPECT_EQ(svc->get_pair("p3").pair.status, PairStatus::kPending);
}

TEST(Export, OnlyCompletedPairsSortedById) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  EXPECT_EQ(svc->export_dataset("d1", ExportFormat::kCsv), std::string(exporter::kCsvHeader) + "\r\n");
  Annotation a;
  a.annotator_id = "alice";
  a.corrected_text = "Bonjour.";
  svc->submit_annotation("p3", a, 0);
  a.corrected_text = "多瑙河流经维也纳。";
  svc->submit_annotation("p2", a, 0);
  const auto records = exporter::from_json(svc->export_dataset("d1", ExportFormat::kJson));
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].pair_id, "p2");
  EXPECT_EQ(records[1].pair_id, "p3");
  EXPECT_THROW(svc->export_dataset("zz", ExportFormat::kJson), NotFoundError);
  EXPECT_THROW(parse_export_format("xml"), BadRequestError);
}

TEST(Audit, CleanStoreHasNoFindingsAndResetWorks) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  Annotation a;
  a.annotator_id = "alice";
  a.corrected_text = "Bonjour.";
  svc->submit_annotation("p3", a, 0);
  EXPECT_TRUE(svc->audit().empty());
  svc->reset_pair("p3");
  EXPECT_EQ(svc->get_pair("p3").pair.status, PairStatus::kPending);
  EXPECT_FALSE(svc->get_pair("p3").annotation.has_value());
}

TEST(Audit, DetectsTamperedStore) {
  TempDir dir;
  const auto path = (dir / "store.json").string();
  {
    auto svc = testing::make_service(std::make_shared<Store>(path));
    svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
    Annotation a;
    a.annotator_id = "alice";
    a.corrected_text = "Bonjour.";
    svc->submit_annotation("p3", a, 0);
  }
  auto doc = parse_json(testing::read_file(path));
  for (auto& p : doc["pairs"]) {
    if (p["pair_id"] == "p3") p["source_text"] = "Good evening.";
  }
  std::ofstream(path, std::ios::binary | std::ios::trunc) << dump_json(doc);
  auto svc = testing::make_service(std::make_shared<Store>(path));
  const auto findings = svc->audit();
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].pair_id, "p3");
}

// --- store ---------------------------------------------------------------

TEST(Store, FailedCommitLeavesNoTrace) {
  Store store;
  EXPECT_THROW(store.commit([](StoreState& s) {
    s.datasets["x"];
    throw IoError("boom");
  }),
               IoError);
  EXPECT_TRUE(store.snapshot()->datasets.empty());
}

TEST(Store, SnapshotsAreImmutable) {
  Store store;
  const auto before = store.snapshot();
  store.commit([](StoreState& s) { s.datasets["x"]; });
  EXPECT_TRUE(before->datasets.empty());
  EXPECT_EQ(store.snapshot()->datasets.size(), 1u);
}

TEST(Store, FileBackendRestartIsExact) {
  TempDir dir;
  const auto path = (dir / "nested" / "store.json").string();
  std::shared_ptr<const StoreState> before;
  {
    auto svc = testing::make_service(std::make_shared<Store>(path));
    svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
    svc->run_detection("p2", "stub", false);
    Annotation a;
    a.annotator_id = "alice";
    a.corrected_text = "多瑙河流经 Vienna。";
    a.overall_score = 70;
    ErrorSpan s;
    s.span_id = "s1";
    s.category = ErrorCategory::kUntranslated;
    s.translation_range = {6, 12};
    s.source_range = CharRange{25, 31};
    a.spans.push_back(s);
    svc->submit_annotation("p2", a, 0);
    before = svc->snapshot();
  }
  const auto bytes = testing::read_file(path);
  Store reopened(path);
  EXPECT_TRUE(reopened.snapshot()->equals(*before));
  EXPECT_EQ(dump_json(to_json(*reopened.snapshot())) + "\n", bytes);
}

TEST(Store, CorruptFileIsReported) {
  TempDir dir;
  const auto path = (dir / "store.json").string();
  std::ofstream(path) << "{\"format\":";
  EXPECT_THROW(Store{path}, ParseError);
}

// --- concurrency ---------------------------------------------------------

TEST(Concurrency, NoLostUpdates) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", pairs_of(testing::kThreePairs));
  const auto outcome = testing::hammer_one_pair(*svc, "p1", 8, 50);
  EXPECT_EQ(outcome.other_failures, 0u);
  EXPECT_EQ(outcome.successes + outcome.conflicts, 400u);
  EXPECT_EQ(outcome.final_version, outcome.successes);
  EXPECT_GT(outcome.successes, 0u);
}

TEST(Concurrency, ReadersSeeConsistentSnapshots) {
  auto svc = testing::make_service(std::make_shared<Store>());
  svc->ingest_pairs("d1", numbered_pairs(50));
  std::atomic<bool> stop{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!stop) {
      const auto snap = svc->snapshot();
      for (const auto& [id, doc] : snap->annotations) {
        if (snap->pairs.at(id)->status != PairStatus::kCompleted) ++bad;
      }
    }
  });
  Annotation a;
  a.annotator_id = "w";
  for (int i = 0; i < 50; ++i) {
    a.corrected_text = "Text " + std::to_string(i);
    svc->submit_annotation("q" + std::to_string(i), a, 0);
  }
  stop = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
}

// --- HTTP ----------------------------------------------------------------

TEST(Router, ErrorTableMatches) {
  for (const auto& row : testing::run_error_table()) {
    EXPECT_EQ(row.actual_status, row.expected_status) << row.name << ": " << row.body;
  }
}

TEST(Router, ConflictCarriesCurrentVersion) {
  auto svc = testing::make_service(std::make_shared<Store>());
  const Router router(svc);
  call(router, "POST", "/datasets/d1/pairs", testing::kThreePairs);
  const auto body = testing::annotation_body("alice", "Bonjour.");
  EXPECT_EQ(call(router, "PUT", "/pairs/p3/annotation", body, {{"if-match", "0"}}).status, 200);
  const auto r = call(router, "PUT", "/pairs/p3/annotation", body, {{"If-Match", "0"}});
  ASSERT_EQ(r.status, 409);
  EXPECT_EQ(parse_json(r.body)["error"]["current_version"], 1);
}

TEST(Router, ValidationFailureEchoesViolations) {
  auto svc = testing::make_service(std::make_shared<Store>());
  const Router router(svc);
  call(router, "POST", "/datasets/d1/pairs", testing::kThreePairs);
  const auto r = call(router, "PUT", "/pairs/p3/annotation",
                      testing::annotation_body(
                          "alice", "Bonjour.",
                          R"([{"span_id":"a","category":"Spelling","severity":"Minor","translation_range":{"start":0,"end":4}},)"
                          R"({"span_id":"b","category":"Spelling","severity":"Minor","translation_range":{"start":2,"end":6}}])"),
                      {{"If-Match", "0"}});
  ASSERT_EQ(r.status, 422);
  const auto v = parse_json(r.body)["error"]["violations"];
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0]["rule"], "translation_overlap");
  EXPECT_EQ(v[0]["span_ids"], Json::array({"a", "b"}));
}

TEST(Router, DetectReportsCacheFlag) {
  auto svc = testing::make_service(std::make_shared<Store>());
  const Router router(svc);
  call(router, "POST", "/datasets/d1/pairs", testing::kThreePairs);
  const std::map<std::string, std::string> q = {{"engine", "stub"}};
  EXPECT_EQ(parse_json(call(router, "POST", "/pairs/p2/detect", {}, {}, q).body)["cached"], false);
  EXPECT_EQ(parse_json(call(router, "POST", "/pairs/p2/detect", {}, {}, q).body)["cached"], true);
  EXPECT_EQ(parse_json(call(router, "POST", "/pairs/p2/detect", {}, {}, {{"engine", "stub"}, {"force", "true"}}).body)
                ["cached"],
            false);
}

TEST(ApiServer, ServesOverSockets) {
  auto svc = testing::make_service(std::make_shared<Store>());
  auto router = std::make_shared<const Router>(svc);
  ApiServer server(router);
  const int port = server.bind("127.0.0.1", 0);
  std::thread thread([&] { server.listen(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->body, R"({"status":"ok"})");

  auto ingest = client.Post("/datasets/d1/pairs", testing::kThreePairs, "application/json");
  ASSERT_TRUE(ingest);
  EXPECT_EQ(ingest->status, 201);

  auto list = client.Get("/datasets/d1/pairs?status=pending&page=1&page_size=2");
  ASSERT_TRUE(list);
  EXPECT_EQ(parse_json(list->body)["items"].size(), 2u);

  auto put = client.Put("/pairs/p3/annotation", {{"If-Match", "\"0\""}}, testing::annotation_body("alice", "Bonjour."),
                        "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  EXPECT_EQ(put->get_header_value("ETag"), "\"1\"");

  auto csv_doc = client.Get("/datasets/d1/export?format=csv");
  ASSERT_TRUE(csv_doc);
  EXPECT_EQ(csv::parse(csv_doc->body).size(), 2u);

  server.stop();
  thread.join();
}

}  // namespace
}  // namespace postedit::service
