#include <gtest/gtest.h>

#include <thread>

#include "support.hpp"
#include "tmw/errors.hpp"
#include "tmw/service.hpp"

namespace tmw {
namespace {

using testing::at_ms;

const char* kTm =
    "the red house\tdas rote Haus\t0-0 1-1 2-2\n"
    "the blue house\tdas blaue Haus\t0-0 1-1 2-2\n"
    "a small garden\tein kleiner Garten\n";

PostEditPayload payload(const std::string& segment, Origin origin, const std::string& initial,
                        const std::string& final_text, std::int64_t start = 0, std::int64_t end = 1000) {
  PostEditPayload p;
  p.segment_id = segment;
  p.origin = origin;
  p.initial_text = initial;
  p.final_text = final_text;
  p.started_at = at_ms(start);
  p.finished_at = at_ms(end);
  return p;
}

class ServiceTest : public ::testing::Test {
 protected:
  std::unique_ptr<Workbench> open(ServiceConfig config = {}) {
    return std::make_unique<Workbench>(dir.path(), config);
  }
  testing::TempDir dir;
};

TEST_F(ServiceTest, CreateAndList) {
  auto wb = open();
  const auto p = wb->create_project("demo", "en", "de");
  EXPECT_FALSE(p.id.empty());
  ASSERT_EQ(wb->list_projects().size(), 1u);
  EXPECT_THROW(wb->create_project("demo", "en", "fr"), Conflict);
  EXPECT_THROW(wb->create_project("", "en", "fr"), InvalidInput);
}

TEST_F(ServiceTest, ProjectSurvivesRestart) {
  std::string id;
  {
    auto wb = open();
    id = wb->create_project("demo", "en", "de").id;
  }
  auto wb = open();
  ASSERT_EQ(wb->list_projects().size(), 1u);
  EXPECT_EQ(wb->list_projects()[0].id, id);
  EXPECT_EQ(wb->project(id).source_lang, "en");
  // ids keep counting after a restart
  EXPECT_NE(wb->create_project("second", "en", "de").id, id);
}

TEST_F(ServiceTest, UploadTm) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  const auto r = wb->upload_tm(id, kTm);
  EXPECT_EQ(r.added, 3u);
  EXPECT_TRUE(r.warnings.empty());

  const auto bad = wb->upload_tm(id, "one two\teins zwei\tx-y\n");
  EXPECT_EQ(bad.added, 1u);
  EXPECT_EQ(bad.warnings.size(), 1u);

  const auto again = wb->upload_tm(id, kTm);
  EXPECT_EQ(again.added, 0u);
  EXPECT_EQ(again.duplicates.size(), 3u);
  EXPECT_EQ(wb->project(id).tm_entries, 4u);

  EXPECT_EQ(wb->upload_tm(id, "").added, 0u);
  EXPECT_THROW(wb->upload_tm("nope", kTm), NotFound);
}

TEST_F(ServiceTest, Suggestions) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  wb->upload_tm(id, kTm);
  wb->add_segments(id, {{"s1", "the red house"}, {"s2", "a big garden"}});
  wb->ingest(id, Origin::MT, "s2\tein großer Garten\n");

  const auto j = wb->suggestions_json(id, "s1");
  EXPECT_EQ(j["tm"][0]["sim"], 1.0);
  EXPECT_TRUE(j["mt"].is_null());
  EXPECT_EQ(wb->suggestions_json(id, "s2")["mt"], "ein großer Garten");
  EXPECT_EQ(wb->suggestions_json(id, "s1"), j);

  try {
    wb->suggestions(id, "missing");
    FAIL();
  } catch (const NotFound& e) {
    EXPECT_EQ(e.key(), "missing");
  }
}

TEST_F(ServiceTest, SegmentsAllOrNothing) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  wb->add_segments(id, {{"s1", "x"}});
  EXPECT_THROW(wb->add_segments(id, {{"s2", "y"}, {"s1", "z"}}), Conflict);
  EXPECT_THROW(wb->add_segments(id, {{"s3", "y"}, {"s3", "z"}}), Conflict);
  EXPECT_THROW(wb->add_segments(id, {{"s4", "  "}}), InvalidInput);
  EXPECT_EQ(wb->segments(id).size(), 1u);
}

TEST_F(ServiceTest, SubmitAndDownload) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  wb->add_segments(id, {{"s1", "the red house"}, {"s2", "a garden"}});
  const auto session = wb->create_session(id, "T1");
  EXPECT_EQ(Session{}.records.size(), wb->session(id, session.session_id).records.size());
  EXPECT_NE(wb->download_log(id, session.session_id).find("<records/>"), std::string::npos);

  const auto r = wb->submit_postedit(id, session.session_id, payload("s1", Origin::MT, "das Haus", "das rote Haus"));
  EXPECT_EQ(r.counts.insertions, 1u);
  EXPECT_EQ(r.translator_id, "T1");
  EXPECT_THROW(wb->submit_postedit(id, session.session_id, payload("s1", Origin::MT, "a", "b")), Conflict);
  EXPECT_THROW(wb->submit_postedit(id, session.session_id, payload("s2", Origin::MT, "a", "b", 10, 5)), InvalidInput);
  EXPECT_THROW(wb->submit_postedit(id, session.session_id, payload("nope", Origin::MT, "a", "b")), NotFound);
  EXPECT_THROW(wb->submit_postedit(id, "s999", payload("s2", Origin::MT, "a", "b")), NotFound);
  wb->submit_postedit(id, session.session_id, payload("s2", Origin::Scratch, "", "ein Garten"));

  const std::string xml = wb->download_log(id, session.session_id);
  EXPECT_EQ(import_xml(xml), wb->session(id, session.session_id));
  EXPECT_EQ(import_xml(xml).records.size(), 2u);
}

TEST_F(ServiceTest, RecordsDurableAcrossRestartAndSnapshot) {
  std::string id, sid;
  std::string before;
  {
    ServiceConfig config;
    config.snapshot_every = 7;  // forces snapshots mid-stream
    auto wb = open(config);
    id = wb->create_project("demo", "en", "de").id;
    wb->upload_tm(id, kTm);
    std::vector<std::pair<std::string, std::string>> segs;
    for (int i = 0; i < 20; ++i) segs.emplace_back("s" + std::to_string(i), "segment number " + std::to_string(i));
    wb->add_segments(id, segs);
    wb->ingest(id, Origin::APE, "s1\tSegment eins\n");
    sid = wb->create_session(id, "T1").session_id;
    for (int i = 0; i < 20; ++i) {
      wb->submit_postedit(id, sid, payload("s" + std::to_string(i), Origin::MT, "Segment", "Segment " + std::to_string(i), i, i + 100));
    }
    before = wb->download_log(id, sid);
  }
  auto wb = open();
  EXPECT_EQ(wb->download_log(id, sid), before);
  EXPECT_EQ(wb->project(id).tm_entries, 3u);
  EXPECT_EQ(wb->suggestions_json(id, "s1")["ape"], "Segment eins");
}

TEST_F(ServiceTest, ExportAlignments) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  wb->upload_tm(id, kTm);
  wb->add_segments(id, {{"s1", "the red house"}, {"s2", "two words"}});
  const auto sid = wb->create_session(id, "T1").session_id;
  const auto entry_id = wb->suggestions(id, "s1").tm[0].entry_id;
  auto p = payload("s1", Origin::TM, "das rote Haus", "das Haus");
  p.entry_id = entry_id;
  wb->submit_postedit(id, sid, p);
  wb->submit_postedit(id, sid, payload("s2", Origin::Scratch, "", "zwei Wörter"));
  EXPECT_EQ(wb->export_alignments(id, sid, "s1"), (Alignment{{0, 0}, {2, 1}}));
  EXPECT_EQ(wb->export_alignments(id, sid, "s2"), (Alignment{{0, 0}, {1, 1}}));
  EXPECT_THROW(wb->export_alignments(id, sid, "s9"), NotFound);
}

TEST_F(ServiceTest, ConcurrentSubmitsAreAllKept) {
  auto wb = open();
  const auto id = wb->create_project("demo", "en", "de").id;
  wb->upload_tm(id, kTm);
  std::vector<std::pair<std::string, std::string>> segs;
  for (int i = 0; i < 40; ++i) segs.emplace_back("s" + std::to_string(i), "the house " + std::to_string(i));
  wb->add_segments(id, segs);
  const auto sid = wb->create_session(id, "T1").session_id;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = t; i < 40; i += 4) {
        wb->suggestions(id, "s" + std::to_string(i));
        wb->submit_postedit(id, sid, payload("s" + std::to_string(i), Origin::MT, "das Haus", "das Haus", i, i + 5));
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(wb->session(id, sid).records.size(), 40u);
}

TEST(ParsePayload, Fields) {
  const auto p = parse_payload(nlohmann::json::parse(
      R"({"segmentId":"s1","origin":"none","finalText":"x","startedAt":"2024-01-01T00:00:00Z","finishedAt":"2024-01-01T00:00:01Z"})"));
  EXPECT_EQ(p.origin, Origin::Scratch);
  EXPECT_EQ(p.initial_text, "");
  EXPECT_THROW(parse_payload(nlohmann::json::parse(R"({"segmentId":"s1","origin":"MT","finalText":"x",
      "startedAt":"2024-01-01T00:00:00Z","finishedAt":"2024-01-01T00:00:01Z"})")), InvalidInput);
  EXPECT_THROW(parse_payload(nlohmann::json::parse(R"({"segmentId":"s1","origin":"MT","initialText":"a","finalText":"x",
      "startedAt":"yesterday","finishedAt":"2024-01-01T00:00:01Z"})")), InvalidInput);
}

}  // namespace
}  // namespace tmw
