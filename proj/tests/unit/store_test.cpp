#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"
#include "tmw/store.hpp"

namespace tmw {
namespace {

using nlohmann::json;

std::vector<json> replay(const std::filesystem::path& dir, json* snapshot = nullptr) {
  Store store(dir);
  std::vector<json> events;
  store.recover([&](const json& s) { if (snapshot) *snapshot = s; }, [&](const json& e) { events.push_back(e); });
  return events;
}

TEST(Store, ReplaysAppendedEvents) {
  testing::TempDir dir;
  {
    Store store(dir.path());
    store.recover([](const json&) {}, [](const json&) {});
    EXPECT_EQ(store.append({{"n", 1}}), 1u);
    EXPECT_EQ(store.append({{"n", 2}}), 2u);
  }
  const auto events = replay(dir.path());
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1]["n"], 2);
}

TEST(Store, SnapshotThenTail) {
  testing::TempDir dir;
  {
    Store store(dir.path());
    store.recover([](const json&) {}, [](const json&) {});
    store.append({{"n", 1}});
    store.snapshot({{"total", 1}});
    store.append({{"n", 2}});
    EXPECT_EQ(store.events_since_snapshot(), 1u);
  }
  json snap;
  const auto events = replay(dir.path(), &snap);
  EXPECT_EQ(snap["total"], 1);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0]["n"], 2);
}

TEST(Store, SeqContinuesAfterRestart) {
  testing::TempDir dir;
  {
    Store store(dir.path());
    store.recover([](const json&) {}, [](const json&) {});
    store.append({{"n", 1}});
    store.snapshot({});
  }
  Store store(dir.path());
  store.recover([](const json&) {}, [](const json&) {});
  EXPECT_EQ(store.append({{"n", 2}}), 2u);
}

TEST(Store, TornTailDropped) {
  testing::TempDir dir;
  {
    Store store(dir.path());
    store.recover([](const json&) {}, [](const json&) {});
    store.append({{"n", 1}});
  }
  {
    std::ofstream out(dir.path() / "journal.jsonl", std::ios::app);
    out << "{\"seq\":2,\"event\":{\"n\"";
  }
  {
    Store store(dir.path());
    std::vector<json> events;
    const auto r = store.recover([](const json&) {}, [&](const json& e) { events.push_back(e); });
    EXPECT_TRUE(r.dropped_torn_tail);
    EXPECT_EQ(events.size(), 1u);
    EXPECT_EQ(store.append({{"n", 3}}), 2u);
  }
  EXPECT_EQ(replay(dir.path()).size(), 2u);
}

TEST(Store, CorruptMiddleLineIsAnError) {
  testing::TempDir dir;
  {
    std::ofstream out(dir.path() / "journal.jsonl");
    out << "{\"seq\":1,\"event\":{}}\nnot json\n{\"seq\":2,\"event\":{}}\n";
  }
  Store store(dir.path());
  EXPECT_THROW(store.recover([](const json&) {}, [](const json&) {}), std::runtime_error);
}

TEST(Store, DirectoryIsLocked) {
  testing::TempDir dir;
  Store first(dir.path());
  EXPECT_THROW(Store second(dir.path()), std::runtime_error);
}

}  // namespace
}  // namespace tmw
