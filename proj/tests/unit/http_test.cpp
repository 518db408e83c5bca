#include <gtest/gtest.h>

#include <thread>

#include <httplib.h>

#include "support.hpp"
#include "tmw/http.hpp"

namespace tmw {
namespace {

using nlohmann::json;

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    workbench = std::make_unique<Workbench>(dir.path());
    server = std::make_unique<HttpServer>(*workbench);
    port = server->bind("127.0.0.1", 0);
    thread = std::thread([this] { server->run(); });
    server->wait_until_ready();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
  }
  void TearDown() override {
    server->stop();
    thread.join();
  }

  json post_json(const std::string& path, const json& body, int expected) {
    auto res = client->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected) << res->body;
    return json::parse(res->body);
  }
  json get_json(const std::string& path, int expected) {
    auto res = client->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected) << res->body;
    return json::parse(res->body);
  }

  testing::TempDir dir;
  std::unique_ptr<Workbench> workbench;
  std::unique_ptr<HttpServer> server;
  std::unique_ptr<httplib::Client> client;
  std::thread thread;
  int port = 0;
};

TEST_F(HttpTest, ProjectLifecycle) {
  const auto p = post_json("/projects", {{"name", "demo"}, {"sourceLang", "en"}, {"targetLang", "de"}}, 201);
  const std::string id = p["id"];
  post_json("/projects", {{"name", "demo"}, {"sourceLang", "en"}, {"targetLang", "de"}}, 409);
  post_json("/projects", {{"sourceLang", "en"}}, 400);
  EXPECT_EQ(get_json("/projects", 200)["projects"].size(), 1u);
  EXPECT_EQ(get_json("/projects/" + id, 200)["name"], "demo");
  EXPECT_EQ(get_json("/projects/zzz", 404)["error"], "not_found");

  auto tm = client->Post("/projects/" + id + "/tm", "the red house\tdas rote Haus\n", "text/plain");
  ASSERT_TRUE(tm);
  EXPECT_EQ(tm->status, 200);
  EXPECT_EQ(json::parse(tm->body)["added"], 1);

  post_json("/projects/" + id + "/segments", {{"segments", {{{"id", "s1"}, {"text", "the red house"}}}}}, 201);
  auto mt = client->Post("/projects/" + id + "/mt", "s1\tdas rote Haus\n", "text/plain");
  ASSERT_TRUE(mt);
  EXPECT_EQ(json::parse(mt->body)["stored"], 1);

  const auto s = get_json("/projects/" + id + "/segments/s1/suggestions", 200);
  EXPECT_EQ(s["segmentId"], "s1");
  EXPECT_EQ(s["tm"][0]["sim"], 1.0);
  EXPECT_EQ(s["mt"], "das rote Haus");
  EXPECT_TRUE(s["ape"].is_null());

  const auto missing = get_json("/projects/" + id + "/segments/nope/suggestions", 404);
  EXPECT_EQ(missing["segmentId"], "nope");
}

TEST_F(HttpTest, SessionsAndLog) {
  const std::string id = post_json("/projects", {{"name", "demo"}, {"sourceLang", "en"}, {"targetLang", "de"}}, 201)["id"];
  post_json("/projects/" + id + "/segments", {{"segments", {{{"id", "s1"}, {"text", "a garden"}}, {{"id", "s2"}, {"text", "a house"}}}}}, 201);
  const std::string sid = post_json("/projects/" + id + "/sessions", {{"translatorId", "T1"}}, 201)["sessionId"];

  const json record = {{"segmentId", "s1"},       {"origin", "MT"},
                       {"initialText", "Garten"}, {"finalText", "ein Garten"},
                       {"startedAt", "2024-05-01T10:00:00Z"}, {"finishedAt", "2024-05-01T10:00:04.5Z"}};
  const auto r = post_json("/projects/" + id + "/sessions/" + sid + "/records", record, 201);
  EXPECT_EQ(r["insertions"], 1);
  EXPECT_EQ(r["editTimeMs"], 4500);
  post_json("/projects/" + id + "/sessions/" + sid + "/records", record, 409);

  json reversed = record;
  reversed["segmentId"] = "s2";
  reversed["startedAt"] = "2024-05-01T11:00:00Z";
  post_json("/projects/" + id + "/sessions/" + sid + "/records", reversed, 400);
  auto bad = client->Post("/projects/" + id + "/sessions/" + sid + "/records", "{not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  EXPECT_EQ(get_json("/projects/" + id + "/sessions/" + sid + "/records", 200)["records"].size(), 1u);

  auto log = client->Get("/projects/" + id + "/sessions/" + sid + "/log.xml");
  ASSERT_TRUE(log);
  EXPECT_EQ(log->status, 200);
  EXPECT_NE(log->get_header_value("Content-Type").find("application/xml"), std::string::npos);
  EXPECT_EQ(import_xml(log->body).records.size(), 1u);

  const auto a = get_json("/projects/" + id + "/sessions/" + sid + "/records/s1/alignment", 200);
  EXPECT_EQ(a["alignment"], json::parse("[[0,0],[1,1]]"));
  get_json("/projects/" + id + "/sessions/nope/log.xml", 404);
}

}  // namespace
}  // namespace tmw
