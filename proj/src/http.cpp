#include "tmw/http.hpp"

#include <functional>
#include <stdexcept>

#include <httplib.h>

#include "tmw/errors.hpp"

namespace tmw {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message,
                const std::string& id = {}) {
  json body = {{"error", kind}, {"message", message}};
  if (!id.empty()) body["id"] = id;
  send_json(res, status, body);
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("request body is not JSON: ") + e.what());
  }
}

std::string param(const httplib::Request& req, const char* name) { return req.path_params.at(name); }

// Maps domain exceptions onto status codes.
httplib::Server::Handler guarded(std::function<void(const httplib::Request&, httplib::Response&)> fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const NotFound& e) {
      send_error(res, 404, "not_found", e.what(), e.key());
    } catch (const Conflict& e) {
      send_error(res, 409, "conflict", e.what(), e.key());
    } catch (const InvalidInput& e) {
      send_error(res, 400, "invalid_input", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "invalid_input", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

void ingest_route(httplib::Server& s, Workbench& wb, const char* path, Origin origin) {
  s.Post(path, guarded([&wb, origin](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, to_json(wb.ingest(param(req, "id"), origin, req.body)));
         }));
}

}  // namespace

HttpServer::HttpServer(Workbench& wb) : server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;

  s.Get("/projects", guarded([&wb](const httplib::Request&, httplib::Response& res) {
          auto out = json::array();
          for (const auto& p : wb.list_projects()) out.push_back(to_json(p));
          send_json(res, 200, {{"projects", out}});
        }));

  s.Post("/projects", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           send_json(res, 201,
                     to_json(wb.create_project(body.at("name").get<std::string>(),
                                               body.at("sourceLang").get<std::string>(),
                                               body.at("targetLang").get<std::string>())));
         }));

  s.Get("/projects/:id", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, to_json(wb.project(param(req, "id"))));
        }));

  s.Get("/projects/:id/segments", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          auto out = json::array();
          for (const auto& seg : wb.segments(param(req, "id"))) {
            auto tokens = json::array();
            for (const auto& t : seg.tokens) tokens.push_back(t.surface);
            out.push_back({{"id", seg.id}, {"text", seg.raw}, {"tokens", tokens}});
          }
          send_json(res, 200, {{"segments", out}});
        }));

  s.Post("/projects/:id/segments", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           std::vector<std::pair<std::string, std::string>> segments;
           for (const auto& s : body.at("segments")) {
             segments.emplace_back(s.at("id").get<std::string>(), s.at("text").get<std::string>());
           }
           send_json(res, 201, {{"added", wb.add_segments(param(req, "id"), segments)}});
         }));

  s.Post("/projects/:id/tm", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, to_json(wb.upload_tm(param(req, "id"), req.body)));
         }));

  ingest_route(s, wb, "/projects/:id/mt", Origin::MT);
  ingest_route(s, wb, "/projects/:id/ape", Origin::APE);

  s.Get("/projects/:id/segments/:sid/suggestions", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          const std::string sid = param(req, "sid");
          try {
            send_json(res, 200, wb.suggestions_json(param(req, "id"), sid));
          } catch (const NotFound& e) {
            json body = {{"error", "not_found"}, {"message", e.what()}, {"id", e.key()}};
            if (e.key() == sid) body["segmentId"] = sid;
            send_json(res, 404, body);
          }
        }));

  s.Get("/projects/:id/sessions", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          auto out = json::array();
          for (const auto& info : wb.sessions(param(req, "id"))) out.push_back(to_json(info));
          send_json(res, 200, {{"sessions", out}});
        }));

  s.Post("/projects/:id/sessions", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
           const json body = parse_body(req);
           std::optional<std::string> session_id;
           if (const auto it = body.find("sessionId"); it != body.end() && !it->is_null()) {
             session_id = it->get<std::string>();
           }
           send_json(res, 201,
                     to_json(wb.create_session(param(req, "id"), body.at("translatorId").get<std::string>(),
                                               session_id)));
         }));

  s.Get("/projects/:id/sessions/:sid/records", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          auto out = json::array();
          for (const auto& r : wb.session(param(req, "id"), param(req, "sid")).records) out.push_back(to_json(r));
          send_json(res, 200, {{"records", out}});
        }));

  s.Post("/projects/:id/sessions/:sid/records", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
           const PostEditPayload payload = parse_payload(parse_body(req));
           send_json(res, 201, to_json(wb.submit_postedit(param(req, "id"), param(req, "sid"), payload)));
         }));

  s.Get("/projects/:id/sessions/:sid/log.xml", guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          res.set_content(wb.download_log(param(req, "id"), param(req, "sid")), "application/xml; charset=utf-8");
        }));

  s.Get("/projects/:id/sessions/:sid/records/:seg/alignment",
        guarded([&wb](const httplib::Request& req, httplib::Response& res) {
          const std::string seg = param(req, "seg");
          send_json(res, 200,
                    {{"segmentId", seg},
                     {"alignment", to_json(wb.export_alignments(param(req, "id"), param(req, "sid"), seg))}});
        }));
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound <= 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace tmw
