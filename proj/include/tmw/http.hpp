#pragma once

#include <memory>
#include <string>

#include "tmw/service.hpp"

namespace httplib {
class Server;
}

namespace tmw {

// JSON API over a Workbench:
//   GET  /projects                                   POST /projects
//   GET  /projects/{id}
//   GET  /projects/{id}/segments                     POST /projects/{id}/segments
//   POST /projects/{id}/tm        (TM file body)
//   POST /projects/{id}/mt        POST /projects/{id}/ape   (table body)
//   GET  /projects/{id}/segments/{sid}/suggestions
//   GET  /projects/{id}/sessions                     POST /projects/{id}/sessions
//   GET  /projects/{id}/sessions/{sid}/records       POST /projects/{id}/sessions/{sid}/records
//   GET  /projects/{id}/sessions/{sid}/log.xml
//   GET  /projects/{id}/sessions/{sid}/records/{segment}/alignment
// Errors are {"error": kind, "message": ..., "id": ...} with 400 / 404 / 409.
class HttpServer {
 public:
  explicit HttpServer(Workbench& workbench);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tmw
