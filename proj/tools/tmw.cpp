// tmw: command-line front end for the post-editing workbench.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include <CLI11.hpp>

#include "tmw/analytics.hpp"
#include "tmw/errors.hpp"
#include "tmw/http.hpp"
#include "tmw/service.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
}

void emit(const std::string& out_path, const json& j) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_file(out_path, j.dump(2) + "\n");
  }
}

void print_warnings(const std::vector<tmw::ParseWarning>& warnings) {
  for (const auto& w : warnings) std::cerr << "line " << w.line << ": " << w.message << "\n";
}

// Accepts a project id or a project name.
std::string resolve_project(const tmw::Workbench& wb, const std::string& key) {
  for (const auto& p : wb.list_projects()) {
    if (p.id == key) return p.id;
  }
  for (const auto& p : wb.list_projects()) {
    if (p.name == key) return p.id;
  }
  throw tmw::NotFound("no project with id or name '" + key + "'", key);
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw tmw::InvalidInput("--listen expects HOST:PORT, got '" + listen + "'");
  const std::string host = listen.substr(0, colon);
  const int port = std::stoi(listen.substr(colon + 1));
  if (port < 0 || port > 65535) throw tmw::InvalidInput("port out of range in '" + listen + "'");
  return {host.empty() ? "0.0.0.0" : host, port};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translation-memory post-editing workbench"};
  app.require_subcommand(1);

  std::string data_dir = "tmw-data";
  const auto add_data = [&data_dir](CLI::App* cmd) {
    cmd->add_option("--data", data_dir, "Data directory")->envname("TMW_DATA");
  };

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  add_data(serve);
  std::string listen = "127.0.0.1:8080";
  tmw::ServiceConfig config;
  serve->add_option("--listen", listen, "HOST:PORT")->envname("TMW_LISTEN");
  serve->add_option("--k", config.retrieval.k, "IR candidates per query")->envname("TMW_K");
  serve->add_option("--n", config.retrieval.n, "TM suggestions returned")->envname("TMW_N");
  serve->add_option("--threshold", config.retrieval.min_similarity, "Minimum similarity for a TM suggestion")
      ->envname("TMW_THRESHOLD")
      ->check(CLI::Range(0.0, 1.0));
  serve->add_option("--snapshot-every", config.snapshot_every, "Journal events between snapshots (0: never)")
      ->envname("TMW_SNAPSHOT_EVERY");

  // create-project
  auto* create = app.add_subcommand("create-project", "Create an empty project");
  add_data(create);
  std::string name, source_lang, target_lang;
  create->add_option("--name", name)->required();
  create->add_option("--source-lang", source_lang)->required();
  create->add_option("--target-lang", target_lang)->required();

  // add-segments
  std::string project, file;
  auto* add_segments = app.add_subcommand("add-segments", "Add source segments (segmentId TAB text per line)");
  add_data(add_segments);
  add_segments->add_option("--project", project, "Project id or name")->required();
  add_segments->add_option("--file", file)->required()->check(CLI::ExistingFile);

  // import-tm
  auto* import_tm = app.add_subcommand("import-tm", "Upload a tab-separated TM file");
  add_data(import_tm);
  import_tm->add_option("--project", project, "Project id or name")->required();
  import_tm->add_option("--file", file)->required()->check(CLI::ExistingFile);

  // ingest
  std::string origin_name;
  auto* ingest = app.add_subcommand("ingest", "Load third-party MT or APE output (segmentId TAB text per line)");
  add_data(ingest);
  ingest->add_option("--origin", origin_name)->required()->check(CLI::IsMember({"mt", "ape"}, CLI::ignore_case));
  ingest->add_option("--project", project, "Project id or name")->required();
  ingest->add_option("--file", file)->required()->check(CLI::ExistingFile);

  // suggest
  std::string segment;
  auto* suggest = app.add_subcommand("suggest", "Print the suggestion set of one segment as JSON");
  add_data(suggest);
  suggest->add_option("--project", project, "Project id or name")->required();
  suggest->add_option("--segment", segment)->required();

  // log
  std::string session, out_path;
  auto* log = app.add_subcommand("log", "Write a session's XML log");
  add_data(log);
  log->add_option("--project", project, "Project id or name")->required();
  log->add_option("--session", session)->required();
  log->add_option("--out", out_path, "Output file (default stdout)");

  // analyze
  std::vector<std::string> logs;
  std::string report, variable = "selection", csv_path;
  auto* analyze = app.add_subcommand("analyze", "Statistics over one or more XML session logs");
  analyze->add_option("--log", logs, "Session log (repeatable)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--report", report)
      ->required()
      ->check(CLI::IsMember({"selection", "kappa", "pearson", "edits", "series"}));
  analyze->add_option("--variable", variable, "kappa variable")->check(CLI::IsMember({"selection", "time", "edits"}));
  analyze->add_option("--out", out_path, "Report file (default stdout)");
  analyze->add_option("--csv", csv_path, "series: CSV path (default: --out with .csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      std::vector<tmw::EditLogRecord> records;
      for (const auto& path : logs) {
        tmw::Session s;
        try {
          s = tmw::import_xml(read_file(path));
        } catch (const tmw::LogFormatError& e) {
          throw tmw::InvalidInput(path + ": " + e.what());
        }
        records.insert(records.end(), s.records.begin(), s.records.end());
      }
      if (report == "selection") {
        emit(out_path, tmw::to_json(tmw::selection_rates(records)));
      } else if (report == "kappa") {
        emit(out_path, tmw::to_json(tmw::agreement_report(records, *tmw::parse_agreement_variable(variable))));
      } else if (report == "pearson") {
        emit(out_path, tmw::pearson_report(records));
      } else if (report == "edits") {
        emit(out_path, tmw::to_json(tmw::edit_type_frequencies(records)));
      } else {
        const auto series = tmw::time_edits_series(records);
        emit(out_path, tmw::series_to_json(series));
        std::string csv = csv_path;
        if (csv.empty() && !out_path.empty() && out_path != "-") {
          const auto dot = out_path.rfind('.');
          csv = (dot == std::string::npos ? out_path : out_path.substr(0, dot)) + ".csv";
        }
        if (csv.empty()) {
          std::cout << tmw::series_to_csv(series);
        } else {
          write_file(csv, tmw::series_to_csv(series));
        }
      }
      return 0;
    }

    if (*serve) {
      // Signals are taken by a dedicated thread so shutdown runs normal code.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      tmw::Workbench wb(data_dir, config);
      tmw::HttpServer server(wb);
      const auto [host, port] = split_listen(listen);
      const int bound = server.bind(host, port);
      std::cerr << "listening on " << host << ":" << bound << " (data " << data_dir << ")\n";
      std::thread waiter([&server, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
      });
      server.run();
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      wb.snapshot();
      std::cerr << "stopped\n";
      return 0;
    }

    tmw::Workbench wb(data_dir);
    if (*create) {
      std::cout << tmw::to_json(wb.create_project(name, source_lang, target_lang)).dump(2) << "\n";
    } else if (*add_segments) {
      const auto table = tmw::parse_external_table(read_file(file));
      print_warnings(table.warnings);
      std::vector<std::pair<std::string, std::string>> rows;
      for (const auto& r : table.rows) rows.emplace_back(r.segment_id, r.translation);
      std::cout << json{{"added", wb.add_segments(resolve_project(wb, project), rows)}}.dump(2) << "\n";
    } else if (*import_tm) {
      const auto result = wb.upload_tm(resolve_project(wb, project), read_file(file));
      print_warnings(result.warnings);
      std::cout << tmw::to_json(result).dump(2) << "\n";
    } else if (*ingest) {
      const auto result =
          wb.ingest(resolve_project(wb, project), *tmw::parse_origin(origin_name), read_file(file));
      print_warnings(result.warnings);
      std::cout << tmw::to_json(result).dump(2) << "\n";
    } else if (*suggest) {
      std::cout << wb.suggestions_json(resolve_project(wb, project), segment).dump(2) << "\n";
    } else if (*log) {
      const std::string xml = wb.download_log(resolve_project(wb, project), session);
      if (out_path.empty() || out_path == "-") {
        std::cout << xml;
      } else {
        write_file(out_path, xml);
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
