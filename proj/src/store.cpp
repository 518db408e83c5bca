#include "tmw/store.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace tmw {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

void write_all(int fd, std::string_view data, const std::string& what) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(what);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) fail("open " + dir.string());
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Store::Store(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  lock_fd_ = ::open((dir_ / "LOCK").c_str(), O_RDWR | O_CREAT, 0644);
  if (lock_fd_ < 0) fail("open lock file in " + dir_.string());
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    throw std::runtime_error("data directory " + dir_.string() + " is in use by another process");
  }
}

Store::~Store() {
  if (journal_fd_ >= 0) ::close(journal_fd_);
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

void Store::open_journal(bool truncate) {
  if (journal_fd_ >= 0) ::close(journal_fd_);
  int flags = O_WRONLY | O_CREAT | O_APPEND;
  if (truncate) flags |= O_TRUNC;
  journal_fd_ = ::open((dir_ / "journal.jsonl").c_str(), flags, 0644);
  if (journal_fd_ < 0) fail("open journal in " + dir_.string());
}

Store::Recovered Store::recover(const std::function<void(const nlohmann::json&)>& load,
                               const std::function<void(const nlohmann::json&)>& apply) {
  std::lock_guard lock(mu_);
  Recovered out;

  const fs::path snap = dir_ / "snapshot.json";
  if (fs::exists(snap)) {
    auto doc = nlohmann::json::parse(read_file(snap));
    snapshot_seq_ = doc.at("seq").get<std::uint64_t>();
    seq_ = snapshot_seq_;
    load(doc.at("state"));
    out.had_snapshot = true;
  }

  const fs::path journal = dir_ / "journal.jsonl";
  std::size_t keep_bytes = 0;
  bool rewrite = false;
  if (fs::exists(journal)) {
    const std::string text = read_file(journal);
    std::size_t pos = 0;
    std::size_t lineno = 0;
    while (pos < text.size()) {
      const std::size_t nl = text.find('\n', pos);
      ++lineno;
      if (nl == std::string::npos) {
        // No newline: the append never completed.
        out.dropped_torn_tail = true;
        rewrite = true;
        break;
      }
      const std::string_view line(text.data() + pos, nl - pos);
      nlohmann::json entry;
      try {
        entry = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("journal line " + std::to_string(lineno) + " is corrupt: " + e.what());
      }
      const auto seq = entry.at("seq").get<std::uint64_t>();
      if (seq > seq_) {
        if (seq != seq_ + 1) {
          throw std::runtime_error("journal line " + std::to_string(lineno) + " skips from seq " +
                                   std::to_string(seq_) + " to " + std::to_string(seq));
        }
        apply(entry.at("event"));
        seq_ = seq;
        ++out.replayed;
      }
      pos = nl + 1;
      keep_bytes = pos;
    }
  }

  open_journal(false);
  if (rewrite && ::ftruncate(journal_fd_, static_cast<off_t>(keep_bytes)) != 0) fail("truncate journal");
  return out;
}

std::uint64_t Store::append(const nlohmann::json& event) {
  std::lock_guard lock(mu_);
  if (journal_fd_ < 0) open_journal(false);
  const std::uint64_t seq = seq_ + 1;
  std::string line = nlohmann::json{{"seq", seq}, {"event", event}}.dump();
  line.push_back('\n');
  const off_t before = ::lseek(journal_fd_, 0, SEEK_END);
  try {
    write_all(journal_fd_, line, "append to journal");
    if (::fdatasync(journal_fd_) != 0) fail("sync journal");
  } catch (...) {
    // Do not leave half a line for the next append to build on.
    if (before >= 0 && ::ftruncate(journal_fd_, before) != 0) {
      // nothing better to do; the original error is more useful
    }
    throw;
  }
  seq_ = seq;
  return seq;
}

void Store::snapshot(const nlohmann::json& state) {
  std::lock_guard lock(mu_);
  const fs::path tmp = dir_ / "snapshot.json.tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) fail("open " + tmp.string());
  try {
    write_all(fd, nlohmann::json{{"seq", seq_}, {"state", state}}.dump(), "write snapshot");
    if (::fsync(fd) != 0) fail("sync snapshot");
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  fs::rename(tmp, dir_ / "snapshot.json");
  fsync_dir(dir_);
  snapshot_seq_ = seq_;
  // Events up to seq_ are now covered; a crash before this truncation just
  // leaves events that recover() skips.
  open_journal(true);
  if (::fsync(journal_fd_) != 0) fail("sync journal");
}

std::uint64_t Store::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

std::uint64_t Store::events_since_snapshot() const {
  std::lock_guard lock(mu_);
  return seq_ - snapshot_seq_;
}

}  // namespace tmw
