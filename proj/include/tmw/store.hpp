#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>

#include <json.hpp>

namespace tmw {

// Append-only event journal plus a snapshot, both inside one data directory:
//   journal.jsonl   one {"seq": n, "event": {...}} object per line
//   snapshot.json   {"seq": n, "state": {...}}
// Recovery loads the snapshot and replays journal events with a larger seq.
// A torn last line (crash mid-append) is dropped; damage anywhere else is an
// error. The directory is locked for the lifetime of the object.
class Store {
 public:
  explicit Store(std::filesystem::path dir);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  struct Recovered {
    bool had_snapshot = false;
    std::uint64_t replayed = 0;
    bool dropped_torn_tail = false;
  };

  // Hands the snapshot state (if any) to `load`, then each later journal
  // event to `apply`, in order.
  Recovered recover(const std::function<void(const nlohmann::json&)>& load,
                    const std::function<void(const nlohmann::json&)>& apply);

  // Durable (fsync'd) before returning. Returns the event's seq.
  std::uint64_t append(const nlohmann::json& event);

  // Writes the state atomically (temp file + rename), then empties the journal.
  void snapshot(const nlohmann::json& state);

  std::uint64_t last_seq() const;
  std::uint64_t events_since_snapshot() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  void open_journal(bool truncate);

  std::filesystem::path dir_;
  int lock_fd_ = -1;
  int journal_fd_ = -1;
  std::uint64_t seq_ = 0;
  std::uint64_t snapshot_seq_ = 0;
  mutable std::mutex mu_;
};

}  // namespace tmw
