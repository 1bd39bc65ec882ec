#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

namespace tdenv {

inline constexpr int kProtocolVersion = 1;

/// Monotonic seconds; injectable so human pacing can be tested.
using WallClock = std::function<double()>;
WallClock steady_wall_clock();

struct ServerOptions {
  std::filesystem::path config_dir;
  WallClock clock;  // defaults to the steady clock
};


/// Line-delimited JSON request/reply service. Requests:
///   {"schema_version": 1, "id": .., "session_id": .., "command": .., "payload": {..}}
/// Replies echo id and session_id and carry "status" ("ok" or "error"), a
/// payload, and on error {"code", "message"}.
///
/// Thread-safe: any number of connections may call handle_line concurrently.
/// Commands for one session are serialised by that session's mutex.
class ProtocolServer {
 public:
  explicit ProtocolServer(ServerOptions options);
  ~ProtocolServer();

  std::string handle_line(const std::string& line);

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reads requests from `in` until EOF, writing one reply line per request.
void serve_stream(ProtocolServer& server, std::istream& in, std::ostream& out);

/// Listens on 127.0.0.1:port with one thread per connection. Calls `ready`
/// with the bound port (useful with port 0). Returns when `stop` becomes true.
void serve_tcp(ProtocolServer& server, int port, const std::atomic<bool>& stop,
               const std::function<void(int)>& ready = {});

}  // namespace tdenv
