#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>
#include <vector>

#include "tdenv/errors.hpp"
#include "tdenv/protocol.hpp"

namespace tdenv {

void serve_stream(ProtocolServer& server, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << server.handle_line(line) << '\n';
    out.flush();
  }
}

namespace {

constexpr int kPollMillis = 100;

class Fd {
 public:
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void serve_connection(ProtocolServer& server, int raw_fd, const std::atomic<bool>& stop) {
  Fd fd(raw_fd);
  std::string buffer;
  char chunk[4096];
  while (!stop.load()) {
    pollfd p{fd.get(), POLLIN, 0};
    const int ready = ::poll(&p, 1, kPollMillis);
    if (ready < 0 && errno == EINTR) continue;
    if (ready < 0) return;
    if (ready == 0) continue;
    const ssize_t n = ::recv(fd.get(), chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!send_all(fd.get(), server.handle_line(line) + "\n")) return;
    }
  }
}

}  // namespace

void serve_tcp(ProtocolServer& server, int port, const std::atomic<bool>& stop,
               const std::function<void(int)>& ready) {
  Fd listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (listener.get() < 0) throw EnvError(std::string("socket: ") + std::strerror(errno));
  const int yes = 1;
  ::setsockopt(listener.get(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
    throw EnvError("bind to port " + std::to_string(port) + ": " + std::strerror(errno));
  if (::listen(listener.get(), 16) < 0) throw EnvError(std::string("listen: ") + std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len);
  if (ready) ready(ntohs(addr.sin_port));

  std::vector<std::thread> workers;
  while (!stop.load()) {
    pollfd p{listener.get(), POLLIN, 0};
    const int r = ::poll(&p, 1, kPollMillis);
    if (r <= 0) continue;
    const int client = ::accept(listener.get(), nullptr, nullptr);
    if (client < 0) continue;
    workers.emplace_back(serve_connection, std::ref(server), client, std::cref(stop));
  }
  for (auto& w : workers) w.join();
}

}  // namespace tdenv
