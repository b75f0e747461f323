#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>

namespace tweetfunnel {

/// A mock tweet stream: listens on 127.0.0.1 and writes `payload` to each
/// accepted client, then closes that connection. Serves `max_clients` clients
/// (0 = until destroyed).
class LoopbackServer {
 public:
  explicit LoopbackServer(std::string payload, std::uint16_t port = 0, unsigned max_clients = 1);
  ~LoopbackServer();
  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  /// Blocks until the server has served its clients (never, if unlimited).
  void wait();

 private:
  void serve();

  std::string payload_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  unsigned max_clients_;
  std::atomic<bool> stopping_{false};
  std::thread worker_;
};

/// Connects to a loopback stream; returns a socket descriptor. Throws
/// Error(SourceUnreadable) on failure.
int connect_loopback(const std::string& host, std::uint16_t port);

}  // namespace tweetfunnel
