// Copyright 2026 The repro-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPRO_SERVER_H_
#define REPRO_SERVER_H_

#include <atomic>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <iostream>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "repro/canonical_record.h"
#include "repro/net.h"
#include "repro/repository.h"

namespace repro {

struct ServerConfig {
  std::string listen_address = "127.0.0.1:7070";
  std::filesystem::path seed_journal;
  std::filesystem::path metrics_journal;
  std::vector<std::filesystem::path> manifests;
  /// Stop the whole server (not just the session) on a seed mismatch.
  bool halt_on_mismatch = false;
  /// Raw bytes; hex-encoded in the config file. Empty by default.
  std::string master_key;
};

Record ToRecord(ServerConfig const& config);
/// Relative paths are resolved against `base_dir`.
ServerConfig ServerConfigFromRecord(Record const& record,
                                    std::filesystem::path const& base_dir = {});
ServerConfig LoadServerConfig(std::filesystem::path const& path);

/// TCP front end: one thread per connection, each running the session
/// machine against a shared Repository.
class Server {
 public:
  /// Loads manifests, opens both journals and binds the listener; any
  /// failure throws before the server accepts anything. `log` may be null.
  explicit Server(ServerConfig config, std::ostream* log = &std::clog);
  ~Server();

  Server(Server const&) = delete;
  Server& operator=(Server const&) = delete;

  net::Endpoint endpoint() const;

  /// Accept loop; returns after Stop() or a halt.
  void Serve();
  /// Runs Serve() on a background thread.
  void Start();
  /// Stops accepting, closes open sessions and waits for them.
  void Stop();

  bool halted() const { return halted_.load(); }
  Repository& repository() { return *repository_; }

 private:
  struct Connection {
    net::Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void Handle(Connection& conn);
  void Halt(std::string_view key);
  void ReapFinished(bool all);
  void Log(std::string const& line);

  ServerConfig config_;
  std::ostream* log_;
  std::mutex log_mu_;
  std::unique_ptr<Repository> repository_;
  net::Socket listener_;
  net::Endpoint endpoint_;

  std::atomic<bool> stopping_{false};
  std::atomic<bool> halt_pending_{false};
  std::atomic<bool> halted_{false};
  std::mutex conn_mu_;
  std::list<Connection> connections_;
  std::thread serve_thread_;
};

}  // namespace repro

#endif  // REPRO_SERVER_H_
