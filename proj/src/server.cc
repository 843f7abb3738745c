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

#include "repro/server.h"

#include "repro/errors.h"
#include "repro/hashing.h"
#include "repro/session.h"

namespace repro {

namespace {

std::filesystem::path Resolve(std::filesystem::path const& base,
                              std::string const& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

Record ToRecord(ServerConfig const& config) {
  Record manifests = Record::array();
  for (auto const& m : config.manifests) manifests.push_back(m.string());
  auto const& key = config.master_key;
  return Record{
      {"halt_on_mismatch", config.halt_on_mismatch},
      {"listen_address", config.listen_address},
      {"manifests", std::move(manifests)},
      {"master_key",
       ToHex(std::span<std::uint8_t const>(
           reinterpret_cast<std::uint8_t const*>(key.data()), key.size()))},
      {"metrics_journal", config.metrics_journal.string()},
      {"seed_journal", config.seed_journal.string()},
  };
}

ServerConfig ServerConfigFromRecord(Record const& record,
                                    std::filesystem::path const& base_dir) {
  ServerConfig c;
  c.listen_address = RequireString(record, "listen_address");
  c.seed_journal = Resolve(base_dir, RequireString(record, "seed_journal"));
  c.metrics_journal =
      Resolve(base_dir, RequireString(record, "metrics_journal"));
  for (auto const& m : RequireArray(record, "manifests")) {
    if (!m.is_string()) {
      throw Error(ErrorCode::kInvalidRecord, "manifests must hold paths");
    }
    c.manifests.push_back(Resolve(base_dir, m.get<std::string>()));
  }
  if (record.contains("halt_on_mismatch")) {
    c.halt_on_mismatch = RequireBool(record, "halt_on_mismatch");
  }
  if (record.contains("master_key")) {
    auto bytes = BytesFromHex(RequireString(record, "master_key"));
    if (!bytes) {
      throw Error(ErrorCode::kInvalidRecord, "master_key must be hex");
    }
    c.master_key = std::move(*bytes);
  }
  return c;
}

ServerConfig LoadServerConfig(std::filesystem::path const& path) {
  auto records = ReadRecordsFile(path);
  if (records.size() != 1) {
    throw Error(ErrorCode::kInvalidRecord,
                path.string() + ": expected exactly one config record");
  }
  return ServerConfigFromRecord(records.front(), path.parent_path());
}

Server::Server(ServerConfig config, std::ostream* log)
    : config_(std::move(config)), log_(log) {
  std::vector<ChallengeManifest> manifests;
  for (auto const& p : config_.manifests) manifests.push_back(LoadManifest(p));
  repository_ = std::make_unique<Repository>(
      config_.seed_journal, config_.metrics_journal, std::move(manifests),
      config_.master_key);
  repository_->set_seed_mismatch_listener(
      [this](std::string_view key) { Halt(key); });
  auto requested = net::ParseEndpoint(config_.listen_address);
  listener_ = net::Listen(requested);
  endpoint_ = net::Endpoint{requested.host, net::LocalPort(listener_)};
}

Server::~Server() { Stop(); }

net::Endpoint Server::endpoint() const { return endpoint_; }

void Server::Log(std::string const& line) {
  if (log_ == nullptr) return;
  std::lock_guard<std::mutex> lk(log_mu_);
  *log_ << "[repro-server] " << line << std::endl;
}

void Server::Halt(std::string_view key) {
  Log("seed mismatch for " + std::string(key) + "; session terminated");
  if (config_.halt_on_mismatch) halt_pending_ = true;
}

void Server::Serve() {
  Log("listening on " + endpoint_.ToString());
  while (!stopping_.load()) {
    auto socket = net::Accept(listener_);
    if (!socket.valid() || stopping_.load() || halted_.load()) break;
    ReapFinished(false);
    std::lock_guard<std::mutex> lk(conn_mu_);
    auto& conn = connections_.emplace_back();
    conn.socket = std::move(socket);
    conn.thread = std::thread([this, &conn] { Handle(conn); });
  }
  ReapFinished(true);
  Log(halted_.load() ? "halted" : "stopped");
}

void Server::Start() {
  serve_thread_ = std::thread([this] { Serve(); });
}

void Server::Stop() {
  stopping_ = true;
  listener_.Shutdown();
  if (serve_thread_.joinable()) serve_thread_.join();
  ReapFinished(true);
}

void Server::ReapFinished(bool all) {
  std::lock_guard<std::mutex> lk(conn_mu_);
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (all || it->done.load()) {
      it->socket.Shutdown();
      if (it->thread.joinable()) it->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void Server::Handle(Connection& conn) {
  SessionState state;
  try {
    while (true) {
      std::optional<std::string> payload;
      try {
        payload = net::ReadFramePayload(conn.socket);
      } catch (Error const& e) {
        // The stream cannot be resynchronised after a framing error.
        if (e.code() == ErrorCode::kFrameTooLarge ||
            e.code() == ErrorCode::kProtocolError) {
          net::WriteFrame(conn.socket,
                          wire::EncodePayload(wire::ErrorReply{
                              wire::codes::kProtocolError, e.what()}));
        }
        break;
      }
      if (!payload) break;

      wire::Message response;
      try {
        auto step = StepSession(state, wire::DecodePayload(*payload),
                                *repository_);
        state = step.state;
        response = std::move(step.response);
      } catch (Error const& e) {
        response = wire::ErrorReply{wire::codes::kProtocolError, e.what()};
      }
      net::WriteFrame(conn.socket, wire::EncodePayload(response));
      if (state.phase == SessionPhase::kTerminated) break;
    }
  } catch (std::exception const& e) {
    Log(std::string("connection error: ") + e.what());
  }
  if (halt_pending_.load() && !halted_.exchange(true)) {
    Log("halt_on_mismatch set; refusing further sessions");
    listener_.Shutdown();
  }
  conn.socket.Shutdown();
  conn.done = true;
}

}  // namespace repro
