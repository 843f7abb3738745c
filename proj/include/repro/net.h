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

#ifndef REPRO_NET_H_
#define REPRO_NET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "repro/wire_protocol.h"

namespace repro::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string ToString() const { return host + ":" + std::to_string(port); }
};

/// Parses "host:port". Throws Error(kInvalidArgument).
Endpoint ParseEndpoint(std::string_view text);

/// Owning file descriptor for a TCP socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept;
  Socket& operator=(Socket&& other) noexcept;
  Socket(Socket const&) = delete;
  Socket& operator=(Socket const&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  /// Wakes up any thread blocked on this socket; the descriptor stays owned.
  void Shutdown();

  void WriteAll(std::string_view bytes);
  /// False on EOF before the first byte; throws on EOF mid-buffer.
  bool ReadExact(char* out, std::size_t n);

 private:
  int fd_ = -1;
};

/// Binds and listens. Port 0 picks an ephemeral port.
Socket Listen(Endpoint const& endpoint, int backlog = 64);
std::uint16_t LocalPort(Socket const& listener);
/// Blocks until a connection arrives; an invalid Socket once the listener
/// is shut down.
Socket Accept(Socket const& listener);
/// Throws Error(kNetworkError) when the endpoint is unreachable.
Socket Connect(Endpoint const& endpoint);

/// Reads one frame's payload; nullopt on a clean EOF between frames.
/// Throws Error(kFrameTooLarge) before reading an oversize payload and
/// Error(kProtocolError) on EOF inside a frame.
std::optional<std::string> ReadFramePayload(Socket& socket);
void WriteFrame(Socket& socket, std::string_view payload);

}  // namespace repro::net

#endif  // REPRO_NET_H_
