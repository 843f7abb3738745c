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

#include "repro/net.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <memory>

#include "repro/canonical_record.h"
#include "repro/errors.h"

namespace repro::net {

namespace {

[[noreturn]] void ThrowErrno(std::string const& what) {
  throw Error(ErrorCode::kNetworkError, what + ": " + std::strerror(errno));
}

struct AddrInfoDeleter {
  void operator()(addrinfo* p) const { freeaddrinfo(p); }
};

std::unique_ptr<addrinfo, AddrInfoDeleter> Resolve(Endpoint const& ep,
                                                   bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  auto const port = std::to_string(ep.port);
  int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(),
                       port.c_str(), &hints, &res);
  if (rc != 0) {
    throw Error(ErrorCode::kNetworkError,
                "cannot resolve " + ep.ToString() + ": " + gai_strerror(rc));
  }
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(res);
}

}  // namespace

Endpoint ParseEndpoint(std::string_view text) {
  auto const colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected host:port, got '" + std::string(text) + "'");
  }
  auto port = ParseU64(text.substr(colon + 1));
  if (!port || *port > 65535) {
    throw Error(ErrorCode::kInvalidArgument,
                "bad port in '" + std::string(text) + "'");
  }
  auto host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  return Endpoint{std::string(host), static_cast<std::uint16_t>(*port)};
}

Socket::~Socket() {
  if (fd_ >= 0) ::close(fd_);
}

Socket::Socket(Socket&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

void Socket::Shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

void Socket::WriteAll(std::string_view bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    auto n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

bool Socket::ReadExact(char* out, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    auto r = ::recv(fd_, out + got, n - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("recv");
    }
    if (r == 0) {
      if (got == 0) return false;
      throw Error(ErrorCode::kProtocolError, "connection closed mid-frame");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

Socket Listen(Endpoint const& endpoint, int backlog) {
  auto res = Resolve(endpoint, true);
  int last_errno = 0;
  for (auto* ai = res.get(); ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                      ai->ai_protocol));
    if (!s.valid()) {
      last_errno = errno;
      continue;
    }
    int one = 1;
    ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0 &&
        ::listen(s.fd(), backlog) == 0) {
      return s;
    }
    last_errno = errno;
  }
  errno = last_errno;
  ThrowErrno("cannot listen on " + endpoint.ToString());
}

std::uint16_t LocalPort(Socket const& listener) {
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  if (::getsockname(listener.fd(), reinterpret_cast<sockaddr*>(&addr), &len) !=
      0) {
    ThrowErrno("getsockname");
  }
  if (addr.ss_family == AF_INET6) {
    return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

Socket Accept(Socket const& listener) {
  while (true) {
    int fd = ::accept4(listener.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd >= 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return Socket(fd);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return Socket();
  }
}

Socket Connect(Endpoint const& endpoint) {
  auto res = Resolve(endpoint, false);
  int last_errno = 0;
  for (auto* ai = res.get(); ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                      ai->ai_protocol));
    if (!s.valid()) {
      last_errno = errno;
      continue;
    }
    if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return s;
    }
    last_errno = errno;
  }
  errno = last_errno;
  ThrowErrno("cannot connect to " + endpoint.ToString());
}

std::optional<std::string> ReadFramePayload(Socket& socket) {
  std::array<char, wire::kHeaderBytes> raw{};
  if (!socket.ReadExact(raw.data(), raw.size())) return std::nullopt;
  std::array<std::uint8_t, wire::kHeaderBytes> header{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    header[i] = static_cast<std::uint8_t>(raw[i]);
  }
  auto const length = wire::DecodeHeader(header);
  std::string payload(length, '\0');
  if (length > 0 && !socket.ReadExact(payload.data(), length)) {
    throw Error(ErrorCode::kProtocolError, "connection closed mid-frame");
  }
  return payload;
}

void WriteFrame(Socket& socket, std::string_view payload) {
  socket.WriteAll(wire::FrameFromPayload(payload));
}

}  // namespace repro::net
