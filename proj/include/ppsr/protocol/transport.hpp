/*
 * Copyright 2026 The PPSR Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Reliable, ordered, message-framed duplex channels. Both implementations
// carry the exact frame bytes from wire.hpp.

#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "ppsr/error.hpp"
#include "ppsr/protocol/wire.hpp"

namespace ppsr::protocol {

class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual void send(const Frame& frame) = 0;
  virtual Frame receive() = 0;
  // Unblocks any pending receive on either side.
  virtual void close() = 0;
};

struct Channel {
  std::unique_ptr<Endpoint> alice;
  std::unique_ptr<Endpoint> bob;

  void close() {
    if (alice) alice->close();
    if (bob) bob->close();
  }
};

inline constexpr std::chrono::seconds kReceiveTimeout{60};

// The peer went away (or the channel was closed under us).
class ChannelClosed : public ProtocolError {
 public:
  ChannelClosed() : ProtocolError("channel closed") {}
};

namespace detail {

class Mailbox {
 public:
  void push(std::vector<std::uint8_t> bytes) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (closed_) throw ChannelClosed();
      queue_.push_back(std::move(bytes));
    }
    cv_.notify_all();
  }

  std::vector<std::uint8_t> pop() {
    std::unique_lock<std::mutex> lock(mu_);
    if (!cv_.wait_for(lock, kReceiveTimeout,
                      [&] { return closed_ || !queue_.empty(); })) {
      throw ProtocolError("receive timed out");
    }
    if (queue_.empty()) throw ChannelClosed();
    auto bytes = std::move(queue_.front());
    queue_.pop_front();
    return bytes;
  }

  void close() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> queue_;
  bool closed_ = false;
};

class InProcessEndpoint final : public Endpoint {
 public:
  InProcessEndpoint(std::shared_ptr<Mailbox> in, std::shared_ptr<Mailbox> out)
      : in_(std::move(in)), out_(std::move(out)) {}

  void send(const Frame& frame) override { out_->push(encode_frame(frame)); }
  Frame receive() override { return decode_frame(in_->pop()); }
  void close() override {
    in_->close();
    out_->close();
  }

 private:
  std::shared_ptr<Mailbox> in_;
  std::shared_ptr<Mailbox> out_;
};

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd = -1) : fd_(fd) {}
  FileDescriptor(FileDescriptor&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  FileDescriptor& operator=(FileDescriptor&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~FileDescriptor() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

[[noreturn]] inline void throw_errno(const char* what) {
  throw ProtocolError(std::string(what) + ": " + std::strerror(errno));
}

class SocketEndpoint final : public Endpoint {
 public:
  explicit SocketEndpoint(FileDescriptor fd) : fd_(std::move(fd)) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(kReceiveTimeout.count());
    ::setsockopt(fd_.get(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    int one = 1;
    ::setsockopt(fd_.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }

  void send(const Frame& frame) override {
    auto bytes = encode_frame(frame);
    std::size_t done = 0;
    while (done < bytes.size()) {
      ssize_t n = ::send(fd_.get(), bytes.data() + done, bytes.size() - done, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EPIPE || errno == ECONNRESET) throw ChannelClosed();
        throw_errno("send");
      }
      done += static_cast<std::size_t>(n);
    }
  }

  Frame receive() override {
    std::vector<std::uint8_t> header(kHeaderSize);
    read_exact(header);
    auto [type, len] = decode_header(header);
    std::vector<std::uint8_t> payload(len);
    read_exact(payload);
    return Frame{type, std::move(payload)};
  }

  void close() override {
    if (fd_.get() >= 0) ::shutdown(fd_.get(), SHUT_RDWR);
  }

 private:
  void read_exact(std::vector<std::uint8_t>& buf) {
    std::size_t done = 0;
    while (done < buf.size()) {
      ssize_t n = ::recv(fd_.get(), buf.data() + done, buf.size() - done, 0);
      if (n == 0) throw ChannelClosed();
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) {
          throw ProtocolError("receive timed out");
        }
        if (errno == ECONNRESET) throw ChannelClosed();
        throw_errno("recv");
      }
      done += static_cast<std::size_t>(n);
    }
  }

  FileDescriptor fd_;
};

}  // namespace detail

inline Channel make_in_process_channel() {
  auto a_to_b = std::make_shared<detail::Mailbox>();
  auto b_to_a = std::make_shared<detail::Mailbox>();
  Channel ch;
  ch.alice = std::make_unique<detail::InProcessEndpoint>(b_to_a, a_to_b);
  ch.bob = std::make_unique<detail::InProcessEndpoint>(a_to_b, b_to_a);
  return ch;
}

// A TCP connection over 127.0.0.1; Alice holds the connecting end.
inline Channel make_loopback_socket_channel() {
  using detail::FileDescriptor;
  FileDescriptor listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (listener.get() < 0) detail::throw_errno("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    detail::throw_errno("bind");
  }
  if (::listen(listener.get(), 1) < 0) detail::throw_errno("listen");
  socklen_t len = sizeof(addr);
  if (::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
    detail::throw_errno("getsockname");
  }
  FileDescriptor client(::socket(AF_INET, SOCK_STREAM, 0));
  if (client.get() < 0) detail::throw_errno("socket");
  if (::connect(client.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    detail::throw_errno("connect");
  }
  FileDescriptor server(::accept(listener.get(), nullptr, nullptr));
  if (server.get() < 0) detail::throw_errno("accept");
  Channel ch;
  ch.alice = std::make_unique<detail::SocketEndpoint>(std::move(client));
  ch.bob = std::make_unique<detail::SocketEndpoint>(std::move(server));
  return ch;
}

}  // namespace ppsr::protocol
