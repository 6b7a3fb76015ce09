/*
 * Copyright 2026 the BlindFL authors.
 *
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

#include "blindfl/runtime/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "blindfl/errors.hpp"

namespace blindfl::rt {

void TrafficLedger::record(const Entry& e) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back(e);
}

void TrafficLedger::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
}

std::uint64_t TrafficLedger::uploaded(std::uint64_t round, NodeId client) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t total = 0;
  for (const auto& e : entries_) {
    if (e.round_id == round && e.from == client && e.kind == MessageKind::ClientUpdate) {
      total += e.frame_bytes;
    }
  }
  return total;
}

std::uint64_t TrafficLedger::downloaded(std::uint64_t round, NodeId client) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::uint64_t total = 0;
  for (const auto& e : entries_) {
    if (e.round_id == round && e.to == client) total += e.frame_bytes;
  }
  return total;
}

std::vector<TrafficLedger::Entry> TrafficLedger::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

void Transport::record(NodeId to, const WireMessage& msg, std::size_t frame_bytes) {
  if (ledger_ != nullptr) {
    ledger_->record({msg.round_id, msg.sender, to, msg.kind, frame_bytes});
  }
}

void InProcessTransport::send(NodeId to, const WireMessage& msg) {
  Bytes frame = encode_message(msg, frame_cap_);
  record(to, msg, frame.size());
  {
    std::lock_guard<std::mutex> lock(mu_);
    queues_[to].push_back(std::move(frame));
  }
  cv_.notify_all();
}

WireMessage InProcessTransport::recv(NodeId self) {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return !queues_[self].empty(); });
  Bytes frame = std::move(queues_[self].front());
  queues_[self].pop_front();
  lock.unlock();
  return decode_message(frame, frame_cap_);
}

namespace {

void write_all(int fd, const void* data, std::size_t len) {
  const char* p = static_cast<const char*>(data);
  while (len > 0) {
    const ssize_t n = ::write(fd, p, len);
    if (n <= 0) throw TransportError("socket write failed");
    p += n;
    len -= static_cast<std::size_t>(n);
  }
}

bool read_all(int fd, void* data, std::size_t len) {
  char* p = static_cast<char*>(data);
  while (len > 0) {
    const ssize_t n = ::read(fd, p, len);
    if (n == 0) return false;  // orderly shutdown
    if (n < 0) throw TransportError("socket read failed");
    p += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

SocketTransport::SocketTransport(const std::vector<NodeId>& nodes,
                                 std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("cannot create listening socket");
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw TransportError("cannot bind hub socket");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::listen(listen_fd_, static_cast<int>(nodes.size()) + 1) != 0) {
    throw TransportError("cannot listen on hub socket");
  }

  // connect one endpoint per node, announcing its id as the first 4 bytes
  for (NodeId node : nodes) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("cannot create endpoint socket");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
      throw TransportError("cannot connect endpoint to hub");
    }
    const int hub_fd = ::accept(listen_fd_, nullptr, nullptr);
    if (hub_fd < 0) throw TransportError("hub accept failed");
    write_all(fd, &node, sizeof(node));
    NodeId announced;
    if (!read_all(hub_fd, &announced, sizeof(announced))) {
      throw TransportError("endpoint hung up during handshake");
    }
    endpoints_[node] = fd;
    hub_sides_[announced] = hub_fd;
  }
  hub_ = std::thread([this] { hub_loop(); });
}

SocketTransport::~SocketTransport() {
  stopping_ = true;
  for (auto& [node, fd] : endpoints_) ::shutdown(fd, SHUT_RDWR);
  if (hub_.joinable()) hub_.join();
  for (auto& [node, fd] : endpoints_) ::close(fd);
  for (auto& [node, fd] : hub_sides_) ::close(fd);
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SocketTransport::hub_loop() {
  std::vector<pollfd> fds;
  std::vector<NodeId> owners;
  for (const auto& [node, fd] : hub_sides_) {
    fds.push_back({fd, POLLIN, 0});
    owners.push_back(node);
  }
  std::size_t open = fds.size();
  while (open > 0 && !stopping_) {
    if (::poll(fds.data(), fds.size(), 200) < 0) break;
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
      NodeId dest;
      std::uint64_t frame_len;
      if (!read_all(fds[i].fd, &dest, sizeof(dest)) ||
          !read_all(fds[i].fd, &frame_len, sizeof(frame_len))) {
        fds[i].events = 0;
        fds[i].fd = -fds[i].fd;  // stop polling this endpoint
        --open;
        continue;
      }
      Bytes frame(frame_len);
      if (!read_all(fds[i].fd, frame.data(), frame.size())) {
        fds[i].events = 0;
        fds[i].fd = -fds[i].fd;
        --open;
        continue;
      }
      auto it = hub_sides_.find(dest);
      if (it == hub_sides_.end()) continue;  // drop frames to unknown nodes
      write_all(it->second, &frame_len, sizeof(frame_len));
      write_all(it->second, frame.data(), frame.size());
    }
  }
}

int SocketTransport::fd_for(NodeId node) const {
  auto it = endpoints_.find(node);
  if (it == endpoints_.end()) {
    throw TransportError("unknown node " + std::to_string(node));
  }
  return it->second;
}

void SocketTransport::send(NodeId to, const WireMessage& msg) {
  Bytes frame = encode_message(msg, frame_cap_);
  record(to, msg, frame.size());
  const std::uint64_t frame_len = frame.size();
  std::lock_guard<std::mutex> lock(send_mu_);
  const int fd = fd_for(msg.sender);
  write_all(fd, &to, sizeof(to));
  write_all(fd, &frame_len, sizeof(frame_len));
  write_all(fd, frame.data(), frame.size());
}

WireMessage SocketTransport::recv(NodeId self) {
  const int fd = fd_for(self);
  std::uint64_t frame_len;
  if (!read_all(fd, &frame_len, sizeof(frame_len))) {
    throw TransportError("connection closed while waiting for a frame");
  }
  if (frame_len > frame_cap_) {
    throw CodecError(CodecError::Kind::CapExceeded, "incoming frame exceeds cap");
  }
  Bytes frame(frame_len);
  if (!read_all(fd, frame.data(), frame.size())) {
    throw TransportError("connection closed mid-frame");
  }
  return decode_message(frame, frame_cap_);
}

}  // namespace blindfl::rt
