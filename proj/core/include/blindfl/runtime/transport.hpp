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

#ifndef BLINDFL_RUNTIME_TRANSPORT_HPP
#define BLINDFL_RUNTIME_TRANSPORT_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "blindfl/runtime/codec.hpp"

namespace blindfl::rt {

/// Exact per-frame byte accounting, recorded at send time.
class TrafficLedger {
 public:
  struct Entry {
    std::uint64_t round_id;
    NodeId from;
    NodeId to;
    MessageKind kind;
    std::uint64_t frame_bytes;
  };

  void record(const Entry& e);
  void clear();

  /// Sum of ClientUpdate frame bytes sent by `client` in `round`.
  std::uint64_t uploaded(std::uint64_t round, NodeId client) const;
  /// Sum of all frame bytes delivered to `client` in `round`.
  std::uint64_t downloaded(std::uint64_t round, NodeId client) const;
  std::vector<Entry> entries() const;

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

/// Message fabric between the server, the clients, and the key distributor.
/// Implementations deliver whole frames; every send serializes through the
/// codec so byte accounting sees real frame lengths.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual void send(NodeId to, const WireMessage& msg) = 0;
  /// Blocking receive of the next frame addressed to `self`.
  virtual WireMessage recv(NodeId self) = 0;

  void attach_ledger(TrafficLedger* ledger) { ledger_ = ledger; }
  void set_frame_cap(std::size_t cap) { frame_cap_ = cap; }
  std::size_t frame_cap() const { return frame_cap_; }

 protected:
  void record(NodeId to, const WireMessage& msg, std::size_t frame_bytes);
  TrafficLedger* ledger_ = nullptr;
  std::size_t frame_cap_ = kDefaultFrameCap;
};

/// Deterministic in-process queues; frames are delivered in send order.
class InProcessTransport final : public Transport {
 public:
  void send(NodeId to, const WireMessage& msg) override;
  WireMessage recv(NodeId self) override;

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<NodeId, std::deque<Bytes>> queues_;
};

/// Length-prefixed frames over loopback TCP through a small routing hub.
/// Each node opens one connection and announces its id; the hub forwards
/// [destination, frame] pairs. Demonstrates that the protocol survives a
/// real socket boundary; the in-process transport remains the default.
class SocketTransport final : public Transport {
 public:
  /// Spins up the hub on 127.0.0.1 (port 0 picks an ephemeral port) and
  /// connects endpoints for every node id given.
  SocketTransport(const std::vector<NodeId>& nodes, std::uint16_t port = 0);
  ~SocketTransport() override;

  std::uint16_t port() const { return port_; }

  void send(NodeId to, const WireMessage& msg) override;
  WireMessage recv(NodeId self) override;

 private:
  void hub_loop();
  int fd_for(NodeId node) const;

  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::thread hub_;
  std::map<NodeId, int> endpoints_;      ///< node-side fds
  std::map<NodeId, int> hub_sides_;      ///< hub-side fds
  std::mutex send_mu_;
  bool stopping_ = false;
};

}  // namespace blindfl::rt

#endif  // BLINDFL_RUNTIME_TRANSPORT_HPP
