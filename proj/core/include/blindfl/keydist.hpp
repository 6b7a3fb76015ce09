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

#ifndef BLINDFL_KEYDIST_HPP
#define BLINDFL_KEYDIST_HPP

#include <cstdint>
#include <mutex>
#include <set>
#include <utility>

#include "blindfl/fhe/backend.hpp"
#include "blindfl/fhe/keys.hpp"
#include "blindfl/rng.hpp"

namespace blindfl::kd {

/// Round phases, in strict order. The private key becomes releasable only
/// after every participating client submitted its update AND the server
/// attested that aggregation finished.
enum class Phase : std::uint8_t {
  Idle,
  KeysIssued,
  CollectingUpdates,
  AwaitingServerSignal,
  PrivateKeyReleased,
  RoundComplete,
};

enum class EventKind : std::uint8_t {
  StartRound,
  PublicKeyDelivered,   // to a participant
  UpdateSubmitted,      // by a participant (relayed by the server)
  AggregationComplete,  // attested by the server only
  PrivateKeyDelivered,  // to a recipient
  ModelDistributed,     // global model pushed to every recipient
};

struct RoundEvent {
  EventKind kind = EventKind::StartRound;
  std::uint64_t round_id = 0;
  int client_id = 0;  ///< meaningful for the *Delivered / *Submitted kinds

  static RoundEvent start(std::uint64_t round) { return {EventKind::StartRound, round, 0}; }
  static RoundEvent public_key_delivered(std::uint64_t round, int client) {
    return {EventKind::PublicKeyDelivered, round, client};
  }
  static RoundEvent update_submitted(std::uint64_t round, int client) {
    return {EventKind::UpdateSubmitted, round, client};
  }
  static RoundEvent aggregation_complete(std::uint64_t round) {
    return {EventKind::AggregationComplete, round, 0};
  }
  static RoundEvent private_key_delivered(std::uint64_t round, int client) {
    return {EventKind::PrivateKeyDelivered, round, client};
  }
  static RoundEvent model_distributed(std::uint64_t round) {
    return {EventKind::ModelDistributed, round, 0};
  }
};

/// Pure protocol state; key material is handled by the KeyDistributor
/// wrapper so this core can be exhaustively model-checked.
///
/// `participants` are the clients selected for the round: they receive the
/// public key and owe an update. `recipients` additionally covers clients
/// that only consume the released private key and the distributed model
/// (the whole federation when only a subset is selected); it always
/// includes the participants.
struct KdState {
  Phase phase = Phase::Idle;
  std::uint64_t round_id = 0;
  std::set<int> participants;
  std::set<int> recipients;
  std::set<int> pk_delivered;
  std::set<int> updates_received;
  std::set<int> sk_delivered;

  bool all_updates_in() const { return updates_received == participants; }
  bool released() const {
    return phase == Phase::PrivateKeyReleased || phase == Phase::RoundComplete;
  }

  static KdState initial(std::set<int> participants, std::set<int> recipients = {});
};

/// Transition function. Throws IllegalTransition on an out-of-order event
/// and RoundMismatch when the event's round id disagrees with the state's.
KdState step(const KdState& state, const RoundEvent& event);

/// The key distributor proper: a serialized actor owning the per-round key
/// pair. Creates fresh keys each round and surrenders the private key only
/// once the protocol gate opens.
class KeyDistributor {
 public:
  KeyDistributor(fhe::FheParams params, std::set<int> recipients, Rng rng);

  /// Starts a new round for the given participant set: fresh key pair,
  /// strictly increasing round id, prior secret retired. Throws
  /// IllegalTransition if a round is in flight.
  std::pair<std::uint64_t, fhe::PublicKey> fresh_round(std::set<int> participants);

  /// Feeds one protocol event through the state machine.
  void handle_event(const RoundEvent& event);

  /// Private key for the current round; only legal after release.
  fhe::SecretKey private_key() const;

  Phase phase() const;
  std::uint64_t round_id() const;
  KdState state() const;

 private:
  fhe::FheParams params_;
  Rng rng_;
  KdState state_;
  fhe::FheKeyPair keys_;
  bool have_keys_ = false;
  mutable std::mutex mu_;
};

}  // namespace blindfl::kd

#endif  // BLINDFL_KEYDIST_HPP
