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

#include "blindfl/keydist.hpp"

#include <string>

#include "blindfl/errors.hpp"

namespace blindfl::kd {

namespace {

[[noreturn]] void illegal(const KdState& s, const RoundEvent& e) {
  throw IllegalTransition("event kind " + std::to_string(static_cast<int>(e.kind)) +
                          " is not legal in phase " +
                          std::to_string(static_cast<int>(s.phase)));
}

}  // namespace

KdState KdState::initial(std::set<int> participants, std::set<int> recipients) {
  if (participants.empty()) {
    throw InvalidArgument("round needs at least one participant");
  }
  KdState s;
  s.participants = std::move(participants);
  s.recipients = recipients.empty() ? s.participants : std::move(recipients);
  for (int p : s.participants) {
    if (!s.recipients.contains(p)) {
      throw InvalidArgument("every participant must also be a key recipient");
    }
  }
  return s;
}

KdState step(const KdState& state, const RoundEvent& event) {
  // StartRound opens the next round; everything else must match the
  // current one.
  if (event.kind == EventKind::StartRound) {
    if (state.phase != Phase::Idle && state.phase != Phase::RoundComplete) {
      throw IllegalTransition("round already in progress");
    }
    if (event.round_id != state.round_id + 1) {
      throw RoundMismatch("rounds must advance by exactly one");
    }
    KdState next;
    next.phase = Phase::KeysIssued;
    next.round_id = event.round_id;
    next.participants = state.participants;
    next.recipients = state.recipients;
    return next;
  }
  if (event.round_id != state.round_id) {
    throw RoundMismatch("event for round " + std::to_string(event.round_id) +
                        " delivered during round " + std::to_string(state.round_id));
  }

  KdState next = state;
  switch (event.kind) {
    case EventKind::PublicKeyDelivered: {
      if (state.phase != Phase::KeysIssued) illegal(state, event);
      if (!state.participants.contains(event.client_id)) {
        throw IllegalTransition("public key offered to a non-participant");
      }
      if (!next.pk_delivered.insert(event.client_id).second) {
        throw IllegalTransition("public key already delivered to this client");
      }
      return next;
    }
    case EventKind::UpdateSubmitted: {
      if (state.phase != Phase::KeysIssued && state.phase != Phase::CollectingUpdates) {
        illegal(state, event);
      }
      if (!state.participants.contains(event.client_id)) {
        throw IllegalTransition("update from a non-participant");
      }
      if (!state.pk_delivered.contains(event.client_id)) {
        throw IllegalTransition("client submitted before receiving the public key");
      }
      if (!next.updates_received.insert(event.client_id).second) {
        throw IllegalTransition("duplicate update from one client");
      }
      next.phase = next.all_updates_in() ? Phase::AwaitingServerSignal
                                         : Phase::CollectingUpdates;
      return next;
    }
    case EventKind::AggregationComplete: {
      // Only the server emits this event; the gate insists every update is
      // already in. A CollectingUpdates state whose received set happens to
      // be full (constructed directly rather than driven here) is accepted
      // as equivalent to AwaitingServerSignal.
      const bool gate_open =
          state.phase == Phase::AwaitingServerSignal ||
          (state.phase == Phase::CollectingUpdates && state.all_updates_in());
      if (!gate_open) illegal(state, event);
      next.phase = Phase::PrivateKeyReleased;
      return next;
    }
    case EventKind::PrivateKeyDelivered: {
      if (state.phase != Phase::PrivateKeyReleased) illegal(state, event);
      if (!state.recipients.contains(event.client_id)) {
        throw IllegalTransition("private key offered to a non-recipient");
      }
      if (!next.sk_delivered.insert(event.client_id).second) {
        throw IllegalTransition("private key already delivered to this client");
      }
      return next;
    }
    case EventKind::ModelDistributed: {
      if (state.phase != Phase::PrivateKeyReleased) illegal(state, event);
      if (state.sk_delivered != state.recipients) {
        throw IllegalTransition("model distributed before every client can decrypt");
      }
      next.phase = Phase::RoundComplete;
      return next;
    }
    case EventKind::StartRound:
      break;  // handled above
  }
  illegal(state, event);
}

KeyDistributor::KeyDistributor(fhe::FheParams params, std::set<int> recipients,
                               Rng rng)
    : params_(std::move(params)), rng_(rng) {
  if (recipients.empty()) {
    throw InvalidArgument("key distributor needs at least one recipient");
  }
  state_.recipients = std::move(recipients);
  state_.participants = state_.recipients;
}

std::pair<std::uint64_t, fhe::PublicKey> KeyDistributor::fresh_round(
    std::set<int> participants) {
  std::lock_guard<std::mutex> lock(mu_);
  KdState seed = state_;
  seed.participants = std::move(participants);
  for (int p : seed.participants) {
    if (!seed.recipients.contains(p)) {
      throw InvalidArgument("participant outside the recipient set");
    }
  }
  if (seed.participants.empty()) {
    throw InvalidArgument("round needs at least one participant");
  }
  state_ = step(seed, RoundEvent::start(state_.round_id + 1));
  Rng round_rng = rng_.fork(state_.round_id);
  keys_ = fhe::backend_for(params_.scheme).keygen(params_, round_rng, state_.round_id);
  have_keys_ = true;
  return {state_.round_id, keys_.public_key};
}

void KeyDistributor::handle_event(const RoundEvent& event) {
  std::lock_guard<std::mutex> lock(mu_);
  if (event.kind == EventKind::StartRound) {
    throw IllegalTransition("StartRound is driven through fresh_round()");
  }
  state_ = step(state_, event);
}

fhe::SecretKey KeyDistributor::private_key() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_.released() || !have_keys_) {
    throw IllegalTransition("private key requested before release");
  }
  return keys_.secret_key;
}

Phase KeyDistributor::phase() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_.phase;
}

std::uint64_t KeyDistributor::round_id() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_.round_id;
}

KdState KeyDistributor::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

}  // namespace blindfl::kd
