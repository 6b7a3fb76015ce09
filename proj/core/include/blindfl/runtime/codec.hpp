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

#ifndef BLINDFL_RUNTIME_CODEC_HPP
#define BLINDFL_RUNTIME_CODEC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blindfl/bytes.hpp"
#include "blindfl/fhe/ciphertext.hpp"
#include "blindfl/model.hpp"

namespace blindfl::rt {

enum class MessageKind : std::uint8_t {
  PublicKey = 1,
  RequestRow = 2,
  ClientUpdate = 3,
  AggregationComplete = 4,
  PrivateKey = 5,
  GlobalModel = 6,
};

/// Node addressing: the server is 0, clients are their 1-based ids, the key
/// distributor uses a reserved id.
using NodeId = std::uint32_t;
inline constexpr NodeId kServerNode = 0;
inline constexpr NodeId kKeyDistributorNode = 0xffffffffu;

struct WireMessage {
  MessageKind kind = MessageKind::AggregationComplete;
  std::uint64_t round_id = 0;
  NodeId sender = kServerNode;
  Bytes payload;
};

/// Frame layout: magic "BFL1" (4), kind (1), round id (8 LE), sender (4 LE),
/// payload length (8 LE), payload, crc32 (4 LE).
inline constexpr std::size_t kFrameOverheadBytes = 29;
inline constexpr std::size_t kDefaultFrameCap = 64ull << 20;  // 64 MiB

std::size_t frame_length(const WireMessage& msg);
Bytes encode_message(const WireMessage& msg, std::size_t frame_cap = kDefaultFrameCap);
WireMessage decode_message(std::span<const std::uint8_t> frame,
                           std::size_t frame_cap = kDefaultFrameCap);

/// Matrix envelope inside ClientUpdate / GlobalModel payloads. The header is
/// exactly 99 bytes, so one plaintext matrix frame costs
/// 29 + 99 + 4 * value_count bytes = serialized_size(matrix).
inline constexpr std::size_t kMatrixHeaderBytes = 99;

enum class MatrixPayloadKind : std::uint8_t {
  PlainF32 = 0,
  CiphertextChunks = 1,
  PublicKeyEcho = 2,  ///< trailing frame of an encrypted client update
};

struct MatrixPayload {
  std::uint32_t client_id = 0;
  std::uint32_t examples = 0;  ///< t; zero in GlobalModel frames
  int index = 0;               ///< 1-based matrix index; zero for the key echo
  Role role = Role::Weight;
  std::vector<int> shape;
  std::uint32_t seq_index = 0;  ///< position within this update
  std::uint32_t seq_total = 0;  ///< frames making up this update
  MatrixPayloadKind kind = MatrixPayloadKind::PlainF32;

  std::vector<double> plain_values;          ///< PlainF32 (f32 on the wire)
  std::vector<fhe::Ciphertext> chunks;       ///< CiphertextChunks
  Bytes echo;                                ///< PublicKeyEcho

  ParamMatrix to_matrix() const;
  static MatrixPayload plain(const ParamMatrix& m, std::uint32_t client_id,
                             std::uint32_t examples);
  static MatrixPayload encrypted(const fhe::EncryptedMatrix& m,
                                 std::uint32_t client_id, std::uint32_t examples);
};

Bytes encode_matrix_payload(const MatrixPayload& p);
MatrixPayload decode_matrix_payload(std::span<const std::uint8_t> bytes);

/// RequestRow payload: M (4 LE), p (4 LE), N (4 LE), then the row packed
/// LSB-first into ceil(M/8) bytes.
struct RequestRowPayload {
  std::uint32_t matrix_count = 0;
  std::uint32_t coverage = 0;
  std::uint32_t quota = 0;
  std::vector<std::uint8_t> row;  ///< unpacked 0/1 flags, length M
};

Bytes encode_request_row(const RequestRowPayload& p);
RequestRowPayload decode_request_row(std::span<const std::uint8_t> bytes);

}  // namespace blindfl::rt

#endif  // BLINDFL_RUNTIME_CODEC_HPP
