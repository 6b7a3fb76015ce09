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

#include "blindfl/runtime/codec.hpp"

#include <cstring>
#include <string>

#include "blindfl/errors.hpp"

namespace blindfl::rt {

namespace {

constexpr std::size_t kMaxShapeDims = 8;

void check_kind(std::uint8_t kind) {
  if (kind < 1 || kind > 6) {
    throw CodecError(CodecError::Kind::Malformed,
                     "unknown message kind " + std::to_string(kind));
  }
}

}  // namespace

std::size_t frame_length(const WireMessage& msg) {
  return kFrameOverheadBytes + msg.payload.size();
}

Bytes encode_message(const WireMessage& msg, std::size_t frame_cap) {
  if (frame_length(msg) > frame_cap) {
    throw CodecError(CodecError::Kind::CapExceeded,
                     "frame of " + std::to_string(frame_length(msg)) +
                         " bytes exceeds the cap of " + std::to_string(frame_cap));
  }
  check_kind(static_cast<std::uint8_t>(msg.kind));
  ByteWriter w;
  w.literal("BFL1");
  w.u8(static_cast<std::uint8_t>(msg.kind));
  w.u64(msg.round_id);
  w.u32(msg.sender);
  w.u64(msg.payload.size());
  w.bytes(msg.payload);
  w.checksum();
  return std::move(w).take();
}

WireMessage decode_message(std::span<const std::uint8_t> frame,
                           std::size_t frame_cap) {
  if (frame.size() > frame_cap) {
    throw CodecError(CodecError::Kind::CapExceeded, "frame exceeds the cap");
  }
  ByteReader r(frame);
  r.expect_literal("BFL1", "wire frame");
  WireMessage msg;
  const std::uint8_t kind = r.u8();
  check_kind(kind);
  msg.kind = static_cast<MessageKind>(kind);
  msg.round_id = r.u64();
  msg.sender = r.u32();
  const std::uint64_t len = r.u64();
  auto payload = r.take(len);
  msg.payload.assign(payload.begin(), payload.end());
  r.verify_checksum();
  if (r.remaining() != 0) {
    throw CodecError(CodecError::Kind::Malformed, "trailing bytes after frame");
  }
  return msg;
}

ParamMatrix MatrixPayload::to_matrix() const {
  if (kind != MatrixPayloadKind::PlainF32) {
    throw InvalidArgument("only plaintext payloads convert to a matrix directly");
  }
  ParamMatrix m;
  m.index = index;
  m.role = role;
  m.shape = shape;
  m.values = plain_values;
  m.validate();
  return m;
}

MatrixPayload MatrixPayload::plain(const ParamMatrix& m, std::uint32_t client_id,
                                   std::uint32_t examples) {
  m.validate();
  MatrixPayload p;
  p.client_id = client_id;
  p.examples = examples;
  p.index = m.index;
  p.role = m.role;
  p.shape = m.shape;
  p.kind = MatrixPayloadKind::PlainF32;
  p.plain_values = m.values;
  return p;
}

MatrixPayload MatrixPayload::encrypted(const fhe::EncryptedMatrix& m,
                                       std::uint32_t client_id,
                                       std::uint32_t examples) {
  MatrixPayload p;
  p.client_id = client_id;
  p.examples = examples;
  p.index = m.index;
  p.role = m.role;
  p.shape = m.shape;
  p.kind = MatrixPayloadKind::CiphertextChunks;
  p.chunks = m.chunks;
  return p;
}

Bytes encode_matrix_payload(const MatrixPayload& p) {
  if (p.shape.size() > kMaxShapeDims) {
    throw InvalidArgument("matrix rank above " + std::to_string(kMaxShapeDims) +
                          " is not representable on the wire");
  }
  std::uint64_t value_count = 0;
  if (p.kind == MatrixPayloadKind::PlainF32) {
    value_count = p.plain_values.size();
  } else if (p.kind == MatrixPayloadKind::CiphertextChunks) {
    std::size_t prod = 1;
    for (int d : p.shape) prod *= static_cast<std::size_t>(d);
    value_count = prod;
  }

  ByteWriter w;
  w.literal("PM");
  w.u8(1);  // envelope version
  w.u32(p.client_id);
  w.u32(p.examples);
  w.u32(static_cast<std::uint32_t>(p.index));
  w.u8(static_cast<std::uint8_t>(p.role));
  w.u8(static_cast<std::uint8_t>(p.shape.size()));
  for (std::size_t d = 0; d < kMaxShapeDims; ++d) {
    w.u32(d < p.shape.size() ? static_cast<std::uint32_t>(p.shape[d]) : 0);
  }
  w.u64(value_count);
  w.u32(p.seq_index);
  w.u32(p.seq_total);
  w.u8(static_cast<std::uint8_t>(p.kind));
  w.u32(static_cast<std::uint32_t>(p.chunks.size()));
  w.zeros(kMatrixHeaderBytes - w.size());  // reserved

  switch (p.kind) {
    case MatrixPayloadKind::PlainF32:
      for (double v : p.plain_values) w.f32(static_cast<float>(v));
      break;
    case MatrixPayloadKind::CiphertextChunks:
      for (const auto& ct : p.chunks) w.bytes(fhe::serialize_ciphertext(ct));
      break;
    case MatrixPayloadKind::PublicKeyEcho:
      w.bytes(p.echo);
      break;
  }
  return std::move(w).take();
}

MatrixPayload decode_matrix_payload(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_literal("PM", "matrix envelope");
  if (r.u8() != 1) {
    throw CodecError(CodecError::Kind::BadVersion, "unsupported matrix envelope");
  }
  MatrixPayload p;
  p.client_id = r.u32();
  p.examples = r.u32();
  p.index = static_cast<int>(r.u32());
  p.role = static_cast<Role>(r.u8());
  const std::uint8_t ndims = r.u8();
  if (ndims > kMaxShapeDims) {
    throw CodecError(CodecError::Kind::Malformed, "matrix rank out of range");
  }
  for (std::size_t d = 0; d < kMaxShapeDims; ++d) {
    const std::uint32_t dim = r.u32();
    if (d < ndims) p.shape.push_back(static_cast<int>(dim));
  }
  const std::uint64_t value_count = r.u64();
  p.seq_index = r.u32();
  p.seq_total = r.u32();
  const std::uint8_t kind = r.u8();
  if (kind > 2) {
    throw CodecError(CodecError::Kind::Malformed, "unknown matrix payload kind");
  }
  p.kind = static_cast<MatrixPayloadKind>(kind);
  const std::uint32_t chunk_count = r.u32();
  r.take(kMatrixHeaderBytes - r.offset());  // reserved

  switch (p.kind) {
    case MatrixPayloadKind::PlainF32: {
      p.plain_values.resize(value_count);
      for (auto& v : p.plain_values) v = static_cast<double>(r.f32());
      break;
    }
    case MatrixPayloadKind::CiphertextChunks: {
      p.chunks.reserve(chunk_count);
      for (std::uint32_t c = 0; c < chunk_count; ++c) {
        // each chunk is a self-delimiting BFHE container; peek its length
        // field (fixed header of 25 bytes, then payload length, payload, crc)
        auto rest = bytes.subspan(r.offset());
        if (rest.size() < 37) {
          throw CodecError(CodecError::Kind::Truncated, "chunk stream truncated");
        }
        std::uint64_t payload_len;
        std::memcpy(&payload_len, rest.data() + 25, 8);
        if (payload_len > rest.size()) {
          throw CodecError(CodecError::Kind::Truncated, "chunk stream truncated");
        }
        p.chunks.push_back(fhe::deserialize_ciphertext(r.take(37 + payload_len)));
      }
      break;
    }
    case MatrixPayloadKind::PublicKeyEcho: {
      auto rest = r.take(r.remaining());
      p.echo.assign(rest.begin(), rest.end());
      break;
    }
  }
  if (r.remaining() != 0) {
    throw CodecError(CodecError::Kind::Malformed, "trailing bytes in matrix payload");
  }
  return p;
}

Bytes encode_request_row(const RequestRowPayload& p) {
  if (p.row.size() != static_cast<std::size_t>(p.matrix_count)) {
    throw InvalidArgument("request row length disagrees with M");
  }
  ByteWriter w;
  w.u32(p.matrix_count);
  w.u32(p.coverage);
  w.u32(p.quota);
  std::uint8_t acc = 0;
  for (std::size_t j = 0; j < p.row.size(); ++j) {
    if (p.row[j]) acc |= static_cast<std::uint8_t>(1u << (j % 8));
    if (j % 8 == 7 || j + 1 == p.row.size()) {
      w.u8(acc);
      acc = 0;
    }
  }
  return std::move(w).take();
}

RequestRowPayload decode_request_row(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  RequestRowPayload p;
  p.matrix_count = r.u32();
  p.coverage = r.u32();
  p.quota = r.u32();
  const std::size_t packed = (p.matrix_count + 7) / 8;
  auto data = r.take(packed);
  p.row.resize(p.matrix_count);
  for (std::size_t j = 0; j < p.row.size(); ++j) {
    p.row[j] = (data[j / 8] >> (j % 8)) & 1u;
  }
  if (r.remaining() != 0) {
    throw CodecError(CodecError::Kind::Malformed, "trailing bytes in request row");
  }
  return p;
}

}  // namespace blindfl::rt
