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

#ifndef BLINDFL_ERRORS_HPP
#define BLINDFL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blindfl {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated a documented parameter domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two tensors (or a tensor and its manifest) disagree on shape.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// Ciphertexts, keys, or protocol events from different rounds were mixed.
class RoundMismatch : public Error {
 public:
  using Error::Error;
};

/// The modulus chain has no level left for the requested multiplication.
class LevelExhausted : public Error {
 public:
  using Error::Error;
};

/// The key-distributor state machine refused an out-of-order event.
class IllegalTransition : public Error {
 public:
  using Error::Error;
};

/// A serialized blob failed structural validation.
class CodecError : public Error {
 public:
  enum class Kind { Malformed, Truncated, BadVersion, BadChecksum, CapExceeded };

  CodecError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Configuration file failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure (closed socket, unreachable peer, cap breach).
class TransportError : public Error {
 public:
  using Error::Error;
};

/// A protocol-level invariant was violated by a peer message.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

/// Input-recovery needs the first layer's gradients and the mask excluded them.
class FirstLayerMissing : public Error {
 public:
  using Error::Error;
};

/// Every bias-gradient entry is below the usable threshold.
class AllBiasZero : public Error {
 public:
  using Error::Error;
};

}  // namespace blindfl

#endif  // BLINDFL_ERRORS_HPP
