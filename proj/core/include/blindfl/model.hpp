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

#ifndef BLINDFL_MODEL_HPP
#define BLINDFL_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace blindfl {

enum class Role : std::uint8_t { Weight = 0, Bias = 1 };

/// One parameter matrix of a model: the unit of segmentation, encryption and
/// aggregation. Values are held as doubles in memory and narrowed to 32-bit
/// floats only at serialization time.
struct ParamMatrix {
  int index = 0;  ///< 1-based position j within the model.
  std::vector<int> shape;
  Role role = Role::Weight;
  std::vector<double> values;  ///< row-major, product(shape) entries

  std::size_t param_count() const { return values.size(); }

  /// Throws InvalidArgument unless shape/values/index are consistent.
  void validate() const;
};

/// Fixed per-matrix wire envelope: 29 bytes of frame overhead plus a 99-byte
/// matrix header (see runtime/codec.hpp). Together with 4 bytes per value this
/// determines every transmission size in the system.
inline constexpr std::size_t kMatrixEnvelopeBytes = 128;
inline constexpr std::size_t kBytesPerValue = 4;

inline std::size_t serialized_size(std::size_t param_count) {
  return kBytesPerValue * param_count + kMatrixEnvelopeBytes;
}

inline std::size_t serialized_size(const ParamMatrix& m) {
  return serialized_size(m.param_count());
}

/// An ordered list of parameter matrices with indices exactly 1..M.
struct ModelParams {
  std::vector<ParamMatrix> matrices;

  std::size_t matrix_count() const { return matrices.size(); }
  std::size_t param_count() const;

  void validate() const;

  /// Two models can be aggregated iff all shapes match positionally.
  static bool compatible(const ModelParams& a, const ModelParams& b);
};

std::size_t model_total_size(const ModelParams& model);

/// Shape bookkeeping that survives a flatten() round trip.
struct ShapeManifest {
  struct Entry {
    std::vector<int> shape;
    Role role = Role::Weight;
  };
  std::vector<Entry> entries;

  std::size_t total_values() const;
  bool operator==(const ShapeManifest&) const = default;
};

struct FlatModel {
  std::vector<double> data;
  ShapeManifest manifest;
};

/// Concatenates all matrices in order. unflatten(flatten(m)) == m exactly.
FlatModel flatten(const ModelParams& model);

/// Inverse of flatten. Throws ShapeMismatch if data length disagrees with
/// the manifest.
ModelParams unflatten(std::span<const double> data, const ShapeManifest& manifest);

}  // namespace blindfl

#endif  // BLINDFL_MODEL_HPP
