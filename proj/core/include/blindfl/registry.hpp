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

#ifndef BLINDFL_REGISTRY_HPP
#define BLINDFL_REGISTRY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "blindfl/model.hpp"

namespace blindfl {

/// Named catalogue of a model's parameter-matrix shapes. Used for byte
/// accounting and for materializing zero models without training code.
///
/// Plain-text format, one row per matrix:
///
///     # comment
///     conv1.weight  6x1x5x5  weight
///     conv1.bias    6        bias
struct ShapeRegistry {
  struct Entry {
    std::string name;
    std::vector<int> shape;
    Role role = Role::Weight;

    std::size_t param_count() const;
    std::size_t byte_size() const { return serialized_size(param_count()); }
  };

  std::string name;
  std::vector<Entry> entries;

  std::size_t total_params() const;
  std::size_t total_bytes() const;

  /// Zero-initialized model with this registry's shapes, indices 1..M.
  ModelParams zero_model() const;

  static ShapeRegistry parse(std::istream& in, std::string registry_name);
  static ShapeRegistry load(const std::string& path);

  /// The bundled LeNet-5 registry (10 matrices, 545,546 parameters).
  static const ShapeRegistry& lenet5();
};

}  // namespace blindfl

#endif  // BLINDFL_REGISTRY_HPP
