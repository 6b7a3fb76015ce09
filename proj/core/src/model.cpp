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

#include "blindfl/model.hpp"

#include <numeric>
#include <string>

#include "blindfl/errors.hpp"

namespace blindfl {

namespace {

std::size_t shape_product(const std::vector<int>& shape) {
  std::size_t p = 1;
  for (int d : shape) {
    if (d <= 0) throw InvalidArgument("matrix shape dimensions must be positive");
    p *= static_cast<std::size_t>(d);
  }
  return p;
}

}  // namespace

void ParamMatrix::validate() const {
  if (index < 1) throw InvalidArgument("matrix index must be 1-based");
  if (shape.empty()) throw InvalidArgument("matrix shape must be non-empty");
  if (shape_product(shape) != values.size()) {
    throw ShapeMismatch("matrix " + std::to_string(index) +
                        ": shape product != value count");
  }
}

std::size_t ModelParams::param_count() const {
  std::size_t n = 0;
  for (const auto& m : matrices) n += m.param_count();
  return n;
}

void ModelParams::validate() const {
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    matrices[i].validate();
    if (matrices[i].index != static_cast<int>(i) + 1) {
      throw InvalidArgument("model matrices must carry indices exactly 1..M in order");
    }
  }
}

bool ModelParams::compatible(const ModelParams& a, const ModelParams& b) {
  if (a.matrices.size() != b.matrices.size()) return false;
  for (std::size_t i = 0; i < a.matrices.size(); ++i) {
    if (a.matrices[i].shape != b.matrices[i].shape) return false;
  }
  return true;
}

std::size_t model_total_size(const ModelParams& model) {
  std::size_t total = 0;
  for (const auto& m : model.matrices) total += serialized_size(m);
  return total;
}

std::size_t ShapeManifest::total_values() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += shape_product(e.shape);
  return n;
}

FlatModel flatten(const ModelParams& model) {
  model.validate();
  FlatModel flat;
  flat.data.reserve(model.param_count());
  flat.manifest.entries.reserve(model.matrices.size());
  for (const auto& m : model.matrices) {
    flat.data.insert(flat.data.end(), m.values.begin(), m.values.end());
    flat.manifest.entries.push_back({m.shape, m.role});
  }
  return flat;
}

ModelParams unflatten(std::span<const double> data, const ShapeManifest& manifest) {
  if (manifest.total_values() != data.size()) {
    throw ShapeMismatch("flat data length does not match manifest");
  }
  ModelParams model;
  model.matrices.reserve(manifest.entries.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    std::size_t n = shape_product(e.shape);
    ParamMatrix m;
    m.index = static_cast<int>(i) + 1;
    m.shape = e.shape;
    m.role = e.role;
    m.values.assign(data.begin() + offset, data.begin() + offset + n);
    offset += n;
    model.matrices.push_back(std::move(m));
  }
  return model;
}

}  // namespace blindfl
