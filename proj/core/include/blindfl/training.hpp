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

#ifndef BLINDFL_TRAINING_HPP
#define BLINDFL_TRAINING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blindfl/model.hpp"
#include "blindfl/rng.hpp"

namespace blindfl::train {

/// Labeled feature vectors, row-major.
struct Dataset {
  std::vector<double> features;
  std::vector<int> labels;
  int feature_dim = 0;
  int class_count = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> sample(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(feature_dim),
            static_cast<std::size_t>(feature_dim)};
  }

  void push(std::span<const double> x, int label);
  void validate() const;
};

/// Seeded shuffle followed by an even split: parts are disjoint, cover the
/// input, and differ in size by at most one (the first |data| mod C parts
/// get the extra sample).
std::vector<Dataset> partition(const Dataset& data, int parts, Rng& rng);

/// Seeded train/test split; test gets round(fraction * size) samples.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             double test_fraction, Rng& rng);

enum class Activation : std::uint8_t { Tanh = 0, Relu = 1 };

/// Fully connected classifier with softmax cross-entropy loss. Parameter
/// matrices alternate weight/bias per layer, indices 1..2L, matching the
/// model-core ordering everywhere else in the system.
struct MlpSpec {
  std::vector<int> widths;  ///< input dim, hidden..., class count
  Activation activation = Activation::Tanh;

  int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  int matrix_count() const { return 2 * layer_count(); }
  void validate() const;

  /// Seeded uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)]; zero biases.
  ModelParams init(Rng& rng) const;

  /// Throws ShapeMismatch unless the model matches this spec.
  void check_model(const ModelParams& model) const;
};

/// Mean softmax cross-entropy over the dataset.
double loss(const MlpSpec& spec, const ModelParams& model, const Dataset& data);

/// Analytic gradient of the mean loss over `batch` (indices into data).
/// Same shapes/indices as the model.
ModelParams gradient(const MlpSpec& spec, const ModelParams& model,
                     const Dataset& data, std::span<const std::size_t> batch);

/// Single-sample gradient (the attack toolkit's input).
ModelParams gradient_single(const MlpSpec& spec, const ModelParams& model,
                            std::span<const double> x, int label);

struct TrainResult {
  ModelParams model;
  std::uint32_t examples = 0;  ///< t = |partition|
};

/// Plain minibatch SGD for `epochs` passes. Zero epochs returns the model
/// unchanged (t still reported).
TrainResult local_train(const MlpSpec& spec, ModelParams model, const Dataset& part,
                        int epochs, double learning_rate, int batch_size, Rng& rng);

/// Top-1 accuracy; argmax ties break toward the lowest class index.
double evaluate(const MlpSpec& spec, const ModelParams& model, const Dataset& test);

/// Seeded Gaussian-blobs classification fixture: class means are random
/// directions scaled by `separation`, samples add unit-scaled noise. Exactly
/// balanced when samples divides evenly by classes.
struct BlobsSpec {
  int samples = 2000;
  int features = 64;
  int classes = 10;
  double separation = 3.0;
  double noise = 1.0;
};
Dataset make_blobs(const BlobsSpec& spec, Rng& rng);

/// IDX image/label ingestion (magic 0x803 / 0x801, big-endian dims); pixel
/// bytes are scaled to [0, 1]. `limit` 0 means all samples.
Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t limit = 0);
Dataset parse_idx(std::span<const std::uint8_t> images,
                  std::span<const std::uint8_t> labels, std::size_t limit = 0);

}  // namespace blindfl::train

#endif  // BLINDFL_TRAINING_HPP
