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

#ifndef BLINDFL_ATTACK_HPP
#define BLINDFL_ATTACK_HPP

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "blindfl/model.hpp"
#include "blindfl/rng.hpp"
#include "blindfl/training.hpp"

namespace blindfl::attack {

/// Update gradients grouped into layers: each layer owns a (weight, bias)
/// pair of parameter-matrix indices.
struct LayerGradient {
  ModelParams gradients;  ///< aligned with the model's 1-based indices
  std::vector<std::pair<int, int>> groups;  ///< (weight index, bias index) per layer

  int layer_count() const { return static_cast<int>(groups.size()); }
  void validate() const;

  /// Derives the conventional grouping for an MLP gradient: layers are
  /// consecutive (weight, bias) pairs.
  static LayerGradient from_mlp(const train::MlpSpec& spec, ModelParams gradients);
};

/// Which layers survive; masking a layer removes both its weight and bias
/// gradients.
struct GradientMask {
  std::set<int> included;  ///< 1-based layer ids
  int total_layers = 0;

  int n() const { return static_cast<int>(included.size()); }
  static GradientMask full(int layers);
  static GradientMask empty(int layers);
  /// Uniform random n-subset of the layers.
  static GradientMask random_subset(int layers, int n, Rng& rng);
};

/// Per-layer leakage scores. The score is a declared proxy: mean absolute
/// gradient entry over the layer's matrices, i.e. normalized by layer size.
struct SensitivityReport {
  std::vector<double> scores;  ///< one per layer, >= 0
  double total = 0.0;          ///< S

  int layer_count() const { return static_cast<int>(scores.size()); }
};

SensitivityReport layer_sensitivity(const LayerGradient& grad);

/// Monte-Carlo mean of the subset sensitivity S' over uniformly random
/// n-layer subsets. Converges to (n/N) * S.
double expected_subset_sensitivity(const SensitivityReport& report, int n,
                                   int trials, Rng& rng);

/// Keeps exactly the masked-in layer groups, bit-identical values.
LayerGradient mask_gradient(const LayerGradient& grad, const GradientMask& mask);

inline constexpr double kBiasRowEpsilon = 1e-8;

/// Closed-form single-sample input recovery from a fully connected first
/// layer: with dL/dW1 = dL/db1 (outer) x, any usable bias row k gives
/// x = (row k of dL/dW1) / (dL/db1)_k. The row with the largest |bias
/// gradient| is used. Throws FirstLayerMissing when the mask excluded
/// layer 1 and AllBiasZero when no row clears kBiasRowEpsilon.
std::vector<double> analytic_first_layer_recovery(const LayerGradient& masked,
                                                  const train::MlpSpec& spec);

/// 10 * log10(peak^2 / MSE), capped at 100 dB when MSE < 1e-10.
double psnr(std::span<const double> a, std::span<const double> b,
            double peak = 1.0);

/// Global-window structural similarity with K1 = 0.01, K2 = 0.03 over the
/// declared dynamic range. ssim(a, a) == 1 exactly.
double ssim(std::span<const double> a, std::span<const double> b,
            double range = 1.0);

/// One row of the attack-report CSV.
struct AttackSweepRow {
  int n = 0;
  int total_layers = 0;
  int trials = 0;
  double mean_subset_sensitivity = 0.0;
  double psnr_mean = 0.0;
  double ssim_mean = 0.0;
  double recovery_success_rate = 0.0;
};

struct AttackSweepConfig {
  train::MlpSpec model;
  int trials = 15;
  double data_mean = 0.0;   ///< adversary's prior for failed reconstructions
  double data_stddev = 0.5;
};

/// Sweeps n = 1..N. Each trial draws a fresh sample and model, masks a
/// uniform n-subset of layers, and attempts first-layer recovery. A trial
/// whose mask kept layer 1 reconstructs analytically; otherwise the
/// adversary falls back to a draw from its data prior, standing in for an
/// unconverged iterative attack.
std::vector<AttackSweepRow> run_attack_sweep(const AttackSweepConfig& config,
                                             Rng& rng);

}  // namespace blindfl::attack

#endif  // BLINDFL_ATTACK_HPP
