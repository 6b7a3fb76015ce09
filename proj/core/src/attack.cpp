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

#include "blindfl/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blindfl/errors.hpp"

namespace blindfl::attack {

void LayerGradient::validate() const {
  std::set<int> seen;
  for (const auto& [w, b] : groups) {
    for (int idx : {w, b}) {
      if (!seen.insert(idx).second) {
        throw InvalidArgument("gradient grouping repeats matrix index " +
                              std::to_string(idx));
      }
    }
  }
  if (seen.size() != gradients.matrices.size()) {
    throw InvalidArgument("gradient grouping must cover every matrix exactly once");
  }
  for (const auto& m : gradients.matrices) {
    if (!seen.contains(m.index)) {
      throw InvalidArgument("matrix index " + std::to_string(m.index) +
                            " missing from the grouping");
    }
    for (double v : m.values) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite gradient entry");
    }
  }
}

LayerGradient LayerGradient::from_mlp(const train::MlpSpec& spec,
                                      ModelParams gradients) {
  spec.check_model(gradients);
  LayerGradient g;
  g.gradients = std::move(gradients);
  for (int l = 0; l < spec.layer_count(); ++l) {
    g.groups.emplace_back(2 * l + 1, 2 * l + 2);
  }
  return g;
}

GradientMask GradientMask::full(int layers) {
  GradientMask m;
  m.total_layers = layers;
  for (int l = 1; l <= layers; ++l) m.included.insert(l);
  return m;
}

GradientMask GradientMask::empty(int layers) {
  GradientMask m;
  m.total_layers = layers;
  return m;
}

GradientMask GradientMask::random_subset(int layers, int n, Rng& rng) {
  if (n < 0 || n > layers) throw InvalidArgument("subset size out of range");
  GradientMask m;
  m.total_layers = layers;
  std::vector<int> ids(layers);
  std::iota(ids.begin(), ids.end(), 1);
  for (int k = 0; k < n; ++k) {
    const int pick = k + static_cast<int>(rng.below(layers - k));
    std::swap(ids[k], ids[pick]);
    m.included.insert(ids[k]);
  }
  return m;
}

SensitivityReport layer_sensitivity(const LayerGradient& grad) {
  grad.validate();
  SensitivityReport report;
  report.scores.reserve(grad.groups.size());
  for (const auto& [w_idx, b_idx] : grad.groups) {
    double abs_sum = 0.0;
    std::size_t count = 0;
    for (const auto& m : grad.gradients.matrices) {
      if (m.index != w_idx && m.index != b_idx) continue;
      for (double v : m.values) abs_sum += std::abs(v);
      count += m.values.size();
    }
    const double score = count == 0 ? 0.0 : abs_sum / static_cast<double>(count);
    report.scores.push_back(score);
    report.total += score;
  }
  return report;
}

double expected_subset_sensitivity(const SensitivityReport& report, int n,
                                   int trials, Rng& rng) {
  const int N = report.layer_count();
  if (n < 0 || n > N) throw InvalidArgument("subset size out of range");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  if (n == 0) return 0.0;

  std::vector<int> ids(N);
  double acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::iota(ids.begin(), ids.end(), 0);
    double subtotal = 0.0;
    for (int k = 0; k < n; ++k) {
      const int pick = k + static_cast<int>(rng.below(N - k));
      std::swap(ids[k], ids[pick]);
      subtotal += report.scores[ids[k]];
    }
    acc += subtotal;
  }
  return acc / static_cast<double>(trials);
}

LayerGradient mask_gradient(const LayerGradient& grad, const GradientMask& mask) {
  grad.validate();
  if (mask.total_layers != grad.layer_count()) {
    throw InvalidArgument("mask layer count does not match the gradient");
  }
  for (int id : mask.included) {
    if (id < 1 || id > grad.layer_count()) {
      throw InvalidArgument("mask names unknown layer " + std::to_string(id));
    }
  }
  LayerGradient out;
  for (int layer = 1; layer <= grad.layer_count(); ++layer) {
    if (!mask.included.contains(layer)) continue;
    const auto [w_idx, b_idx] = grad.groups[layer - 1];
    out.groups.emplace_back(w_idx, b_idx);
    for (const auto& m : grad.gradients.matrices) {
      if (m.index == w_idx || m.index == b_idx) out.gradients.matrices.push_back(m);
    }
  }
  return out;
}

std::vector<double> analytic_first_layer_recovery(const LayerGradient& masked,
                                                  const train::MlpSpec& spec) {
  spec.validate();
  const ParamMatrix* g_w = nullptr;
  const ParamMatrix* g_b = nullptr;
  for (const auto& m : masked.gradients.matrices) {
    if (m.index == 1) g_w = &m;
    if (m.index == 2) g_b = &m;
  }
  if (g_w == nullptr || g_b == nullptr) {
    throw FirstLayerMissing("the mask excluded the first layer's gradients");
  }
  const int out = spec.widths[1];
  const int in = spec.widths[0];
  if (g_w->shape != std::vector<int>{out, in} || g_b->shape != std::vector<int>{out}) {
    throw ShapeMismatch("first-layer gradient shapes do not match the spec");
  }

  int best_row = -1;
  double best_mag = kBiasRowEpsilon;
  for (int r = 0; r < out; ++r) {
    const double mag = std::abs(g_b->values[r]);
    if (mag > best_mag) {
      best_mag = mag;
      best_row = r;
    }
  }
  if (best_row < 0) {
    throw AllBiasZero("no bias-gradient row exceeds the division threshold");
  }

  std::vector<double> x(in);
  const double inv = 1.0 / g_b->values[best_row];
  const double* row = g_w->values.data() + static_cast<std::size_t>(best_row) * in;
  for (int c = 0; c < in; ++c) x[c] = row[c] * inv;
  return x;
}

double psnr(std::span<const double> a, std::span<const double> b, double peak) {
  if (a.size() != b.size() || a.empty()) {
    throw ShapeMismatch("psnr expects two equal non-empty images");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    mse += d * d;
  }
  mse /= static_cast<double>(a.size());
  if (mse < 1e-10) return 100.0;
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(std::span<const double> a, std::span<const double> b, double range) {
  if (a.size() != b.size() || a.empty()) {
    throw ShapeMismatch("ssim expects two equal non-empty images");
  }
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double var_a = 0.0, var_b = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    var_a += da * da;
    var_b += db * db;
    cov += da * db;
  }
  var_a /= n;
  var_b /= n;
  cov /= n;
  const double c1 = (0.01 * range) * (0.01 * range);
  const double c2 = (0.03 * range) * (0.03 * range);
  return ((2.0 * mean_a * mean_b + c1) * (2.0 * cov + c2)) /
         ((mean_a * mean_a + mean_b * mean_b + c1) * (var_a + var_b + c2));
}

std::vector<AttackSweepRow> run_attack_sweep(const AttackSweepConfig& config,
                                             Rng& rng) {
  config.model.validate();
  if (config.trials < 1) throw InvalidArgument("attack sweep needs trials >= 1");
  const int N = config.model.layer_count();
  const int dim = config.model.widths.front();
  const int classes = config.model.widths.back();

  std::vector<AttackSweepRow> rows;
  rows.reserve(N);
  for (int n = 1; n <= N; ++n) {
    AttackSweepRow row;
    row.n = n;
    row.total_layers = N;
    row.trials = config.trials;
    double sens_acc = 0.0, psnr_acc = 0.0, ssim_acc = 0.0;
    int successes = 0;
    for (int t = 0; t < config.trials; ++t) {
      // fresh victim model + sample per trial
      Rng trial_rng = rng.fork((static_cast<std::uint64_t>(n) << 32) | t);
      ModelParams model = config.model.init(trial_rng);
      std::vector<double> x(dim);
      for (double& v : x) {
        v = config.data_mean + config.data_stddev * trial_rng.gaussian();
      }
      const int label = static_cast<int>(trial_rng.below(classes));

      auto grad = LayerGradient::from_mlp(
          config.model, train::gradient_single(config.model, model, x, label));
      sens_acc += expected_subset_sensitivity(layer_sensitivity(grad), n,
                                              /*trials=*/64, trial_rng);

      auto mask = GradientMask::random_subset(N, n, trial_rng);
      auto visible = mask_gradient(grad, mask);
      std::vector<double> recon;
      bool recovered = false;
      try {
        recon = analytic_first_layer_recovery(visible, config.model);
        recovered = true;
      } catch (const FirstLayerMissing&) {
      } catch (const AllBiasZero&) {
      }
      if (!recovered) {
        // prior draw: what an optimizer-based attack degrades to with no
        // first-layer signal
        recon.resize(x.size());
        for (double& v : recon) {
          v = config.data_mean + config.data_stddev * trial_rng.gaussian();
        }
      } else {
        ++successes;
      }
      psnr_acc += psnr(recon, x);
      ssim_acc += ssim(recon, x);
    }
    row.mean_subset_sensitivity = sens_acc / config.trials;
    row.psnr_mean = psnr_acc / config.trials;
    row.ssim_mean = ssim_acc / config.trials;
    row.recovery_success_rate = static_cast<double>(successes) / config.trials;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace blindfl::attack
