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

#include "blindfl/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "blindfl/errors.hpp"

namespace blindfl::train {

namespace {

double activate(Activation act, double z) {
  return act == Activation::Tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

double activate_derivative(Activation act, double z) {
  if (act == Activation::Tanh) {
    const double t = std::tanh(z);
    return 1.0 - t * t;
  }
  return z > 0.0 ? 1.0 : 0.0;
}

/// z_out = W x + b, with W row-major (out x in).
void affine(const ParamMatrix& w, const ParamMatrix& b, std::span<const double> x,
            std::vector<double>& z) {
  const int out = w.shape[0];
  const int in = w.shape[1];
  z.resize(out);
  for (int r = 0; r < out; ++r) {
    double acc = b.values[r];
    const double* row = w.values.data() + static_cast<std::size_t>(r) * in;
    for (int c = 0; c < in; ++c) acc += row[c] * x[c];
    z[r] = acc;
  }
}

/// softmax in place, numerically stabilized.
void softmax(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

struct ForwardTrace {
  std::vector<std::vector<double>> pre;   ///< z per layer
  std::vector<std::vector<double>> post;  ///< activations per layer (post[0] = x)
};

void forward(const MlpSpec& spec, const ModelParams& model, std::span<const double> x,
             ForwardTrace& trace) {
  const int L = spec.layer_count();
  trace.pre.resize(L);
  trace.post.resize(L + 1);
  trace.post[0].assign(x.begin(), x.end());
  for (int l = 0; l < L; ++l) {
    const ParamMatrix& w = model.matrices[2 * l];
    const ParamMatrix& b = model.matrices[2 * l + 1];
    affine(w, b, trace.post[l], trace.pre[l]);
    if (l + 1 < static_cast<int>(trace.post.size())) {
      trace.post[l + 1] = trace.pre[l];
      if (l < L - 1) {  // the last layer stays as logits
        for (double& v : trace.post[l + 1]) v = activate(spec.activation, v);
      }
    }
  }
}

/// Accumulates the single-sample gradient into grad (same shapes as model).
/// Returns the sample's loss.
double backward(const MlpSpec& spec, const ModelParams& model,
                std::span<const double> x, int label, ModelParams& grad,
                ForwardTrace& trace) {
  const int L = spec.layer_count();
  forward(spec, model, x, trace);

  std::vector<double> probs = trace.pre[L - 1];
  softmax(probs);
  const double sample_loss = -std::log(std::max(probs[label], 1e-300));

  // delta for the output layer: softmax - onehot
  std::vector<double> delta = probs;
  delta[label] -= 1.0;

  for (int l = L - 1; l >= 0; --l) {
    const ParamMatrix& w = model.matrices[2 * l];
    ParamMatrix& gw = grad.matrices[2 * l];
    ParamMatrix& gb = grad.matrices[2 * l + 1];
    const auto& input = trace.post[l];
    const int out = w.shape[0];
    const int in = w.shape[1];
    for (int r = 0; r < out; ++r) {
      double* grow = gw.values.data() + static_cast<std::size_t>(r) * in;
      const double d = delta[r];
      for (int c = 0; c < in; ++c) grow[c] += d * input[c];
      gb.values[r] += d;
    }
    if (l > 0) {
      std::vector<double> prev(in, 0.0);
      for (int r = 0; r < out; ++r) {
        const double d = delta[r];
        const double* row = w.values.data() + static_cast<std::size_t>(r) * in;
        for (int c = 0; c < in; ++c) prev[c] += row[c] * d;
      }
      for (int c = 0; c < in; ++c) {
        prev[c] *= activate_derivative(spec.activation, trace.pre[l - 1][c]);
      }
      delta = std::move(prev);
    }
  }
  return sample_loss;
}

std::uint32_t read_be32(std::span<const std::uint8_t> data, std::size_t offset) {
  if (offset + 4 > data.size()) {
    throw CodecError(CodecError::Kind::Truncated, "IDX file truncated");
  }
  return (static_cast<std::uint32_t>(data[offset]) << 24) |
         (static_cast<std::uint32_t>(data[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(data[offset + 2]) << 8) |
         static_cast<std::uint32_t>(data[offset + 3]);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void Dataset::push(std::span<const double> x, int label) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

void Dataset::validate() const {
  if (feature_dim <= 0 || class_count <= 0) {
    throw InvalidArgument("dataset needs positive feature dim and class count");
  }
  if (features.size() != labels.size() * static_cast<std::size_t>(feature_dim)) {
    throw ShapeMismatch("feature buffer does not match label count");
  }
  for (int y : labels) {
    if (y < 0 || y >= class_count) throw InvalidArgument("label out of range");
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite feature value");
  }
}

std::vector<Dataset> partition(const Dataset& data, int parts, Rng& rng) {
  data.validate();
  if (parts < 1 || static_cast<std::size_t>(parts) > data.size()) {
    throw InvalidArgument("cannot partition " + std::to_string(data.size()) +
                          " samples into " + std::to_string(parts) + " parts");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());

  std::vector<Dataset> out(parts);
  const std::size_t base = data.size() / parts;
  const std::size_t extra = data.size() % parts;
  std::size_t cursor = 0;
  for (int p = 0; p < parts; ++p) {
    Dataset& d = out[p];
    d.feature_dim = data.feature_dim;
    d.class_count = data.class_count;
    const std::size_t take = base + (static_cast<std::size_t>(p) < extra ? 1 : 0);
    for (std::size_t k = 0; k < take; ++k, ++cursor) {
      d.push(data.sample(order[cursor]), data.labels[order[cursor]]);
    }
  }
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data,
                                             double test_fraction, Rng& rng) {
  data.validate();
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw InvalidArgument("test fraction must be in [0, 1)");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const auto test_count =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(data.size())));

  Dataset train_set, test_set;
  train_set.feature_dim = test_set.feature_dim = data.feature_dim;
  train_set.class_count = test_set.class_count = data.class_count;
  for (std::size_t k = 0; k < order.size(); ++k) {
    Dataset& dst = k < test_count ? test_set : train_set;
    dst.push(data.sample(order[k]), data.labels[order[k]]);
  }
  return {std::move(train_set), std::move(test_set)};
}

void MlpSpec::validate() const {
  if (widths.size() < 2) throw InvalidArgument("classifier needs >= 2 widths");
  for (int w : widths) {
    if (w < 1) throw InvalidArgument("layer widths must be positive");
  }
}

ModelParams MlpSpec::init(Rng& rng) const {
  validate();
  ModelParams model;
  for (int l = 0; l < layer_count(); ++l) {
    const int in = widths[l];
    const int out = widths[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    ParamMatrix w;
    w.index = 2 * l + 1;
    w.shape = {out, in};
    w.role = Role::Weight;
    w.values.resize(static_cast<std::size_t>(out) * in);
    for (double& v : w.values) v = rng.uniform(-bound, bound);
    ParamMatrix b;
    b.index = 2 * l + 2;
    b.shape = {out};
    b.role = Role::Bias;
    b.values.assign(out, 0.0);
    model.matrices.push_back(std::move(w));
    model.matrices.push_back(std::move(b));
  }
  return model;
}

void MlpSpec::check_model(const ModelParams& model) const {
  validate();
  if (static_cast<int>(model.matrices.size()) != matrix_count()) {
    throw ShapeMismatch("model has the wrong number of parameter matrices");
  }
  for (int l = 0; l < layer_count(); ++l) {
    const auto& w = model.matrices[2 * l];
    const auto& b = model.matrices[2 * l + 1];
    if (w.shape != std::vector<int>{widths[l + 1], widths[l]} ||
        b.shape != std::vector<int>{widths[l + 1]}) {
      throw ShapeMismatch("layer " + std::to_string(l) + " shape mismatch");
    }
  }
}

double loss(const MlpSpec& spec, const ModelParams& model, const Dataset& data) {
  spec.check_model(model);
  data.validate();
  if (data.size() == 0) throw InvalidArgument("loss over an empty dataset");
  ForwardTrace trace;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    forward(spec, model, data.sample(i), trace);
    std::vector<double> probs = trace.pre[spec.layer_count() - 1];
    softmax(probs);
    total += -std::log(std::max(probs[data.labels[i]], 1e-300));
  }
  const double mean = total / static_cast<double>(data.size());
  if (!std::isfinite(mean)) throw InvalidArgument("training diverged: non-finite loss");
  return mean;
}

ModelParams gradient(const MlpSpec& spec, const ModelParams& model,
                     const Dataset& data, std::span<const std::size_t> batch) {
  spec.check_model(model);
  if (batch.empty()) throw InvalidArgument("gradient over an empty batch");
  ModelParams grad;
  grad.matrices.reserve(model.matrices.size());
  for (const auto& m : model.matrices) {
    ParamMatrix g;
    g.index = m.index;
    g.shape = m.shape;
    g.role = m.role;
    g.values.assign(m.values.size(), 0.0);
    grad.matrices.push_back(std::move(g));
  }
  ForwardTrace trace;
  for (std::size_t i : batch) {
    backward(spec, model, data.sample(i), data.labels[i], grad, trace);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto& g : grad.matrices) {
    for (double& v : g.values) v *= inv;
  }
  return grad;
}

ModelParams gradient_single(const MlpSpec& spec, const ModelParams& model,
                            std::span<const double> x, int label) {
  Dataset one;
  one.feature_dim = spec.widths.front();
  one.class_count = spec.widths.back();
  one.push(x, label);
  const std::size_t idx[] = {0};
  return gradient(spec, model, one, idx);
}

TrainResult local_train(const MlpSpec& spec, ModelParams model, const Dataset& part,
                        int epochs, double learning_rate, int batch_size, Rng& rng) {
  spec.check_model(model);
  part.validate();
  if (part.size() == 0) throw InvalidArgument("cannot train on an empty partition");
  if (epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");

  std::vector<std::size_t> order(part.size());
  std::iota(order.begin(), order.end(), 0);

  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(batch_size));
      std::span<const std::size_t> batch(order.data() + start, stop - start);
      ModelParams grad = gradient(spec, model, part, batch);
      for (std::size_t m = 0; m < model.matrices.size(); ++m) {
        auto& values = model.matrices[m].values;
        const auto& g = grad.matrices[m].values;
        for (std::size_t k = 0; k < values.size(); ++k) {
          values[k] -= learning_rate * g[k];
        }
      }
    }
  }
  // fail fast if the step size blew the model up
  for (const auto& m : model.matrices) {
    for (double v : m.values) {
      if (!std::isfinite(v)) {
        throw InvalidArgument("training diverged: non-finite parameter");
      }
    }
  }
  return {std::move(model), static_cast<std::uint32_t>(part.size())};
}

double evaluate(const MlpSpec& spec, const ModelParams& model, const Dataset& test) {
  spec.check_model(model);
  test.validate();
  if (test.size() == 0) throw InvalidArgument("cannot evaluate on an empty dataset");
  ForwardTrace trace;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    forward(spec, model, test.sample(i), trace);
    const auto& logits = trace.pre[spec.layer_count() - 1];
    int best = 0;
    for (int k = 1; k < static_cast<int>(logits.size()); ++k) {
      if (logits[k] > logits[best]) best = k;  // ties keep the lower index
    }
    if (best == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

Dataset make_blobs(const BlobsSpec& spec, Rng& rng) {
  if (spec.samples < 1 || spec.features < 1 || spec.classes < 2) {
    throw InvalidArgument("blobs need >= 1 sample, >= 1 feature, >= 2 classes");
  }
  // one random unit direction per class, scaled out to the separation radius
  std::vector<std::vector<double>> means(spec.classes,
                                         std::vector<double>(spec.features));
  for (auto& mean : means) {
    double norm = 0.0;
    for (double& v : mean) {
      v = rng.gaussian();
      norm += v * v;
    }
    norm = std::sqrt(std::max(norm, 1e-12));
    for (double& v : mean) v = v / norm * spec.separation;
  }

  Dataset data;
  data.feature_dim = spec.features;
  data.class_count = spec.classes;
  std::vector<double> x(spec.features);
  for (int i = 0; i < spec.samples; ++i) {
    const int label = i % spec.classes;  // exactly balanced when divisible
    for (int f = 0; f < spec.features; ++f) {
      x[f] = means[label][f] + rng.gaussian(0.0, spec.noise);
    }
    data.push(x, label);
  }
  // shuffle so partitions do not inherit the round-robin label pattern
  std::vector<std::size_t> order(data.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  Dataset shuffled;
  shuffled.feature_dim = data.feature_dim;
  shuffled.class_count = data.class_count;
  for (std::size_t idx : order) shuffled.push(data.sample(idx), data.labels[idx]);
  return shuffled;
}

Dataset parse_idx(std::span<const std::uint8_t> images,
                  std::span<const std::uint8_t> labels, std::size_t limit) {
  if (read_be32(images, 0) != 0x00000803u) {
    throw CodecError(CodecError::Kind::Malformed, "bad IDX image magic");
  }
  if (read_be32(labels, 0) != 0x00000801u) {
    throw CodecError(CodecError::Kind::Malformed, "bad IDX label magic");
  }
  const std::uint32_t image_count = read_be32(images, 4);
  const std::uint32_t rows = read_be32(images, 8);
  const std::uint32_t cols = read_be32(images, 12);
  const std::uint32_t label_count = read_be32(labels, 4);
  if (image_count != label_count) {
    throw CodecError(CodecError::Kind::Malformed, "IDX image/label counts differ");
  }
  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  if (images.size() < 16 + static_cast<std::size_t>(image_count) * dim) {
    throw CodecError(CodecError::Kind::Truncated, "IDX image payload truncated");
  }
  if (labels.size() < 8 + label_count) {
    throw CodecError(CodecError::Kind::Truncated, "IDX label payload truncated");
  }

  std::size_t take = image_count;
  if (limit != 0) take = std::min<std::size_t>(limit, take);

  Dataset data;
  data.feature_dim = static_cast<int>(dim);
  data.class_count = 10;
  data.features.reserve(take * dim);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < take; ++i) {
    const std::uint8_t* px = images.data() + 16 + i * dim;
    for (std::size_t k = 0; k < dim; ++k) x[k] = static_cast<double>(px[k]) / 255.0;
    const int label = labels[8 + i];
    if (label > 9) {
      throw CodecError(CodecError::Kind::Malformed, "IDX label out of range");
    }
    data.push(x, label);
  }
  return data;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t limit) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);
  return parse_idx(images, labels, limit);
}

}  // namespace blindfl::train
