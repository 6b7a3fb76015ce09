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

#include "blindfl/runtime/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "blindfl/errors.hpp"

namespace blindfl::rt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field '" + path + "': " + what);
}

/// Rejects keys outside the allowed set so typos fail fast.
void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) fail(path + "." + key, "unknown key");
  }
}

template <typename T>
T get_or(const json& obj, const std::string& path, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(path + "." + key, e.what());
  }
}

train::Activation parse_activation(const json& obj, const std::string& path) {
  const std::string name = get_or<std::string>(obj, path, "activation", "tanh");
  if (name == "tanh") return train::Activation::Tanh;
  if (name == "relu") return train::Activation::Relu;
  fail(path + ".activation", "must be 'tanh' or 'relu'");
}

json parse_root(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  if (!root.contains("schema_version")) {
    throw ConfigError("config is missing schema_version");
  }
  if (root.at("schema_version") != 1) {
    throw ConfigError("unsupported schema_version (expected 1)");
  }
  return root;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const char* to_string(RunType t) {
  switch (t) {
    case RunType::StandardFl: return "standard_fl";
    case RunType::FlFhe: return "fl_fhe";
    case RunType::FlCms: return "fl_cms";
    case RunType::BlindFl: return "blindfl";
  }
  return "unknown";
}

const char* to_string(FheMode m) {
  switch (m) {
    case FheMode::Off: return "off";
    case FheMode::Oracle: return "oracle";
    case FheMode::Ckks: return "ckks";
  }
  return "unknown";
}

RunType FederationConfig::run_type() const {
  const bool fhe_on = fhe_mode != FheMode::Off;
  if (fhe_on && segmentation) return RunType::BlindFl;
  if (fhe_on) return RunType::FlFhe;
  if (segmentation) return RunType::FlCms;
  return RunType::StandardFl;
}

void FederationConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (total_clients < 2) throw ConfigError("total clients C must be >= 2");
  if (selected_clients < 2 || selected_clients > total_clients) {
    throw ConfigError("selected clients c must satisfy 2 <= c <= C");
  }
  if (segmentation && (coverage < 1 || coverage > selected_clients)) {
    throw ConfigError("coverage p must satisfy 1 <= p <= c");
  }
  if (fhe_mode != FheMode::Off) fhe_params.validate();
  if (hidden_widths.empty()) throw ConfigError("need at least one hidden layer");
  for (int w : hidden_widths) {
    if (w < 1) throw ConfigError("hidden widths must be positive");
  }
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (learning_rate <= 0.0) throw ConfigError("learning rate must be positive");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (test_fraction < 0.0 || test_fraction >= 1.0) {
    throw ConfigError("test fraction must be in [0, 1)");
  }
  if (frame_cap < kFrameOverheadBytes + kMatrixHeaderBytes) {
    throw ConfigError("frame cap is too small for any payload");
  }
  if (dataset.kind == DatasetSource::Kind::Blobs) {
    if (dataset.blobs.samples < total_clients) {
      throw ConfigError("dataset smaller than the client count");
    }
  } else if (dataset.images_path.empty() || dataset.labels_path.empty()) {
    throw ConfigError("idx dataset needs images and labels paths");
  }
}

FederationConfig FederationConfig::from_json_text(const std::string& text) {
  const json root = parse_root(text);
  check_keys(root, "$",
             {"schema_version", "seed", "rounds", "clients", "segmentation", "fhe",
              "training", "dataset", "transport", "frame_cap_bytes", "deterministic",
              "parallel_clients"});

  FederationConfig cfg;
  cfg.seed = get_or<std::uint64_t>(root, "$", "seed", cfg.seed);
  cfg.rounds = get_or<int>(root, "$", "rounds", cfg.rounds);
  cfg.deterministic = get_or<bool>(root, "$", "deterministic", cfg.deterministic);
  cfg.parallel_clients = get_or<bool>(root, "$", "parallel_clients", cfg.parallel_clients);
  cfg.frame_cap = get_or<std::uint64_t>(root, "$", "frame_cap_bytes", cfg.frame_cap);
  cfg.segmentation = get_or<bool>(root, "$", "segmentation", cfg.segmentation);

  if (root.contains("clients")) {
    const json& c = root.at("clients");
    check_keys(c, "$.clients", {"total", "selected", "coverage"});
    cfg.total_clients = get_or<int>(c, "$.clients", "total", cfg.total_clients);
    cfg.selected_clients =
        get_or<int>(c, "$.clients", "selected", cfg.total_clients);
    cfg.coverage = get_or<int>(c, "$.clients", "coverage",
                               (cfg.selected_clients + 1) / 2);
  }

  if (root.contains("fhe")) {
    const json& f = root.at("fhe");
    check_keys(f, "$.fhe",
               {"backend", "ring_dim", "scale_log2", "modulus_chain_bits", "security"});
    const std::string backend = get_or<std::string>(f, "$.fhe", "backend", "ckks");
    if (backend == "off") {
      cfg.fhe_mode = FheMode::Off;
    } else if (backend == "oracle") {
      cfg.fhe_mode = FheMode::Oracle;
      cfg.fhe_params.scheme = fhe::Scheme::Oracle;
    } else if (backend == "ckks") {
      cfg.fhe_mode = FheMode::Ckks;
      cfg.fhe_params.scheme = fhe::Scheme::Ckks;
    } else {
      fail("$.fhe.backend", "must be 'off', 'oracle' or 'ckks'");
    }
    cfg.fhe_params.ring_dim =
        get_or<std::uint32_t>(f, "$.fhe", "ring_dim", cfg.fhe_params.ring_dim);
    cfg.fhe_params.scale_log2 =
        get_or<std::uint32_t>(f, "$.fhe", "scale_log2", cfg.fhe_params.scale_log2);
    cfg.fhe_params.modulus_chain_bits = get_or<std::vector<int>>(
        f, "$.fhe", "modulus_chain_bits", cfg.fhe_params.modulus_chain_bits);
    const std::string security = get_or<std::string>(f, "$.fhe", "security", "test");
    if (security == "production") {
      cfg.fhe_params.security = fhe::SecurityNote::Production;
    } else if (security == "test") {
      cfg.fhe_params.security = fhe::SecurityNote::Test;
    } else {
      fail("$.fhe.security", "must be 'production' or 'test'");
    }
  }

  if (root.contains("training")) {
    const json& t = root.at("training");
    check_keys(t, "$.training",
               {"hidden", "activation", "epochs", "learning_rate", "batch_size",
                "test_fraction"});
    cfg.hidden_widths =
        get_or<std::vector<int>>(t, "$.training", "hidden", cfg.hidden_widths);
    cfg.activation = parse_activation(t, "$.training");
    cfg.epochs = get_or<int>(t, "$.training", "epochs", cfg.epochs);
    cfg.learning_rate =
        get_or<double>(t, "$.training", "learning_rate", cfg.learning_rate);
    cfg.batch_size = get_or<int>(t, "$.training", "batch_size", cfg.batch_size);
    cfg.test_fraction =
        get_or<double>(t, "$.training", "test_fraction", cfg.test_fraction);
  }

  if (root.contains("dataset")) {
    const json& d = root.at("dataset");
    check_keys(d, "$.dataset",
               {"type", "samples", "features", "classes", "separation", "noise",
                "images", "labels", "limit"});
    const std::string type = get_or<std::string>(d, "$.dataset", "type", "blobs");
    if (type == "blobs") {
      cfg.dataset.kind = DatasetSource::Kind::Blobs;
      cfg.dataset.blobs.samples =
          get_or<int>(d, "$.dataset", "samples", cfg.dataset.blobs.samples);
      cfg.dataset.blobs.features =
          get_or<int>(d, "$.dataset", "features", cfg.dataset.blobs.features);
      cfg.dataset.blobs.classes =
          get_or<int>(d, "$.dataset", "classes", cfg.dataset.blobs.classes);
      cfg.dataset.blobs.separation =
          get_or<double>(d, "$.dataset", "separation", cfg.dataset.blobs.separation);
      cfg.dataset.blobs.noise =
          get_or<double>(d, "$.dataset", "noise", cfg.dataset.blobs.noise);
    } else if (type == "idx") {
      cfg.dataset.kind = DatasetSource::Kind::Idx;
      cfg.dataset.images_path = get_or<std::string>(d, "$.dataset", "images", "");
      cfg.dataset.labels_path = get_or<std::string>(d, "$.dataset", "labels", "");
      cfg.dataset.limit = get_or<std::size_t>(d, "$.dataset", "limit", 0);
    } else {
      fail("$.dataset.type", "must be 'blobs' or 'idx'");
    }
  }

  if (root.contains("transport")) {
    const json& t = root.at("transport");
    check_keys(t, "$.transport", {"type", "port"});
    const std::string type = get_or<std::string>(t, "$.transport", "type", "in_process");
    if (type == "in_process") {
      cfg.transport = TransportKind::InProcess;
    } else if (type == "socket") {
      cfg.transport = TransportKind::Socket;
      cfg.socket_port = get_or<std::uint16_t>(t, "$.transport", "port", 0);
    } else {
      fail("$.transport.type", "must be 'in_process' or 'socket'");
    }
  }

  cfg.validate();
  return cfg;
}

FederationConfig FederationConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path));
}

void AttackConfig::validate() const {
  if (trials < 1) throw ConfigError("attack trials must be >= 1");
  if (widths.size() < 2) throw ConfigError("attack model needs >= 2 widths");
  for (int w : widths) {
    if (w < 1) throw ConfigError("attack model widths must be positive");
  }
  if (data_stddev <= 0.0) throw ConfigError("data stddev must be positive");
}

AttackConfig AttackConfig::from_json_text(const std::string& text) {
  const json root = parse_root(text);
  check_keys(root, "$", {"schema_version", "seed", "trials", "model", "data"});
  AttackConfig cfg;
  cfg.seed = get_or<std::uint64_t>(root, "$", "seed", cfg.seed);
  cfg.trials = get_or<int>(root, "$", "trials", cfg.trials);
  if (root.contains("model")) {
    const json& m = root.at("model");
    check_keys(m, "$.model", {"widths", "activation"});
    cfg.widths = get_or<std::vector<int>>(m, "$.model", "widths", cfg.widths);
    cfg.activation = parse_activation(m, "$.model");
  }
  if (root.contains("data")) {
    const json& d = root.at("data");
    check_keys(d, "$.data", {"mean", "stddev"});
    cfg.data_mean = get_or<double>(d, "$.data", "mean", cfg.data_mean);
    cfg.data_stddev = get_or<double>(d, "$.data", "stddev", cfg.data_stddev);
  }
  cfg.validate();
  return cfg;
}

AttackConfig AttackConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path));
}

}  // namespace blindfl::rt
