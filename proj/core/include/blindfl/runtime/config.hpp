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

#ifndef BLINDFL_RUNTIME_CONFIG_HPP
#define BLINDFL_RUNTIME_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "blindfl/fhe/params.hpp"
#include "blindfl/runtime/codec.hpp"
#include "blindfl/training.hpp"

namespace blindfl::rt {

enum class FheMode : std::uint8_t { Off = 0, Oracle = 1, Ckks = 2 };

/// The four experiment flavors, derived from the fhe/segmentation switches.
enum class RunType : std::uint8_t { StandardFl, FlFhe, FlCms, BlindFl };

const char* to_string(RunType t);
const char* to_string(FheMode m);

struct DatasetSource {
  enum class Kind : std::uint8_t { Blobs = 0, Idx = 1 };
  Kind kind = Kind::Blobs;
  train::BlobsSpec blobs;
  std::string images_path;
  std::string labels_path;
  std::size_t limit = 0;
};

/// Everything a simulation run needs. Mirrors the JSON schema 1 config file
/// (see README); unknown keys in the file are hard errors.
struct FederationConfig {
  std::uint64_t seed = 1;
  int rounds = 1;
  int total_clients = 2;     ///< C
  int selected_clients = 2;  ///< c <= C, selected per round
  int coverage = 2;          ///< p; ignored (forced to c) when segmentation is off
  bool segmentation = true;
  FheMode fhe_mode = FheMode::Ckks;
  fhe::FheParams fhe_params = fhe::FheParams::test_context();

  std::vector<int> hidden_widths = {32};
  train::Activation activation = train::Activation::Tanh;
  int epochs = 1;
  double learning_rate = 0.05;
  int batch_size = 32;
  double test_fraction = 0.2;

  DatasetSource dataset;

  enum class TransportKind : std::uint8_t { InProcess = 0, Socket = 1 };
  TransportKind transport = TransportKind::InProcess;
  std::uint16_t socket_port = 0;  ///< 0 = ephemeral

  std::uint64_t frame_cap = kDefaultFrameCap;
  bool deterministic = false;    ///< zero wall-time metrics columns
  bool parallel_clients = true;  ///< train/encrypt clients on a thread pool

  /// Effective coverage: p when segmentation is on, c otherwise.
  int effective_coverage() const { return segmentation ? coverage : selected_clients; }
  RunType run_type() const;

  void validate() const;

  /// Parses the schema-1 JSON text. Unknown keys, missing schema_version or
  /// domain violations throw ConfigError with a field path.
  static FederationConfig from_json_text(const std::string& text);
  static FederationConfig load(const std::string& path);
};

/// Attack-sweep configuration (schema 1), for the `attack` subcommand.
struct AttackConfig {
  std::uint64_t seed = 1;
  int trials = 15;
  std::vector<int> widths = {64, 32, 24, 16, 10};
  train::Activation activation = train::Activation::Tanh;
  double data_mean = 0.0;
  double data_stddev = 0.5;

  void validate() const;
  static AttackConfig from_json_text(const std::string& text);
  static AttackConfig load(const std::string& path);
};

}  // namespace blindfl::rt

#endif  // BLINDFL_RUNTIME_CONFIG_HPP
