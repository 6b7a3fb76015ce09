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

#ifndef BLINDFL_RUNTIME_METRICS_HPP
#define BLINDFL_RUNTIME_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace blindfl::rt {

/// Per-round accounting. Byte totals are exact sums of codec frame lengths;
/// wall times are zeroed when a run asks for deterministic output.
struct RoundMetrics {
  std::uint64_t round_id = 0;
  double mean_accuracy = 0.0;
  double agg_time_ms = 0.0;
  double enc_time_ms = 0.0;  ///< mean per participating client
  double dec_time_ms = 0.0;  ///< mean per receiving client
  double bytes_up_mean = 0.0;
  std::uint64_t bytes_up_max = 0;
  double bytes_down_mean = 0.0;

  std::vector<std::uint64_t> bytes_up_per_client;    ///< participants, id order
  std::vector<std::uint64_t> bytes_down_per_client;  ///< all clients, id order
  std::vector<double> accuracy_per_client;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const RoundMetrics& m);

/// Parses a metrics CSV (header required, the 8 standard columns). Throws
/// ConfigError on ragged rows or a foreign header.
std::vector<RoundMetrics> parse_metrics_csv(std::istream& in);

}  // namespace blindfl::rt

#endif  // BLINDFL_RUNTIME_METRICS_HPP
