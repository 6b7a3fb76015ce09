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

#ifndef BLINDFL_SEGMENTATION_HPP
#define BLINDFL_SEGMENTATION_HPP

#include <cstdint>
#include <vector>

#include "blindfl/fhe/backend.hpp"
#include "blindfl/model.hpp"
#include "blindfl/rng.hpp"

namespace blindfl::seg {

/// c x M binary assignment of parameter matrices to clients. Row i lists the
/// matrices client i must upload; every column collects at least p
/// contributions.
struct RequestMatrix {
  std::vector<std::vector<std::uint8_t>> rows;  ///< c rows of M zero/one flags
  int coverage = 0;   ///< p: contributions required per global matrix
  int quota = 0;      ///< N: ones guaranteed per row

  int client_count() const { return static_cast<int>(rows.size()); }
  int matrix_count() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }

  int row_sum(int i) const;
  int column_sum(int j) const;

  /// Throws InvalidArgument if any structural invariant fails.
  void validate() const;

  /// All-ones matrix: segmentation disabled, every client sends everything.
  static RequestMatrix full(int matrix_count, int client_count);
};

/// N = ceil(M * p / c): how many matrices each client sends back.
int compute_quota(int matrix_count, int coverage, int client_count);

/// Builds a request matrix: the first row is a uniform random N-subset, each
/// later row greedily fills the currently least-covered columns (ties broken
/// uniformly at random, restricted to columns still unset in that row). A
/// final repair pass tops up any column short of p by setting it in the row
/// with the smallest row sum among rows lacking it. Deterministic per seed.
RequestMatrix generate_request_matrix(int matrix_count, int client_count,
                                      int coverage, Rng& rng);

/// Matrices one client uploads for one round, plus its training-set size.
struct ClientResponse {
  int client_id = 0;
  std::vector<ParamMatrix> matrices;  ///< carrying their 1-based model indices
  std::uint32_t examples = 0;         ///< t_i >= 1
};

/// Encrypted counterpart of ClientResponse.
struct EncryptedResponse {
  int client_id = 0;
  std::vector<fhe::EncryptedMatrix> matrices;
  std::uint32_t examples = 0;
};

/// Selects the matrices flagged by `row` out of `model`, preserving their
/// original indices.
ClientResponse build_response(const ModelParams& model,
                              const std::vector<std::uint8_t>& row,
                              std::uint32_t examples, int client_id = 0);

/// t-weighted mean per column over exactly the clients with R[i][j] = 1.
/// Accumulation follows ascending client id so results are schedule
/// independent; the division is carried out as multiplication by 1/sum(t)
/// to mirror the encrypted pipeline bit for bit.
ModelParams aggregate_plain(const std::vector<ClientResponse>& responses,
                            const RequestMatrix& request);

struct EncryptedModel {
  std::vector<fhe::EncryptedMatrix> matrices;
};

/// Homomorphic version of aggregate_plain: sum of ct * t followed by one
/// plaintext multiplication by 1/sum(t). Consumes two levels.
EncryptedModel aggregate_encrypted(const fhe::FheBackend& backend,
                                   const std::vector<EncryptedResponse>& responses,
                                   const RequestMatrix& request);

/// Decrypts every matrix of an aggregated model.
ModelParams decrypt_model(const fhe::FheBackend& backend, const fhe::SecretKey& sk,
                          const EncryptedModel& em);

}  // namespace blindfl::seg

#endif  // BLINDFL_SEGMENTATION_HPP
