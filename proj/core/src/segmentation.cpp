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

#include "blindfl/segmentation.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "blindfl/errors.hpp"

namespace blindfl::seg {

namespace {

void check_parameter_domain(int matrix_count, int coverage, int client_count) {
  if (matrix_count < 1) throw InvalidArgument("matrix count M must be >= 1");
  if (client_count < 2) throw InvalidArgument("client count c must be >= 2");
  if (coverage < 1 || coverage > client_count) {
    throw InvalidArgument("coverage p must satisfy 1 <= p <= c");
  }
}

}  // namespace

int RequestMatrix::row_sum(int i) const {
  int s = 0;
  for (std::uint8_t b : rows[i]) s += b;
  return s;
}

int RequestMatrix::column_sum(int j) const {
  int s = 0;
  for (const auto& row : rows) s += row[j];
  return s;
}

void RequestMatrix::validate() const {
  check_parameter_domain(matrix_count(), coverage, client_count());
  for (int i = 0; i < client_count(); ++i) {
    if (static_cast<int>(rows[i].size()) != matrix_count()) {
      throw InvalidArgument("ragged request matrix");
    }
    for (std::uint8_t b : rows[i]) {
      if (b > 1) throw InvalidArgument("request matrix entries must be 0/1");
    }
    if (row_sum(i) < quota) {
      throw InvalidArgument("request row " + std::to_string(i) +
                            " below the per-client quota");
    }
  }
  for (int j = 0; j < matrix_count(); ++j) {
    if (column_sum(j) < coverage) {
      throw InvalidArgument("request column " + std::to_string(j) +
                            " below the coverage requirement");
    }
  }
}

RequestMatrix RequestMatrix::full(int matrix_count, int client_count) {
  RequestMatrix r;
  r.rows.assign(client_count, std::vector<std::uint8_t>(matrix_count, 1));
  r.coverage = client_count;
  r.quota = matrix_count;
  return r;
}

int compute_quota(int matrix_count, int coverage, int client_count) {
  check_parameter_domain(matrix_count, coverage, client_count);
  const long long num = static_cast<long long>(matrix_count) * coverage;
  return static_cast<int>((num + client_count - 1) / client_count);
}

RequestMatrix generate_request_matrix(int matrix_count, int client_count,
                                      int coverage, Rng& rng) {
  const int quota = compute_quota(matrix_count, coverage, client_count);
  if (quota > matrix_count) {
    throw InvalidArgument("infeasible parameters: per-client quota exceeds M");
  }

  RequestMatrix r;
  r.coverage = coverage;
  r.quota = quota;
  r.rows.assign(client_count, std::vector<std::uint8_t>(matrix_count, 0));

  // Row 1: uniform random N-subset (partial Fisher-Yates).
  {
    std::vector<int> idx(matrix_count);
    for (int j = 0; j < matrix_count; ++j) idx[j] = j;
    for (int k = 0; k < quota; ++k) {
      const int pick = k + static_cast<int>(rng.below(matrix_count - k));
      std::swap(idx[k], idx[pick]);
      r.rows[0][idx[k]] = 1;
    }
  }

  // Later rows: fill the currently least-requested columns. Each row may
  // select a column only once, and ties break uniformly at random.
  std::vector<int> column_sums(matrix_count);
  for (int j = 0; j < matrix_count; ++j) column_sums[j] = r.rows[0][j];

  std::vector<int> tied;
  for (int i = 1; i < client_count; ++i) {
    for (int k = 0; k < quota; ++k) {
      int min_sum = std::numeric_limits<int>::max();
      for (int j = 0; j < matrix_count; ++j) {
        if (r.rows[i][j]) continue;
        min_sum = std::min(min_sum, column_sums[j]);
      }
      tied.clear();
      for (int j = 0; j < matrix_count; ++j) {
        if (!r.rows[i][j] && column_sums[j] == min_sum) tied.push_back(j);
      }
      const int j = tied[rng.below(tied.size())];
      r.rows[i][j] = 1;
      ++column_sums[j];
    }
  }

  // Repair pass: guarantee every column reaches p contributions.
  for (int j = 0; j < matrix_count; ++j) {
    while (column_sums[j] < coverage) {
      int best_row = -1;
      int best_sum = std::numeric_limits<int>::max();
      tied.clear();
      for (int i = 0; i < client_count; ++i) {
        if (r.rows[i][j]) continue;
        const int s = r.row_sum(i);
        if (s < best_sum) {
          best_sum = s;
          tied.clear();
          tied.push_back(i);
        } else if (s == best_sum) {
          tied.push_back(i);
        }
      }
      best_row = tied[rng.below(tied.size())];
      r.rows[best_row][j] = 1;
      ++column_sums[j];
    }
  }

  return r;
}

ClientResponse build_response(const ModelParams& model,
                              const std::vector<std::uint8_t>& row,
                              std::uint32_t examples, int client_id) {
  if (row.size() != model.matrices.size()) {
    throw InvalidArgument("request row length does not match the model");
  }
  if (examples < 1) throw InvalidArgument("training example count must be >= 1");
  ClientResponse resp;
  resp.client_id = client_id;
  resp.examples = examples;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j]) resp.matrices.push_back(model.matrices[j]);
  }
  return resp;
}

namespace {

/// Sorts response pointers by ascending client id so the reduction order is
/// fixed no matter how responses arrived. Client ids index request rows
/// 1-based.
template <typename Response>
std::vector<const Response*> by_client_id(const std::vector<Response>& responses,
                                          int client_count) {
  std::vector<const Response*> ordered;
  ordered.reserve(responses.size());
  for (const auto& r : responses) {
    if (r.client_id < 1 || r.client_id > client_count) {
      throw InvalidArgument("response client id " + std::to_string(r.client_id) +
                            " is outside 1..c");
    }
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->client_id < b->client_id; });
  return ordered;
}

template <typename Matrix, typename Response>
const Matrix* find_matrix(const Response& resp, int index) {
  for (const auto& m : resp.matrices) {
    if (m.index == index) return &m;
  }
  return nullptr;
}

}  // namespace

ModelParams aggregate_plain(const std::vector<ClientResponse>& responses,
                            const RequestMatrix& request) {
  request.validate();
  const int M = request.matrix_count();
  auto ordered = by_client_id(responses, request.client_count());

  ModelParams global;
  global.matrices.reserve(M);
  for (int j = 1; j <= M; ++j) {
    std::vector<double> sum;
    double total_weight = 0.0;
    const ParamMatrix* first = nullptr;
    for (const auto* resp : ordered) {
      if (!request.rows[resp->client_id - 1][j - 1]) continue;
      const ParamMatrix* m = find_matrix<ParamMatrix>(*resp, j);
      if (m == nullptr) {
        throw InvalidArgument("client " + std::to_string(resp->client_id) +
                              " is missing requested matrix " + std::to_string(j));
      }
      if (first == nullptr) {
        first = m;
        sum.assign(m->values.size(), 0.0);
      } else if (m->shape != first->shape) {
        throw ShapeMismatch("matrix " + std::to_string(j) +
                            " has inconsistent shapes across clients");
      }
      const double t = static_cast<double>(resp->examples);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += m->values[k] * t;
      total_weight += t;
    }
    if (first == nullptr) {
      throw InvalidArgument("no contribution for matrix " + std::to_string(j));
    }
    const double inv = 1.0 / total_weight;
    ParamMatrix out;
    out.index = j;
    out.shape = first->shape;
    out.role = first->role;
    out.values.resize(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) out.values[k] = sum[k] * inv;
    global.matrices.push_back(std::move(out));
  }
  return global;
}

EncryptedModel aggregate_encrypted(const fhe::FheBackend& backend,
                                   const std::vector<EncryptedResponse>& responses,
                                   const RequestMatrix& request) {
  request.validate();
  const int M = request.matrix_count();
  auto ordered = by_client_id(responses, request.client_count());

  // All contributions must be encrypted under the same round's key.
  std::uint64_t round_id = 0;
  bool have_round = false;
  for (const auto* resp : ordered) {
    for (const auto& m : resp->matrices) {
      for (const auto& ct : m.chunks) {
        if (!have_round) {
          round_id = ct.round_id;
          have_round = true;
        } else if (ct.round_id != round_id) {
          throw RoundMismatch("responses span multiple key rounds");
        }
      }
    }
  }

  EncryptedModel global;
  global.matrices.reserve(M);
  for (int j = 1; j <= M; ++j) {
    std::vector<fhe::Ciphertext> acc;
    const fhe::EncryptedMatrix* first = nullptr;
    double total_weight = 0.0;
    for (const auto* resp : ordered) {
      if (!request.rows[resp->client_id - 1][j - 1]) continue;
      const fhe::EncryptedMatrix* m = find_matrix<fhe::EncryptedMatrix>(*resp, j);
      if (m == nullptr) {
        throw InvalidArgument("client " + std::to_string(resp->client_id) +
                              " is missing requested matrix " + std::to_string(j));
      }
      if (first == nullptr) {
        first = m;
      } else if (m->chunks.size() != first->chunks.size()) {
        throw InvalidArgument("chunk count mismatch across clients for matrix " +
                              std::to_string(j));
      } else if (m->shape != first->shape) {
        throw ShapeMismatch("matrix " + std::to_string(j) +
                            " has inconsistent shapes across clients");
      }
      const double t = static_cast<double>(resp->examples);
      for (std::size_t c = 0; c < m->chunks.size(); ++c) {
        fhe::Ciphertext weighted = backend.mul_plain(m->chunks[c], t);
        if (acc.size() <= c) {
          acc.push_back(std::move(weighted));
        } else {
          acc[c] = backend.add(acc[c], weighted);
        }
      }
      total_weight += t;
    }
    if (first == nullptr) {
      throw InvalidArgument("no contribution for matrix " + std::to_string(j));
    }
    const double inv = 1.0 / total_weight;
    fhe::EncryptedMatrix out;
    out.index = j;
    out.shape = first->shape;
    out.role = first->role;
    out.chunks.reserve(acc.size());
    for (auto& ct : acc) out.chunks.push_back(backend.mul_plain(ct, inv));
    global.matrices.push_back(std::move(out));
  }
  return global;
}

ModelParams decrypt_model(const fhe::FheBackend& backend, const fhe::SecretKey& sk,
                          const EncryptedModel& em) {
  ModelParams model;
  model.matrices.reserve(em.matrices.size());
  for (const auto& m : em.matrices) {
    model.matrices.push_back(fhe::decrypt_matrix(backend, sk, m));
  }
  return model;
}

}  // namespace blindfl::seg
