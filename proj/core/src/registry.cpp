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

#include "blindfl/registry.hpp"

#include <fstream>
#include <sstream>

#include "blindfl/errors.hpp"

namespace blindfl {

namespace {

std::vector<int> parse_shape(const std::string& token, int line_no) {
  std::vector<int> shape;
  std::string dim;
  std::istringstream ss(token);
  while (std::getline(ss, dim, 'x')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(dim, &pos);
      if (pos != dim.size() || v <= 0) throw std::invalid_argument(dim);
      shape.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("registry line " + std::to_string(line_no) +
                            ": bad shape token '" + token + "'");
    }
  }
  if (shape.empty()) {
    throw InvalidArgument("registry line " + std::to_string(line_no) + ": empty shape");
  }
  return shape;
}

Role parse_role(const std::string& token, int line_no) {
  if (token == "weight") return Role::Weight;
  if (token == "bias") return Role::Bias;
  throw InvalidArgument("registry line " + std::to_string(line_no) +
                        ": role must be 'weight' or 'bias', got '" + token + "'");
}

}  // namespace

std::size_t ShapeRegistry::Entry::param_count() const {
  std::size_t p = 1;
  for (int d : shape) p *= static_cast<std::size_t>(d);
  return p;
}

std::size_t ShapeRegistry::total_params() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.param_count();
  return n;
}

std::size_t ShapeRegistry::total_bytes() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.byte_size();
  return n;
}

ModelParams ShapeRegistry::zero_model() const {
  ModelParams model;
  model.matrices.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ParamMatrix m;
    m.index = static_cast<int>(i) + 1;
    m.shape = entries[i].shape;
    m.role = entries[i].role;
    m.values.assign(entries[i].param_count(), 0.0);
    model.matrices.push_back(std::move(m));
  }
  return model;
}

ShapeRegistry ShapeRegistry::parse(std::istream& in, std::string registry_name) {
  ShapeRegistry reg;
  reg.name = std::move(registry_name);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string name_tok, shape_tok, role_tok, extra;
    if (!(ss >> name_tok)) continue;       // blank line
    if (name_tok[0] == '#') continue;      // comment
    if (!(ss >> shape_tok >> role_tok)) {
      throw InvalidArgument("registry line " + std::to_string(line_no) +
                            ": expected 'name shape role'");
    }
    if (ss >> extra) {
      throw InvalidArgument("registry line " + std::to_string(line_no) +
                            ": trailing token '" + extra + "'");
    }
    Entry e;
    e.name = name_tok;
    e.shape = parse_shape(shape_tok, line_no);
    e.role = parse_role(role_tok, line_no);
    reg.entries.push_back(std::move(e));
  }
  if (reg.entries.empty()) {
    throw InvalidArgument("registry '" + reg.name + "' has no entries");
  }
  return reg;
}

ShapeRegistry ShapeRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open shape registry: " + path);
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) {
    name = name.substr(slash + 1);
  }
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) {
    name = name.substr(0, dot);
  }
  return parse(in, name);
}

const ShapeRegistry& ShapeRegistry::lenet5() {
  static const ShapeRegistry reg = [] {
    ShapeRegistry r;
    r.name = "lenet5";
    r.entries = {
        {"conv1.weight", {6, 1, 5, 5}, Role::Weight},
        {"conv1.bias", {6}, Role::Bias},
        {"conv2.weight", {16, 6, 5, 5}, Role::Weight},
        {"conv2.bias", {16}, Role::Bias},
        {"conv3.weight", {120, 16, 5, 5}, Role::Weight},
        {"conv3.bias", {120}, Role::Bias},
        {"fc1.weight", {84, 5880}, Role::Weight},
        {"fc1.bias", {84}, Role::Bias},
        {"fc2.weight", {10, 84}, Role::Weight},
        {"fc2.bias", {10}, Role::Bias},
    };
    return r;
  }();
  return reg;
}

}  // namespace blindfl
