// Copyright 2026 The SEMDR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semdr/types.hpp"

namespace semdr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Sparse vector in the hashed feature space; indices strictly increasing.
struct SparseFeatures {
  std::vector<uint32_t> index;
  std::vector<double> value;

  size_t nnz() const { return index.size(); }
  double norm() const;
};

// FNV-1a, 64-bit, over raw bytes.
uint64_t fnv1a64(std::string_view bytes);
size_t hash_ngram(std::string_view ngram, size_t buckets);

// Joins the three clue strings with U+001F.
std::string join_clues(const ClueSet& clues);

struct HashedEncoderConfig {
  size_t buckets = 4096;
  int ngram_min = 1;
  int ngram_max = 3;
  size_t dim = 256;

  void validate() const;
};

struct DropoutSpec {
  double rate = 0.1;
  uint64_t seed = 0;
};

// Inverted dropout on hashed features: each stored entry survives with
// probability 1 - rate and is then scaled by 1 / (1 - rate).
SparseFeatures apply_dropout_noise(const SparseFeatures& features, const DropoutSpec& spec);

// Character n-gram hashing followed by a trainable affine map and tanh.
class HashedEncoder {
 public:
  HashedEncoder(HashedEncoderConfig config, Mat projection, Vec bias);

  // Glorot-uniform projection from the seeded generator, zero bias.
  static HashedEncoder initialize(const HashedEncoderConfig& config, uint64_t seed);

  const HashedEncoderConfig& config() const { return config_; }
  size_t dim() const { return config_.dim; }
  const Mat& projection() const { return projection_; }
  const Vec& bias() const { return bias_; }
  Mat& projection() { return projection_; }
  Vec& bias() { return bias_; }

  // Counts of all n-grams (n in [ngram_min, ngram_max], over scalar values),
  // hashed into buckets and L2-normalized. Empty text gives a zero vector.
  SparseFeatures featurize(std::string_view text) const;

  // tanh(projection * features + bias)
  Vec encode_features(const SparseFeatures& features) const;
  Vec encode_text(std::string_view text) const;
  Vec encode_fact(const ClueSet& clues) const;
  Vec encode_label(std::string_view surface_text) const;

  // Given the output y of encode_features and dL/dy, accumulates dL/dP and
  // dL/db.
  void accumulate_gradient(const SparseFeatures& features, const Vec& output,
                           const Vec& d_output, Mat& d_projection, Vec& d_bias) const;

 private:
  HashedEncoderConfig config_;
  Mat projection_;  // dim x buckets
  Vec bias_;
};

// Externally computed vectors keyed by case id, and by "<task>/<label-id>"
// for label texts.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(size_t dim) : dim_(dim) {}

  // TSV: "#dim <D>" header, then "<id>\t<v1> <v2> ... <vD>".
  static EmbeddingTable load(const std::filesystem::path& path);

  size_t dim() const { return dim_; }
  size_t size() const { return rows_.size(); }
  void insert(const std::string& id, Vec v);
  const Vec& at(const std::string& id) const;
  bool contains(const std::string& id) const { return rows_.contains(id); }

  static std::string label_key(Task task, LabelId id);

 private:
  size_t dim_;
  std::map<std::string, Vec> rows_;
};

// The rest of the pipeline sees only dim / encode_fact / encode_label, so the
// two backends are interchangeable.
class Encoder {
 public:
  explicit Encoder(HashedEncoder hashed) : backend_(std::move(hashed)) {}
  explicit Encoder(EmbeddingTable table) : backend_(std::move(table)) {}

  size_t dim() const;
  bool is_hashed() const { return std::holds_alternative<HashedEncoder>(backend_); }

  // Hashed backend: encodes the case's clue set (DataError if missing).
  // Precomputed backend: the stored vector for the case id.
  Vec encode_fact(const CriminalCase& c) const;
  Vec encode_label(Task task, LabelId id, const std::string& surface_text) const;

  // Null for the precomputed backend.
  HashedEncoder* trainable();
  const HashedEncoder* trainable() const;
  const EmbeddingTable* table() const;

 private:
  std::variant<HashedEncoder, EmbeddingTable> backend_;
};

}  // namespace semdr
