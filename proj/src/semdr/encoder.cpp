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

#include "semdr/encoder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "semdr/errors.hpp"
#include "semdr/rng.hpp"
#include "semdr/text.hpp"

namespace semdr {

double SparseFeatures::norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return std::sqrt(s);
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

size_t hash_ngram(std::string_view ngram, size_t buckets) {
  if (ngram.empty()) throw ArgumentError("hash_ngram: empty n-gram");
  if (buckets == 0) throw ArgumentError("hash_ngram: zero buckets");
  return static_cast<size_t>(fnv1a64(ngram) % buckets);
}

std::string join_clues(const ClueSet& clues) {
  std::string out;
  out.reserve(clues.motivation.size() + clues.action.size() + clues.harm.size() + 2);
  out += clues.motivation;
  out += '\x1f';
  out += clues.action;
  out += '\x1f';
  out += clues.harm;
  return out;
}

void HashedEncoderConfig::validate() const {
  if (buckets == 0) throw ConfigError("encoder: buckets must be positive");
  if (dim == 0) throw ConfigError("encoder: dim must be positive");
  if (ngram_min < 1 || ngram_min > ngram_max) {
    throw ConfigError("encoder: need 1 <= ngram_min <= ngram_max");
  }
}

SparseFeatures apply_dropout_noise(const SparseFeatures& features, const DropoutSpec& spec) {
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) {
    throw ArgumentError("dropout rate must lie in [0, 1)");
  }
  if (spec.rate == 0.0) return features;
  Rng rng(spec.seed);
  const double keep = 1.0 - spec.rate;
  SparseFeatures out;
  for (size_t k = 0; k < features.nnz(); ++k) {
    if (rng.uniform_real() < keep) {
      out.index.push_back(features.index[k]);
      out.value.push_back(features.value[k] / keep);
    }
  }
  return out;
}

HashedEncoder::HashedEncoder(HashedEncoderConfig config, Mat projection, Vec bias)
    : config_(config), projection_(std::move(projection)), bias_(std::move(bias)) {
  config_.validate();
  if (static_cast<size_t>(projection_.rows()) != config_.dim ||
      static_cast<size_t>(projection_.cols()) != config_.buckets ||
      static_cast<size_t>(bias_.size()) != config_.dim) {
    throw ArgumentError("HashedEncoder: parameter shapes do not match config");
  }
  if (!projection_.allFinite() || !bias_.allFinite()) {
    throw ArgumentError("HashedEncoder: non-finite parameters");
  }
}

HashedEncoder HashedEncoder::initialize(const HashedEncoderConfig& config, uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, 0xe9c0de));
  const double bound = std::sqrt(6.0 / static_cast<double>(config.buckets + config.dim));
  Mat projection(config.dim, config.buckets);
  // Column-major fill order: bucket by bucket.
  for (Eigen::Index j = 0; j < projection.cols(); ++j) {
    for (Eigen::Index i = 0; i < projection.rows(); ++i) {
      projection(i, j) = rng.uniform_real(-bound, bound);
    }
  }
  return HashedEncoder(config, std::move(projection), Vec::Zero(config.dim));
}

SparseFeatures HashedEncoder::featurize(std::string_view text) const {
  const std::vector<CodePoint> cps = decode_utf8(text);
  std::vector<uint32_t> hits;
  for (int n = config_.ngram_min; n <= config_.ngram_max; ++n) {
    const auto len = static_cast<size_t>(n);
    for (size_t i = 0; i + len <= cps.size(); ++i) {
      const size_t begin = cps[i].offset;
      const size_t end = cps[i + len - 1].offset + cps[i + len - 1].length;
      hits.push_back(static_cast<uint32_t>(hash_ngram(text.substr(begin, end - begin), config_.buckets)));
    }
  }
  std::sort(hits.begin(), hits.end());
  SparseFeatures out;
  for (size_t k = 0; k < hits.size();) {
    size_t run = k;
    while (run < hits.size() && hits[run] == hits[k]) ++run;
    out.index.push_back(hits[k]);
    out.value.push_back(static_cast<double>(run - k));
    k = run;
  }
  const double norm = out.norm();
  if (norm > 0.0) {
    for (double& v : out.value) v /= norm;
  }
  return out;
}

Vec HashedEncoder::encode_features(const SparseFeatures& features) const {
  Vec pre = bias_;
  for (size_t k = 0; k < features.nnz(); ++k) {
    pre.noalias() += features.value[k] * projection_.col(features.index[k]);
  }
  return pre.array().tanh().matrix();
}

Vec HashedEncoder::encode_text(std::string_view text) const { return encode_features(featurize(text)); }

Vec HashedEncoder::encode_fact(const ClueSet& clues) const { return encode_text(join_clues(clues)); }

Vec HashedEncoder::encode_label(std::string_view surface_text) const { return encode_text(surface_text); }

void HashedEncoder::accumulate_gradient(const SparseFeatures& features, const Vec& output,
                                        const Vec& d_output, Mat& d_projection,
                                        Vec& d_bias) const {
  const Vec d_pre = d_output.array() * (1.0 - output.array().square());
  d_bias += d_pre;
  for (size_t k = 0; k < features.nnz(); ++k) {
    d_projection.col(features.index[k]).noalias() += features.value[k] * d_pre;
  }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("#dim ", 0) != 0) {
    throw DataError(path.string() + ": first line must be \"#dim <D>\"");
  }
  size_t dim = 0;
  {
    const char* first = line.data() + 5;
    auto [ptr, ec] = std::from_chars(first, line.data() + line.size(), dim);
    if (ec != std::errc() || dim == 0) throw DataError(path.string() + ": bad #dim header");
  }
  EmbeddingTable table(dim);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected <id>\\t<values>");
    }
    Vec v(dim);
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    for (size_t k = 0; k < dim; ++k) {
      while (p < end && *p == ' ') ++p;
      auto [next, ec] = std::from_chars(p, end, v[static_cast<Eigen::Index>(k)]);
      if (ec != std::errc()) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(dim) + " values");
      }
      p = next;
    }
    while (p < end && *p == ' ') ++p;
    if (p != end) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": more than " +
                      std::to_string(dim) + " values");
    }
    const std::string id = line.substr(0, tab);
    if (table.contains(id)) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": duplicate id " + id);
    }
    table.insert(id, std::move(v));
  }
  return table;
}

void EmbeddingTable::insert(const std::string& id, Vec v) {
  if (static_cast<size_t>(v.size()) != dim_) {
    throw ArgumentError("embedding for " + id + " has wrong dimension");
  }
  if (!v.allFinite()) throw DataError("embedding for " + id + " is not finite");
  rows_[id] = std::move(v);
}

const Vec& EmbeddingTable::at(const std::string& id) const {
  auto it = rows_.find(id);
  if (it == rows_.end()) throw DataError("no precomputed embedding for \"" + id + "\"");
  return it->second;
}

std::string EmbeddingTable::label_key(Task task, LabelId id) {
  return std::string(task_name(task)) + "/" + std::to_string(id);
}

size_t Encoder::dim() const {
  return std::visit([](const auto& b) { return b.dim(); }, backend_);
}

Vec Encoder::encode_fact(const CriminalCase& c) const {
  if (const auto* h = std::get_if<HashedEncoder>(&backend_)) {
    if (!c.clues) throw DataError("case " + c.id + " has no clue set");
    return h->encode_fact(*c.clues);
  }
  return std::get<EmbeddingTable>(backend_).at(c.id);
}

Vec Encoder::encode_label(Task task, LabelId id, const std::string& surface_text) const {
  if (const auto* h = std::get_if<HashedEncoder>(&backend_)) return h->encode_label(surface_text);
  return std::get<EmbeddingTable>(backend_).at(EmbeddingTable::label_key(task, id));
}

HashedEncoder* Encoder::trainable() { return std::get_if<HashedEncoder>(&backend_); }
const HashedEncoder* Encoder::trainable() const { return std::get_if<HashedEncoder>(&backend_); }
const EmbeddingTable* Encoder::table() const { return std::get_if<EmbeddingTable>(&backend_); }

}  // namespace semdr
