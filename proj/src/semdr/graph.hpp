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
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "semdr/corpus.hpp"
#include "semdr/encoder.hpp"

namespace semdr {

// Node features are stored one node per row.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class NodeType : uint8_t { Fact, Label };

struct Node {
  NodeType type = NodeType::Fact;
  size_t case_index = 0;  // Fact: index into the training corpus
  Task task = Task::Charge;  // Label only
  LabelId label = 0;  // Label only
};

enum class RelationKind : uint8_t {
  FactToImprisonment,
  FactToCharge,  // "Base_charge_is"
  FactToArticle,
  LabelToLabel,
};

struct Relation {
  size_t src = 0;
  size_t dst = 0;
  RelationKind kind = RelationKind::FactToCharge;
  bool reverse = false;
};

// Transductive graph over training facts and every instrument label.
// Node order: facts in corpus order, then labels task by task in vocabulary
// order. Neighborhoods are sorted and include the node itself.
struct ReasoningGraph {
  std::vector<Node> nodes;
  std::vector<Relation> relations;
  std::vector<size_t> offsets;    // CSR row starts, size nodes + 1
  std::vector<size_t> neighbors;  // CSR columns
  RowMat features;                // nodes x dim, filled by init_features
  size_t fact_count = 0;
  std::array<size_t, kTaskCount> label_begin{};
  std::array<size_t, kTaskCount> label_count{};

  size_t size() const { return nodes.size(); }
  size_t edge_count() const { return neighbors.size(); }
  std::span<const size_t> neighborhood(size_t i) const {
    return {neighbors.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  size_t label_node(Task t, LabelId id) const { return label_begin[task_index(t)] + id; }
};

// One Fact node per case, one Label node per vocabulary entry. Edges: each
// fact with its gold label in every task, all label pairs within a task, and
// a self-loop on every node; each relation is stored with its reverse.
ReasoningGraph build_graph(const Corpus& train);

// Builds the neighbor lists from relations (plus self-loops).
void finalize_adjacency(ReasoningGraph& graph);

// Facts get encode_fact, labels encode_label of their surface text.
void init_features(ReasoningGraph& graph, const Encoder& encoder, const Corpus& train);

enum class HeadCombine : uint8_t { Concat, Average };

struct GatHead {
  Mat weight;     // head_dim x in_dim
  Vec attention;  // 2 * head_dim: [source part | neighbor part]
};

struct GatLayer {
  std::vector<GatHead> heads;
  HeadCombine combine = HeadCombine::Concat;

  size_t in_dim() const { return static_cast<size_t>(heads.front().weight.cols()); }
  size_t head_dim() const { return static_cast<size_t>(heads.front().weight.rows()); }
  size_t out_dim() const {
    return combine == HeadCombine::Concat ? head_dim() * heads.size() : head_dim();
  }
};

struct GatParams {
  std::vector<GatLayer> layers;
  double leaky_slope = 0.2;

  // Two layers: `heads` heads of width dim / heads concatenated, then `heads`
  // heads of width dim averaged. Glorot-uniform from the seeded generator.
  static GatParams initialize(size_t dim, size_t heads, uint64_t seed, double leaky_slope = 0.2);

  GatParams zeros_like() const;
  size_t parameter_count() const;
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  // Throws ArgumentError unless layer widths chain and the output has `dim`.
  void validate(size_t dim) const;
};

// LeakyReLU(attention . [ni || nj])
double edge_logit(const Vec& attention, const Vec& ni, const Vec& nj, double slope);

// Softmax of edge logits over the neighborhood of node i, where `projected`
// holds the head's projected node features (one node per row).
std::vector<double> attention_row(const RowMat& projected, const Vec& attention,
                                  std::span<const size_t> neighborhood, size_t i, double slope);

// ELU(sum_j alpha_j * projected_j)
Vec aggregate_node(const RowMat& projected, std::span<const double> alpha,
                   std::span<const size_t> neighborhood);

// Graph-level forms: `input` is the layer input (graph features for layer 0).
std::vector<double> attention_row(const ReasoningGraph& graph, const GatParams& params,
                                  size_t layer, size_t head, const RowMat& input, size_t i);
Vec aggregate_node(const ReasoningGraph& graph, const GatParams& params, size_t layer,
                   size_t head, const RowMat& input, size_t i);

struct HeadTrace {
  RowMat projected;            // nodes x head_dim
  std::vector<double> logit;   // per CSR edge, before LeakyReLU
  std::vector<double> alpha;   // per CSR edge
  RowMat pre_activation;       // nodes x head_dim
  RowMat output;               // ELU(pre_activation)
};

struct LayerTrace {
  RowMat input;
  std::vector<HeadTrace> heads;
  RowMat output;
};

struct GatTrace {
  std::vector<LayerTrace> layers;
  const RowMat& output() const { return layers.back().output; }
};

GatTrace gat_forward_trace(const ReasoningGraph& graph, const GatParams& params);

// Updated features for every node; DivergenceError on non-finite output.
RowMat gat_forward(const ReasoningGraph& graph, const GatParams& params);

// Backpropagates dL/d(output) through the recorded forward pass. Returns
// parameter gradients; writes dL/d(graph features) when `d_input` is set.
GatParams gat_backward(const ReasoningGraph& graph, const GatParams& params,
                       const GatTrace& trace, const RowMat& d_output, RowMat* d_input = nullptr);

// Rows of `features` belonging to the labels of `task`.
RowMat label_rows(const ReasoningGraph& graph, const RowMat& features, Task task);

}  // namespace semdr
