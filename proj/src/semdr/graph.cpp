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

#include "semdr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semdr/errors.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

constexpr uint64_t kGatInitStream = 0x9a7;

RelationKind fact_relation(Task t) {
  switch (t) {
    case Task::Imprisonment:
      return RelationKind::FactToImprisonment;
    case Task::Charge:
      return RelationKind::FactToCharge;
    case Task::Article:
      return RelationKind::FactToArticle;
  }
  return RelationKind::FactToCharge;
}

inline double leaky(double x, double slope) { return x > 0.0 ? x : slope * x; }
inline double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

void glorot_fill(Eigen::Ref<Mat> m, size_t fan_in, size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform_real(-bound, bound);
  }
}

// Forward pass of one head. Fills everything in `out`.
void head_forward(const ReasoningGraph& g, const GatHead& head, double slope, const RowMat& input,
                  HeadTrace& out) {
  const auto hd = head.weight.rows();
  out.projected = input * head.weight.transpose();
  const Vec src = out.projected * head.attention.head(hd);
  const Vec dst = out.projected * head.attention.tail(hd);
  out.logit.resize(g.edge_count());
  out.alpha.resize(g.edge_count());
  out.pre_activation.setZero(static_cast<Eigen::Index>(g.size()), hd);
  for (size_t i = 0; i < g.size(); ++i) {
    const size_t b = g.offsets[i];
    const size_t e = g.offsets[i + 1];
    double top = -std::numeric_limits<double>::infinity();
    for (size_t k = b; k < e; ++k) {
      out.logit[k] = src[static_cast<Eigen::Index>(i)] + dst[static_cast<Eigen::Index>(g.neighbors[k])];
      top = std::max(top, leaky(out.logit[k], slope));
    }
    double total = 0.0;
    for (size_t k = b; k < e; ++k) {
      out.alpha[k] = std::exp(leaky(out.logit[k], slope) - top);
      total += out.alpha[k];
    }
    auto row = out.pre_activation.row(static_cast<Eigen::Index>(i));
    for (size_t k = b; k < e; ++k) {
      out.alpha[k] /= total;
      row.noalias() += out.alpha[k] * out.projected.row(static_cast<Eigen::Index>(g.neighbors[k]));
    }
  }
  out.output = out.pre_activation.unaryExpr([](double x) { return elu(x); });
}

// Backward pass of one head; accumulates into grad and d_input.
void head_backward(const ReasoningGraph& g, const GatHead& head, double slope,
                   const RowMat& input, const HeadTrace& tr, const RowMat& d_out, GatHead& grad,
                   RowMat& d_input) {
  const auto hd = head.weight.rows();
  const auto n = static_cast<Eigen::Index>(g.size());
  // ELU'(h) = 1 for h > 0, else e^h = ELU(h) + 1.
  RowMat d_pre = d_out;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < hd; ++c) {
      if (tr.pre_activation(i, c) <= 0.0) d_pre(i, c) *= tr.output(i, c) + 1.0;
    }
  }
  RowMat d_proj = RowMat::Zero(n, hd);
  Vec d_src = Vec::Zero(n);
  Vec d_dst = Vec::Zero(n);
  std::vector<double> d_alpha;
  for (size_t i = 0; i < g.size(); ++i) {
    const size_t b = g.offsets[i];
    const size_t e = g.offsets[i + 1];
    const auto ii = static_cast<Eigen::Index>(i);
    d_alpha.assign(e - b, 0.0);
    double mean = 0.0;
    for (size_t k = b; k < e; ++k) {
      const auto j = static_cast<Eigen::Index>(g.neighbors[k]);
      d_proj.row(j).noalias() += tr.alpha[k] * d_pre.row(ii);
      d_alpha[k - b] = d_pre.row(ii).dot(tr.projected.row(j));
      mean += tr.alpha[k] * d_alpha[k - b];
    }
    for (size_t k = b; k < e; ++k) {
      const double d_logit = tr.alpha[k] * (d_alpha[k - b] - mean);
      const double d_raw = tr.logit[k] > 0.0 ? d_logit : slope * d_logit;
      d_src[ii] += d_raw;
      d_dst[static_cast<Eigen::Index>(g.neighbors[k])] += d_raw;
    }
  }
  grad.attention.head(hd).noalias() += tr.projected.transpose() * d_src;
  grad.attention.tail(hd).noalias() += tr.projected.transpose() * d_dst;
  d_proj.noalias() += d_src * head.attention.head(hd).transpose();
  d_proj.noalias() += d_dst * head.attention.tail(hd).transpose();
  grad.weight.noalias() += d_proj.transpose() * input;
  d_input.noalias() += d_proj * head.weight;
}

}  // namespace

ReasoningGraph build_graph(const Corpus& train) {
  if (train.empty()) throw DataError("build_graph: empty training corpus");
  ReasoningGraph g;
  g.fact_count = train.size();
  for (size_t i = 0; i < train.size(); ++i) g.nodes.push_back(Node{NodeType::Fact, i});
  for (Task t : kAllTasks) {
    const size_t ti = task_index(t);
    g.label_begin[ti] = g.nodes.size();
    g.label_count[ti] = train.vocab(t).size();
    for (LabelId id = 0; id < train.vocab(t).size(); ++id) {
      g.nodes.push_back(Node{NodeType::Label, 0, t, id});
    }
  }

  auto connect = [&](size_t a, size_t b, RelationKind kind) {
    g.relations.push_back({a, b, kind, false});
    g.relations.push_back({b, a, kind, true});
  };
  for (size_t i = 0; i < train.size(); ++i) {
    for (Task t : kAllTasks) {
      const LabelId id = train.cases[i].labels[t];
      if (id >= train.vocab(t).size()) throw DataError("build_graph: label id out of range");
      connect(i, g.label_node(t, id), fact_relation(t));
    }
  }
  for (Task t : kAllTasks) {
    const size_t begin = g.label_begin[task_index(t)];
    const size_t count = g.label_count[task_index(t)];
    for (size_t a = 0; a < count; ++a) {
      for (size_t b = a + 1; b < count; ++b) connect(begin + a, begin + b, RelationKind::LabelToLabel);
    }
  }
  finalize_adjacency(g);
  return g;
}

void finalize_adjacency(ReasoningGraph& g) {
  std::vector<std::vector<size_t>> adj(g.size());
  for (size_t i = 0; i < g.size(); ++i) adj[i].push_back(i);
  for (const auto& r : g.relations) {
    if (r.src >= g.size() || r.dst >= g.size()) throw ArgumentError("relation endpoint out of range");
    adj[r.src].push_back(r.dst);
  }
  g.offsets.assign(1, 0);
  g.neighbors.clear();
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.neighbors.insert(g.neighbors.end(), list.begin(), list.end());
    g.offsets.push_back(g.neighbors.size());
  }
}

void init_features(ReasoningGraph& g, const Encoder& encoder, const Corpus& train) {
  const auto dim = static_cast<Eigen::Index>(encoder.dim());
  g.features.resize(static_cast<Eigen::Index>(g.size()), dim);
  for (size_t i = 0; i < g.size(); ++i) {
    const Node& node = g.nodes[i];
    const Vec v = node.type == NodeType::Fact
                      ? encoder.encode_fact(train.cases.at(node.case_index))
                      : encoder.encode_label(node.task, node.label,
                                             train.vocab(node.task).text(node.label));
    g.features.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
}

GatParams GatParams::initialize(size_t dim, size_t heads, uint64_t seed, double leaky_slope) {
  if (heads == 0 || dim == 0 || dim % heads != 0) {
    throw ConfigError("graph: dim " + std::to_string(dim) + " is not divisible by " +
                      std::to_string(heads) + " heads");
  }
  Rng rng(derive_seed(seed, kGatInitStream));
  GatParams p;
  p.leaky_slope = leaky_slope;
  const size_t widths[2] = {dim / heads, dim};
  const HeadCombine combine[2] = {HeadCombine::Concat, HeadCombine::Average};
  for (int l = 0; l < 2; ++l) {
    GatLayer layer;
    layer.combine = combine[l];
    for (size_t k = 0; k < heads; ++k) {
      GatHead h;
      h.weight.resize(static_cast<Eigen::Index>(widths[l]), static_cast<Eigen::Index>(dim));
      glorot_fill(h.weight, dim, widths[l], rng);
      h.attention.resize(static_cast<Eigen::Index>(2 * widths[l]));
      glorot_fill(h.attention, 2 * widths[l], 1, rng);
      layer.heads.push_back(std::move(h));
    }
    p.layers.push_back(std::move(layer));
  }
  return p;
}

GatParams GatParams::zeros_like() const {
  GatParams z = *this;
  for (auto& layer : z.layers) {
    for (auto& h : layer.heads) {
      h.weight.setZero();
      h.attention.setZero();
    }
  }
  return z;
}

size_t GatParams::parameter_count() const {
  size_t n = 0;
  for (const auto& layer : layers) {
    for (const auto& h : layer.heads) n += static_cast<size_t>(h.weight.size() + h.attention.size());
  }
  return n;
}

std::vector<std::span<double>> GatParams::tensors() {
  std::vector<std::span<double>> out;
  for (auto& layer : layers) {
    for (auto& h : layer.heads) {
      out.emplace_back(h.weight.data(), static_cast<size_t>(h.weight.size()));
      out.emplace_back(h.attention.data(), static_cast<size_t>(h.attention.size()));
    }
  }
  return out;
}

std::vector<std::span<const double>> GatParams::tensors() const {
  std::vector<std::span<const double>> out;
  for (const auto& layer : layers) {
    for (const auto& h : layer.heads) {
      out.emplace_back(h.weight.data(), static_cast<size_t>(h.weight.size()));
      out.emplace_back(h.attention.data(), static_cast<size_t>(h.attention.size()));
    }
  }
  return out;
}

void GatParams::validate(size_t dim) const {
  if (layers.empty()) throw ArgumentError("GAT: no layers");
  size_t width = dim;
  for (size_t l = 0; l < layers.size(); ++l) {
    const GatLayer& layer = layers[l];
    if (layer.heads.empty()) throw ArgumentError("GAT: layer without heads");
    for (const auto& h : layer.heads) {
      if (static_cast<size_t>(h.weight.cols()) != width ||
          h.weight.rows() != layer.heads.front().weight.rows() ||
          h.attention.size() != 2 * h.weight.rows()) {
        throw ArgumentError("GAT: layer " + std::to_string(l) + " has inconsistent shapes");
      }
    }
    width = layer.out_dim();
  }
  if (width != dim) throw ArgumentError("GAT: output width differs from encoder dim");
}

double edge_logit(const Vec& attention, const Vec& ni, const Vec& nj, double slope) {
  if (attention.size() != ni.size() + nj.size()) throw ArgumentError("edge_logit: dimension mismatch");
  const double s = attention.head(ni.size()).dot(ni) + attention.tail(nj.size()).dot(nj);
  return leaky(s, slope);
}

std::vector<double> attention_row(const RowMat& projected, const Vec& attention,
                                  std::span<const size_t> neighborhood, size_t i, double slope) {
  if (neighborhood.empty()) throw ArgumentError("attention_row: empty neighborhood");
  const auto hd = projected.cols();
  if (attention.size() != 2 * hd) throw ArgumentError("attention_row: dimension mismatch");
  const double src = projected.row(static_cast<Eigen::Index>(i)).dot(attention.head(hd));
  std::vector<double> w(neighborhood.size());
  double top = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < neighborhood.size(); ++k) {
    w[k] = leaky(src + projected.row(static_cast<Eigen::Index>(neighborhood[k])).dot(attention.tail(hd)),
                 slope);
    top = std::max(top, w[k]);
  }
  double total = 0.0;
  for (double& x : w) {
    x = std::exp(x - top);
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

Vec aggregate_node(const RowMat& projected, std::span<const double> alpha,
                   std::span<const size_t> neighborhood) {
  if (alpha.size() != neighborhood.size()) throw ArgumentError("aggregate_node: size mismatch");
  Vec acc = Vec::Zero(projected.cols());
  for (size_t k = 0; k < alpha.size(); ++k) {
    acc.noalias() += alpha[k] * projected.row(static_cast<Eigen::Index>(neighborhood[k])).transpose();
  }
  return acc.unaryExpr([](double x) { return elu(x); });
}

std::vector<double> attention_row(const ReasoningGraph& graph, const GatParams& params,
                                  size_t layer, size_t head, const RowMat& input, size_t i) {
  const GatHead& h = params.layers.at(layer).heads.at(head);
  const RowMat projected = input * h.weight.transpose();
  return attention_row(projected, h.attention, graph.neighborhood(i), i, params.leaky_slope);
}

Vec aggregate_node(const ReasoningGraph& graph, const GatParams& params, size_t layer,
                   size_t head, const RowMat& input, size_t i) {
  const GatHead& h = params.layers.at(layer).heads.at(head);
  const RowMat projected = input * h.weight.transpose();
  const auto alpha = attention_row(projected, h.attention, graph.neighborhood(i), i, params.leaky_slope);
  return aggregate_node(projected, alpha, graph.neighborhood(i));
}

GatTrace gat_forward_trace(const ReasoningGraph& graph, const GatParams& params) {
  params.validate(static_cast<size_t>(graph.features.cols()));
  if (static_cast<size_t>(graph.features.rows()) != graph.size()) {
    throw ArgumentError("gat_forward: features are not initialized");
  }
  GatTrace trace;
  const RowMat* input = &graph.features;
  for (const GatLayer& layer : params.layers) {
    LayerTrace lt;
    lt.input = *input;
    lt.heads.resize(layer.heads.size());
    const auto hd = static_cast<Eigen::Index>(layer.head_dim());
    lt.output.setZero(static_cast<Eigen::Index>(graph.size()), static_cast<Eigen::Index>(layer.out_dim()));
    for (size_t k = 0; k < layer.heads.size(); ++k) {
      head_forward(graph, layer.heads[k], params.leaky_slope, lt.input, lt.heads[k]);
      if (layer.combine == HeadCombine::Concat) {
        lt.output.middleCols(static_cast<Eigen::Index>(k) * hd, hd) = lt.heads[k].output;
      } else {
        lt.output += lt.heads[k].output;
      }
    }
    if (layer.combine == HeadCombine::Average) lt.output /= static_cast<double>(layer.heads.size());
    if (!lt.output.allFinite()) throw DivergenceError("gat_forward: non-finite node features");
    trace.layers.push_back(std::move(lt));
    input = &trace.layers.back().output;
  }
  return trace;
}

RowMat gat_forward(const ReasoningGraph& graph, const GatParams& params) {
  return gat_forward_trace(graph, params).output();
}

GatParams gat_backward(const ReasoningGraph& graph, const GatParams& params,
                       const GatTrace& trace, const RowMat& d_output, RowMat* d_input) {
  GatParams grad = params.zeros_like();
  RowMat d_layer = d_output;
  for (size_t l = params.layers.size(); l-- > 0;) {
    const GatLayer& layer = params.layers[l];
    const LayerTrace& lt = trace.layers[l];
    const auto hd = static_cast<Eigen::Index>(layer.head_dim());
    RowMat d_in = RowMat::Zero(lt.input.rows(), lt.input.cols());
    for (size_t k = 0; k < layer.heads.size(); ++k) {
      const RowMat d_head = layer.combine == HeadCombine::Concat
                                ? RowMat(d_layer.middleCols(static_cast<Eigen::Index>(k) * hd, hd))
                                : RowMat(d_layer / static_cast<double>(layer.heads.size()));
      head_backward(graph, layer.heads[k], params.leaky_slope, lt.input, lt.heads[k], d_head,
                    grad.layers[l].heads[k], d_in);
    }
    d_layer = std::move(d_in);
  }
  if (d_input) *d_input = std::move(d_layer);
  return grad;
}

RowMat label_rows(const ReasoningGraph& graph, const RowMat& features, Task task) {
  const size_t ti = task_index(task);
  return features.middleRows(static_cast<Eigen::Index>(graph.label_begin[ti]),
                             static_cast<Eigen::Index>(graph.label_count[ti]));
}

}  // namespace semdr
