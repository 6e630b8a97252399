#pragma once

#include <unordered_map>

#include "mgs/graph.hpp"

namespace mgs {

// Per-graph model context: caches param nodes so each parameter appears once
// per tape, and carries train-mode state.
struct Ctx {
  Graph& g;
  ParamStore& ps;
  bool train = false;

  Graph::NodeId p(int pid) {
    auto it = cache_.find(pid);
    if (it != cache_.end()) return it->second;
    Graph::NodeId id = g.param(pid, &ps.value(pid));
    cache_[pid] = id;
    return id;
  }
  Graph::NodeId p(const std::string& name) { return p(ps.require(name)); }

 private:
  std::unordered_map<int, Graph::NodeId> cache_;
};

struct AttentionParams {
  int wq = -1, wk = -1, wv = -1, wo = -1;
  static AttentionParams create(ParamStore& ps, const std::string& prefix, int dim, Rng& rng);
};

struct EncoderLayerParams {
  AttentionParams att;
  int w1 = -1, b1 = -1, w2 = -1, b2 = -1;
  int ln1_g = -1, ln1_b = -1, ln2_g = -1, ln2_b = -1;
  static EncoderLayerParams create(ParamStore& ps, const std::string& prefix, int dim, int ff_mult, Rng& rng);
};

struct LstmLayerParams {
  int wx = -1, wh = -1, b = -1;  // wx [d x 4d], wh [d x 4d], b [1 x 4d]; gate order i,f,g,o
  static LstmLayerParams create(ParamStore& ps, const std::string& prefix, int dim, Rng& rng);
};

// softmax(seq Wq (seq Wk)^T [/ sqrt(dh)]) seq Wv, per head, concat, Wo.
// `valid` masks key positions. `head_weights` (optional) receives the
// per-head attention weight nodes for inspection.
Graph::NodeId multi_head_self_attention(Ctx& ctx, Graph::NodeId seq, int heads,
                                        const AttentionParams& p, bool scaled,
                                        const std::vector<uint8_t>* valid = nullptr,
                                        std::vector<Graph::NodeId>* head_weights = nullptr);

// Post-norm transformer encoder layer: LN(x + MHA(x)), then LN(x + FFN(x)).
Graph::NodeId encoder_layer(Ctx& ctx, Graph::NodeId seq, int heads, const EncoderLayerParams& p,
                            bool scaled, const std::vector<uint8_t>* valid = nullptr);

// Stacked LSTM over seq [T x d]; returns all T top-layer hidden states.
// Dropout sits between vertical stacks only; upper layers add a residual
// connection to their input sequence.
Graph::NodeId lstm_forward(Ctx& ctx, Graph::NodeId seq, const std::vector<LstmLayerParams>& layers,
                           float dropout_p);

// softmax(queries keys^T [/ sqrt(d)]) keys; projection-free attention where
// the key rows double as values. `weights_out` receives the weight node.
Graph::NodeId query_attention(Ctx& ctx, Graph::NodeId queries, Graph::NodeId keys, bool scaled,
                              const std::vector<uint8_t>* valid = nullptr,
                              Graph::NodeId* weights_out = nullptr);

}  // namespace mgs
