#include "mgs/nn.hpp"

#include <cmath>

namespace mgs {

AttentionParams AttentionParams::create(ParamStore& ps, const std::string& prefix, int dim, Rng& rng) {
  AttentionParams p;
  p.wq = ps.add(prefix + ".wq", orthogonal_init(rng, dim, dim));
  p.wk = ps.add(prefix + ".wk", orthogonal_init(rng, dim, dim));
  p.wv = ps.add(prefix + ".wv", orthogonal_init(rng, dim, dim));
  p.wo = ps.add(prefix + ".wo", orthogonal_init(rng, dim, dim));
  return p;
}

EncoderLayerParams EncoderLayerParams::create(ParamStore& ps, const std::string& prefix, int dim,
                                              int ff_mult, Rng& rng) {
  EncoderLayerParams p;
  p.att = AttentionParams::create(ps, prefix + ".att", dim, rng);
  const int ff = dim * ff_mult;
  p.w1 = ps.add(prefix + ".ffn.w1", orthogonal_init(rng, dim, ff));
  p.b1 = ps.add(prefix + ".ffn.b1", Tensor(1, ff));
  p.w2 = ps.add(prefix + ".ffn.w2", orthogonal_init(rng, ff, dim));
  p.b2 = ps.add(prefix + ".ffn.b2", Tensor(1, dim));
  Tensor ones(1, dim);
  ones.fill(1.0f);
  p.ln1_g = ps.add(prefix + ".ln1.g", ones);
  p.ln1_b = ps.add(prefix + ".ln1.b", Tensor(1, dim));
  p.ln2_g = ps.add(prefix + ".ln2.g", ones);
  p.ln2_b = ps.add(prefix + ".ln2.b", Tensor(1, dim));
  return p;
}

LstmLayerParams LstmLayerParams::create(ParamStore& ps, const std::string& prefix, int dim, Rng& rng) {
  LstmLayerParams p;
  p.wx = ps.add(prefix + ".wx", orthogonal_init(rng, dim, 4 * dim));
  p.wh = ps.add(prefix + ".wh", orthogonal_init(rng, dim, 4 * dim));
  p.b = ps.add(prefix + ".b", Tensor(1, 4 * dim));
  return p;
}

Graph::NodeId multi_head_self_attention(Ctx& ctx, Graph::NodeId seq, int heads,
                                        const AttentionParams& p, bool scaled,
                                        const std::vector<uint8_t>* valid,
                                        std::vector<Graph::NodeId>* head_weights) {
  Graph& g = ctx.g;
  const int d = g.val(seq).cols();
  if (heads <= 0 || d % heads != 0) {
    throw std::invalid_argument("attention: dim " + std::to_string(d) + " not divisible by heads " +
                                std::to_string(heads));
  }
  const int dh = d / heads;
  Graph::NodeId q = g.matmul(seq, ctx.p(p.wq));
  Graph::NodeId k = g.matmul(seq, ctx.p(p.wk));
  Graph::NodeId v = g.matmul(seq, ctx.p(p.wv));
  std::vector<Graph::NodeId> outs;
  outs.reserve(heads);
  for (int h = 0; h < heads; ++h) {
    const int c0 = h * dh, c1 = c0 + dh;
    Graph::NodeId qh = g.slice_cols(q, c0, c1);
    Graph::NodeId kh = g.slice_cols(k, c0, c1);
    Graph::NodeId vh = g.slice_cols(v, c0, c1);
    Graph::NodeId logits = g.matmul_nt(qh, kh);
    if (scaled) logits = g.affine(logits, 1.0f / std::sqrt(static_cast<float>(dh)), 0.0f);
    Graph::NodeId w = g.softmax_rows(logits, valid);
    if (head_weights) head_weights->push_back(w);
    outs.push_back(g.matmul(w, vh));
  }
  Graph::NodeId merged = heads == 1 ? outs[0] : g.concat_cols(outs);
  return g.matmul(merged, ctx.p(p.wo));
}

Graph::NodeId encoder_layer(Ctx& ctx, Graph::NodeId seq, int heads, const EncoderLayerParams& p,
                            bool scaled, const std::vector<uint8_t>* valid) {
  Graph& g = ctx.g;
  Graph::NodeId att = multi_head_self_attention(ctx, seq, heads, p.att, scaled, valid);
  Graph::NodeId x1 = g.layer_norm_rows(g.add(seq, att), ctx.p(p.ln1_g), ctx.p(p.ln1_b));
  Graph::NodeId h = g.relu_(g.add_rowvec(g.matmul(x1, ctx.p(p.w1)), ctx.p(p.b1)));
  Graph::NodeId ff = g.add_rowvec(g.matmul(h, ctx.p(p.w2)), ctx.p(p.b2));
  return g.layer_norm_rows(g.add(x1, ff), ctx.p(p.ln2_g), ctx.p(p.ln2_b));
}

Graph::NodeId lstm_forward(Ctx& ctx, Graph::NodeId seq, const std::vector<LstmLayerParams>& layers,
                           float dropout_p) {
  Graph& g = ctx.g;
  const Tensor& sv = g.val(seq);
  const int T = sv.rows();
  const int d = sv.cols();
  if (T < 1) throw std::invalid_argument("lstm_forward: empty sequence");
  Graph::NodeId layer_in = seq;
  Graph::NodeId layer_out = seq;
  for (size_t li = 0; li < layers.size(); ++li) {
    const LstmLayerParams& lp = layers[li];
    Graph::NodeId wx = ctx.p(lp.wx);
    Graph::NodeId wh = ctx.p(lp.wh);
    Graph::NodeId b = ctx.p(lp.b);
    Graph::NodeId h = g.zeros(1, d);
    Graph::NodeId c = g.zeros(1, d);
    std::vector<Graph::NodeId> hs;
    hs.reserve(T);
    for (int t = 0; t < T; ++t) {
      Graph::NodeId xt = g.slice_rows(layer_in, t, t + 1);
      Graph::NodeId gates = g.add(g.add(g.matmul(xt, wx), g.matmul(h, wh)), b);
      Graph::NodeId gi = g.sigmoid_(g.slice_cols(gates, 0, d));
      Graph::NodeId gf = g.sigmoid_(g.slice_cols(gates, d, 2 * d));
      Graph::NodeId gg = g.tanh_(g.slice_cols(gates, 2 * d, 3 * d));
      Graph::NodeId go = g.sigmoid_(g.slice_cols(gates, 3 * d, 4 * d));
      c = g.add(g.mul(gf, c), g.mul(gi, gg));
      h = g.mul(go, g.tanh_(c));
      hs.push_back(h);
    }
    Graph::NodeId stacked = T == 1 ? hs[0] : g.concat_rows(hs);
    // Residual across vertical stacks; dropout only on the inter-layer path.
    layer_out = li == 0 ? stacked : g.add(stacked, layer_in);
    if (li + 1 < layers.size()) {
      layer_in = g.dropout(layer_out, dropout_p, ctx.train);
    }
  }
  return layer_out;
}

Graph::NodeId query_attention(Ctx& ctx, Graph::NodeId queries, Graph::NodeId keys, bool scaled,
                              const std::vector<uint8_t>* valid, Graph::NodeId* weights_out) {
  Graph& g = ctx.g;
  Graph::NodeId logits = g.matmul_nt(queries, keys);
  if (scaled) {
    const int d = g.val(queries).cols();
    logits = g.affine(logits, 1.0f / std::sqrt(static_cast<float>(d)), 0.0f);
  }
  Graph::NodeId w = g.softmax_rows(logits, valid);
  if (weights_out) *weights_out = w;
  return g.matmul(w, keys);
}

}  // namespace mgs
