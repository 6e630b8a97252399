#include "mgs/graph.hpp"

#include <cmath>

namespace mgs {

Graph::NodeId Graph::push(Tensor value, std::function<void(Graph&, NodeId)> back) {
  if (check_finite_ && !value.all_finite()) {
    throw NumericError("non-finite value produced at node " + std::to_string(nodes_.size()) +
                       " shape " + value.shape_str());
  }
  Node n;
  n.owned = std::move(value);
  if (record_) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tensor& Graph::grad_buf(NodeId id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    const Tensor& v = n.v();
    if (!n.grad.same_shape(v)) {
      n.grad = Tensor(v.rows(), v.cols());
      n.grad.shape = v.shape;
    } else {
      n.grad.fill(0.0f);
    }
    n.has_grad = true;
  }
  return n.grad;
}

Graph::NodeId Graph::input(Tensor t) { return push(std::move(t), nullptr); }

Graph::NodeId Graph::param(int pid, const Tensor* value) {
  Node n;
  n.ext = value;
  n.pid = pid;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Graph::accum_param(NodeId id) {
  Node& n = nodes_[id];
  if (n.pid >= 0 && n.has_grad && sink_) add_into(sink_->grad(n.pid), n.grad);
}

void Graph::backward(NodeId root) {
  if (!record_) throw std::logic_error("backward on a non-recording graph");
  const Tensor& rv = nodes_[root].v();
  if (rv.numel() != 1) throw std::invalid_argument("backward root must be scalar, got " + rv.shape_str());
  grad_buf(root).data[0] = 1.0f;
  for (NodeId id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.has_grad) continue;
    if (n.back) n.back(*this, id);
    accum_param(id);
  }
}

const Tensor* Graph::node_grad(NodeId id) const {
  const Node& n = nodes_[id];
  return n.has_grad ? &n.grad : nullptr;
}

Graph::NodeId Graph::add(NodeId a, NodeId b) {
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("add shape mismatch " + av.shape_str() + " vs " + bv.shape_str());
  Tensor out = av;
  add_into(out, bv);
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), go);
    add_into(g.grad_buf(b), go);
  });
}

Graph::NodeId Graph::sub(NodeId a, NodeId b) {
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("sub shape mismatch");
  Tensor out = av;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= bv.data[i];
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), go);
    axpy_into(g.grad_buf(b), -1.0f, go);
  });
}

Graph::NodeId Graph::mul(NodeId a, NodeId b) {
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("mul shape mismatch");
  Tensor out = av;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= bv.data[i];
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& av2 = g.val(a);
    const Tensor& bv2 = g.val(b);
    Tensor& ga = g.grad_buf(a);
    Tensor& gb = g.grad_buf(b);
    for (size_t i = 0; i < go.data.size(); ++i) {
      ga.data[i] += go.data[i] * bv2.data[i];
      gb.data[i] += go.data[i] * av2.data[i];
    }
  });
}

Graph::NodeId Graph::affine(NodeId a, float alpha, float beta) {
  Tensor out = val(a);
  for (float& v : out.data) v = alpha * v + beta;
  return push(std::move(out), [a, alpha](Graph& g, NodeId id) {
    axpy_into(g.grad_buf(a), alpha, g.nodes_[id].grad);
  });
}

Graph::NodeId Graph::add_rowvec(NodeId a, NodeId b) {
  const Tensor& av = val(a);
  const Tensor& bv = val(b);
  if (bv.rows() != 1 || bv.cols() != av.cols()) throw std::invalid_argument("add_rowvec shape mismatch");
  Tensor out = av;
  for (int r = 0; r < out.rows(); ++r) {
    float* row = out.row_ptr(r);
    for (int c = 0; c < out.cols(); ++c) row[c] += bv.data[c];
  }
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), go);
    Tensor& gb = g.grad_buf(b);
    for (int c = 0; c < go.cols(); ++c) {
      double s = 0.0;
      for (int r = 0; r < go.rows(); ++r) s += go.at(r, c);
      gb.data[c] += static_cast<float>(s);
    }
  });
}

Graph::NodeId Graph::add_scalar_node(NodeId a, NodeId s) {
  const Tensor& sv = val(s);
  if (sv.numel() != 1) throw std::invalid_argument("add_scalar_node: s must be [1x1]");
  Tensor out = val(a);
  const float sc = sv.data[0];
  for (float& v : out.data) v += sc;
  return push(std::move(out), [a, s](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), go);
    double acc = 0.0;
    for (float v : go.data) acc += v;
    g.grad_buf(s).data[0] += static_cast<float>(acc);
  });
}

Graph::NodeId Graph::matmul(NodeId a, NodeId b) {
  Tensor out = mm(val(a), val(b));
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), mm_nt(go, g.val(b)));
    add_into(g.grad_buf(b), mm_tn(g.val(a), go));
  });
}

Graph::NodeId Graph::matmul_nt(NodeId a, NodeId b) {
  Tensor out = mm_nt(val(a), val(b));
  return push(std::move(out), [a, b](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    add_into(g.grad_buf(a), mm(go, g.val(b)));
    add_into(g.grad_buf(b), mm_tn(go, g.val(a)));
  });
}

Graph::NodeId Graph::concat_rows(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: empty");
  const int cols = val(parts[0]).cols();
  int rows = 0;
  for (NodeId p : parts) {
    if (val(p).cols() != cols) throw std::invalid_argument("concat_rows: col mismatch");
    rows += val(p).rows();
  }
  Tensor out(rows, cols);
  int r = 0;
  for (NodeId p : parts) {
    const Tensor& pv = val(p);
    std::copy(pv.data.begin(), pv.data.end(), out.row_ptr(r));
    r += pv.rows();
  }
  return push(std::move(out), [parts](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    int r0 = 0;
    for (NodeId p : parts) {
      Tensor& gp = g.grad_buf(p);
      const int pr = gp.rows();
      for (int r = 0; r < pr; ++r) {
        const float* src = go.row_ptr(r0 + r);
        float* dst = gp.row_ptr(r);
        for (int c = 0; c < go.cols(); ++c) dst[c] += src[c];
      }
      r0 += pr;
    }
  });
}

Graph::NodeId Graph::concat_cols(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: empty");
  const int rows = val(parts[0]).rows();
  int cols = 0;
  for (NodeId p : parts) {
    if (val(p).rows() != rows) throw std::invalid_argument("concat_cols: row mismatch");
    cols += val(p).cols();
  }
  Tensor out(rows, cols);
  int c0 = 0;
  for (NodeId p : parts) {
    const Tensor& pv = val(p);
    for (int r = 0; r < rows; ++r) {
      std::copy(pv.row_ptr(r), pv.row_ptr(r) + pv.cols(), out.row_ptr(r) + c0);
    }
    c0 += pv.cols();
  }
  return push(std::move(out), [parts](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    int c0 = 0;
    for (NodeId p : parts) {
      Tensor& gp = g.grad_buf(p);
      for (int r = 0; r < gp.rows(); ++r) {
        const float* src = go.row_ptr(r) + c0;
        float* dst = gp.row_ptr(r);
        for (int c = 0; c < gp.cols(); ++c) dst[c] += src[c];
      }
      c0 += gp.cols();
    }
  });
}

Graph::NodeId Graph::slice_rows(NodeId a, int r0, int r1) {
  const Tensor& av = val(a);
  if (r0 < 0 || r1 > av.rows() || r0 >= r1) throw std::invalid_argument("slice_rows: bad range");
  Tensor out(r1 - r0, av.cols());
  std::copy(av.row_ptr(r0), av.row_ptr(r0) + out.numel(), out.data.begin());
  return push(std::move(out), [a, r0](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    Tensor& ga = g.grad_buf(a);
    for (int r = 0; r < go.rows(); ++r) {
      const float* src = go.row_ptr(r);
      float* dst = ga.row_ptr(r0 + r);
      for (int c = 0; c < go.cols(); ++c) dst[c] += src[c];
    }
  });
}

Graph::NodeId Graph::slice_cols(NodeId a, int c0, int c1) {
  const Tensor& av = val(a);
  if (c0 < 0 || c1 > av.cols() || c0 >= c1) throw std::invalid_argument("slice_cols: bad range");
  Tensor out(av.rows(), c1 - c0);
  for (int r = 0; r < av.rows(); ++r) {
    std::copy(av.row_ptr(r) + c0, av.row_ptr(r) + c1, out.row_ptr(r));
  }
  return push(std::move(out), [a, c0](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    Tensor& ga = g.grad_buf(a);
    for (int r = 0; r < go.rows(); ++r) {
      const float* src = go.row_ptr(r);
      float* dst = ga.row_ptr(r) + c0;
      for (int c = 0; c < go.cols(); ++c) dst[c] += src[c];
    }
  });
}

Graph::NodeId Graph::softmax_rows(NodeId a, const std::vector<uint8_t>* valid) {
  const Tensor& av = val(a);
  const int R = av.rows(), C = av.cols();
  if (valid) {
    if (static_cast<int>(valid->size()) != C) throw std::invalid_argument("softmax mask size mismatch");
    bool any = false;
    for (uint8_t v : *valid) any = any || v;
    if (!any) throw std::invalid_argument("softmax mask has no valid column");
  }
  Tensor out(R, C);
  for (int r = 0; r < R; ++r) {
    const float* z = av.row_ptr(r);
    float* y = out.row_ptr(r);
    float mx = -std::numeric_limits<float>::infinity();
    for (int c = 0; c < C; ++c) {
      const float zc = (valid && !(*valid)[c]) ? kMaskLogit : z[c];
      if (zc > mx) mx = zc;
    }
    double denom = 0.0;
    for (int c = 0; c < C; ++c) {
      const float zc = (valid && !(*valid)[c]) ? kMaskLogit : z[c];
      const double e = std::exp(static_cast<double>(zc) - mx);
      y[c] = static_cast<float>(e);
      denom += e;
    }
    for (int c = 0; c < C; ++c) y[c] = static_cast<float>(y[c] / denom);
  }
  return push(std::move(out), [a](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& y = g.val(id);
    Tensor& ga = g.grad_buf(a);
    for (int r = 0; r < go.rows(); ++r) {
      const float* gr = go.row_ptr(r);
      const float* yr = y.row_ptr(r);
      float* gar = ga.row_ptr(r);
      double gy = 0.0;
      for (int c = 0; c < go.cols(); ++c) gy += static_cast<double>(gr[c]) * yr[c];
      for (int c = 0; c < go.cols(); ++c) {
        gar[c] += static_cast<float>(yr[c] * (gr[c] - gy));
      }
    }
  });
}

Graph::NodeId Graph::tanh_(NodeId a) {
  Tensor out = val(a);
  for (float& v : out.data) v = std::tanh(v);
  return push(std::move(out), [a](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& y = g.val(id);
    Tensor& ga = g.grad_buf(a);
    for (size_t i = 0; i < go.data.size(); ++i) ga.data[i] += go.data[i] * (1.0f - y.data[i] * y.data[i]);
  });
}

Graph::NodeId Graph::sigmoid_(NodeId a) {
  Tensor out = val(a);
  for (float& v : out.data) v = 1.0f / (1.0f + std::exp(-v));
  return push(std::move(out), [a](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& y = g.val(id);
    Tensor& ga = g.grad_buf(a);
    for (size_t i = 0; i < go.data.size(); ++i) ga.data[i] += go.data[i] * y.data[i] * (1.0f - y.data[i]);
  });
}

Graph::NodeId Graph::relu_(NodeId a) {
  Tensor out = val(a);
  for (float& v : out.data) v = v > 0.0f ? v : 0.0f;
  return push(std::move(out), [a](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& x = g.val(a);
    Tensor& ga = g.grad_buf(a);
    for (size_t i = 0; i < go.data.size(); ++i) {
      if (x.data[i] > 0.0f) ga.data[i] += go.data[i];
    }
  });
}

Graph::NodeId Graph::mean_rows(NodeId a) {
  const Tensor& av = val(a);
  const int R = av.rows(), C = av.cols();
  Tensor out(1, C);
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (int r = 0; r < R; ++r) s += av.at(r, c);
    out.data[c] = static_cast<float>(s / R);
  }
  return push(std::move(out), [a, R](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    Tensor& ga = g.grad_buf(a);
    const float inv = 1.0f / static_cast<float>(R);
    for (int r = 0; r < R; ++r) {
      float* dst = ga.row_ptr(r);
      for (int c = 0; c < go.cols(); ++c) dst[c] += go.data[c] * inv;
    }
  });
}

Graph::NodeId Graph::sum_all(NodeId a) {
  const Tensor& av = val(a);
  double s = 0.0;
  for (float v : av.data) s += v;
  return push(Tensor::scalar(static_cast<float>(s)), [a](Graph& g, NodeId id) {
    const float go = g.nodes_[id].grad.data[0];
    Tensor& ga = g.grad_buf(a);
    for (float& v : ga.data) v += go;
  });
}

Graph::NodeId Graph::mean_all(NodeId a) {
  const Tensor& av = val(a);
  double s = 0.0;
  for (float v : av.data) s += v;
  const int64_t n = av.numel();
  return push(Tensor::scalar(static_cast<float>(s / n)), [a, n](Graph& g, NodeId id) {
    const float go = g.nodes_[id].grad.data[0] / static_cast<float>(n);
    Tensor& ga = g.grad_buf(a);
    for (float& v : ga.data) v += go;
  });
}

Graph::NodeId Graph::layer_norm_rows(NodeId a, NodeId gain, NodeId bias, float eps) {
  const Tensor& av = val(a);
  const Tensor& gv = val(gain);
  const Tensor& bv = val(bias);
  const int R = av.rows(), C = av.cols();
  if (gv.rows() != 1 || gv.cols() != C || bv.rows() != 1 || bv.cols() != C) {
    throw std::invalid_argument("layer_norm: gain/bias must be [1xC]");
  }
  Tensor out(R, C);
  // Normalized rows are stashed for the backward pass.
  auto xhat = std::make_shared<Tensor>(R, C);
  auto inv_sigma = std::make_shared<std::vector<float>>(R);
  for (int r = 0; r < R; ++r) {
    const float* x = av.row_ptr(r);
    double mu = 0.0;
    for (int c = 0; c < C; ++c) mu += x[c];
    mu /= C;
    double var = 0.0;
    for (int c = 0; c < C; ++c) {
      const double d = x[c] - mu;
      var += d * d;
    }
    var /= C;
    const float is = static_cast<float>(1.0 / std::sqrt(var + eps));
    (*inv_sigma)[r] = is;
    float* xh = xhat->row_ptr(r);
    float* y = out.row_ptr(r);
    for (int c = 0; c < C; ++c) {
      xh[c] = (x[c] - static_cast<float>(mu)) * is;
      y[c] = xh[c] * gv.data[c] + bv.data[c];
    }
  }
  return push(std::move(out), [a, gain, bias, xhat, inv_sigma](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    const Tensor& gv2 = g.val(gain);
    Tensor& ga = g.grad_buf(a);
    Tensor& gg = g.grad_buf(gain);
    Tensor& gb = g.grad_buf(bias);
    const int R = go.rows(), C = go.cols();
    for (int r = 0; r < R; ++r) {
      const float* gr = go.row_ptr(r);
      const float* xh = xhat->row_ptr(r);
      const float is = (*inv_sigma)[r];
      double m1 = 0.0, m2 = 0.0;
      for (int c = 0; c < C; ++c) {
        const double gy = static_cast<double>(gr[c]) * gv2.data[c];
        m1 += gy;
        m2 += gy * xh[c];
      }
      m1 /= C;
      m2 /= C;
      float* gar = ga.row_ptr(r);
      for (int c = 0; c < C; ++c) {
        const double gy = static_cast<double>(gr[c]) * gv2.data[c];
        gar[c] += static_cast<float>(is * (gy - m1 - xh[c] * m2));
        gg.data[c] += gr[c] * xh[c];
        gb.data[c] += gr[c];
      }
    }
  });
}

Graph::NodeId Graph::dropout(NodeId a, float p, bool train) {
  if (!train || p <= 0.0f) return a;
  if (p >= 1.0f) throw std::invalid_argument("dropout: p must be < 1");
  if (!rng_) throw std::logic_error("dropout requires a graph Rng");
  const Tensor& av = val(a);
  auto mask = std::make_shared<Tensor>(av.rows(), av.cols());
  const float keep_scale = 1.0f / (1.0f - p);
  for (float& m : mask->data) m = rng_->bernoulli(p) ? 0.0f : keep_scale;
  Tensor out = av;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= mask->data[i];
  return push(std::move(out), [a, mask](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    Tensor& ga = g.grad_buf(a);
    for (size_t i = 0; i < go.data.size(); ++i) ga.data[i] += go.data[i] * mask->data[i];
  });
}

Graph::NodeId Graph::gather_rows(NodeId a, std::vector<int> idx) {
  const Tensor& av = val(a);
  const int C = av.cols();
  Tensor out(static_cast<int>(idx.size()), C);
  for (size_t r = 0; r < idx.size(); ++r) {
    const int i = idx[r];
    if (i < 0 || i >= av.rows()) throw std::invalid_argument("gather_rows: index out of range");
    std::copy(av.row_ptr(i), av.row_ptr(i) + C, out.row_ptr(static_cast<int>(r)));
  }
  return push(std::move(out), [a, idx = std::move(idx)](Graph& g, NodeId id) {
    const Tensor& go = g.nodes_[id].grad;
    Node& src = g.nodes_[a];
    // Scatter straight into the sink for leaf params so tables are not
    // materialized per graph.
    Tensor& dst = (src.pid >= 0 && g.sink_) ? g.sink_->grad(src.pid) : g.grad_buf(a);
    for (size_t r = 0; r < idx.size(); ++r) {
      const float* srow = go.row_ptr(static_cast<int>(r));
      float* drow = dst.row_ptr(idx[r]);
      for (int c = 0; c < go.cols(); ++c) drow[c] += srow[c];
    }
  });
}

Graph::NodeId Graph::softmax_ce(NodeId logits, int target) {
  const Tensor& zv = val(logits);
  if (zv.rows() != 1) throw std::invalid_argument("softmax_ce: logits must be [1xC]");
  const int C = zv.cols();
  if (target < 0 || target >= C) throw std::invalid_argument("softmax_ce: target out of range");
  float mx = zv.data[0];
  for (int c = 1; c < C; ++c) mx = std::max(mx, zv.data[c]);
  auto probs = std::make_shared<std::vector<float>>(C);
  double denom = 0.0;
  for (int c = 0; c < C; ++c) {
    const double e = std::exp(static_cast<double>(zv.data[c]) - mx);
    (*probs)[c] = static_cast<float>(e);
    denom += e;
  }
  for (int c = 0; c < C; ++c) (*probs)[c] = static_cast<float>((*probs)[c] / denom);
  const double loss = std::log(denom) + mx - zv.data[target];
  return push(Tensor::scalar(static_cast<float>(loss)), [logits, target, probs](Graph& g, NodeId id) {
    const float go = g.nodes_[id].grad.data[0];
    Tensor& gz = g.grad_buf(logits);
    for (int c = 0; c < gz.cols(); ++c) {
      const float delta = (c == target) ? 1.0f : 0.0f;
      gz.data[c] += go * ((*probs)[c] - delta);
    }
  });
}

}  // namespace mgs
