#pragma once

#include <functional>
#include <vector>

#include "mgs/params.hpp"
#include "mgs/tensor.hpp"

namespace mgs {

// Additive sentinel for masked logits; exp underflows to exactly 0 after
// max subtraction while keeping values finite.
inline constexpr float kMaskLogit = -1e30f;

// Define-by-run reverse-mode tape. Ops append nodes; backward() walks the
// tape in reverse creation order (a reverse topological order by
// construction) and pushes parameter gradients into the attached ParamGrads.
//
// Param nodes alias the ParamStore tensor instead of copying it, and
// gather_rows scatters straight into the sink, so embedding tables are never
// duplicated per graph.
class Graph {
 public:
  using NodeId = int;

  explicit Graph(ParamGrads* sink = nullptr, bool record = true, Rng* rng = nullptr)
      : sink_(sink), record_(record), rng_(rng) {}

  void set_check_finite(bool on) { check_finite_ = on; }
  void reserve(size_t n) { nodes_.reserve(n); }
  Rng* rng() { return rng_; }

  NodeId input(Tensor t);
  NodeId zeros(int r, int c) { return input(Tensor(r, c)); }
  NodeId param(int pid, const Tensor* value);

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  // alpha * a + beta, elementwise constants
  NodeId affine(NodeId a, float alpha, float beta);
  // a[RxC] + row b[1xC] broadcast over rows
  NodeId add_rowvec(NodeId a, NodeId b);
  // a[RxC] + scalar node s[1x1] broadcast
  NodeId add_scalar_node(NodeId a, NodeId s);
  NodeId matmul(NodeId a, NodeId b);
  // a * b^T
  NodeId matmul_nt(NodeId a, NodeId b);
  NodeId concat_rows(const std::vector<NodeId>& parts);
  NodeId concat_cols(const std::vector<NodeId>& parts);
  NodeId slice_rows(NodeId a, int r0, int r1);
  NodeId slice_cols(NodeId a, int c0, int c1);
  // Row-wise softmax. `valid` (size = cols) marks columns eligible per row;
  // invalid columns get kMaskLogit added. At least one column must be valid.
  NodeId softmax_rows(NodeId a, const std::vector<uint8_t>* valid = nullptr);
  NodeId tanh_(NodeId a);
  NodeId sigmoid_(NodeId a);
  NodeId relu_(NodeId a);
  NodeId mean_rows(NodeId a);
  NodeId sum_all(NodeId a);
  NodeId mean_all(NodeId a);
  NodeId layer_norm_rows(NodeId a, NodeId gain, NodeId bias, float eps = 1e-5f);
  // Inverted dropout; identity when !train or p == 0. Uses the graph Rng.
  NodeId dropout(NodeId a, float p, bool train);
  // Gather rows of a (typically an embedding-table param) by index.
  NodeId gather_rows(NodeId a, std::vector<int> idx);
  // -log softmax(logits)[target]; logits is [1xC]. Numerically stable.
  NodeId softmax_ce(NodeId logits, int target);

  const Tensor& val(NodeId id) const { return nodes_[id].v(); }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  // Seeds d(root)=1 and runs the tape. root must be [1x1].
  void backward(NodeId root);
  // Node-local gradient (inputs/intermediates); null if untouched.
  const Tensor* node_grad(NodeId id) const;

 private:
  struct Node {
    Tensor owned;
    const Tensor* ext = nullptr;
    Tensor grad;
    bool has_grad = false;
    int pid = -1;
    std::function<void(Graph&, NodeId)> back;
    const Tensor& v() const { return ext ? *ext : owned; }
  };

  NodeId push(Tensor value, std::function<void(Graph&, NodeId)> back);
  Tensor& grad_buf(NodeId id);
  void accum_param(NodeId id);  // flush leaf param grad into sink

  std::vector<Node> nodes_;
  ParamGrads* sink_;
  bool record_;
  bool check_finite_ = false;
  Rng* rng_;
};

}  // namespace mgs
