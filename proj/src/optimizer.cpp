#include "mgs/optimizer.hpp"

#include <cmath>

namespace mgs {

AdaGrad::AdaGrad(ParamStore& store, AdaGradConfig cfg) : store_(&store), cfg_(cfg) {
  if (cfg_.learning_rate <= 0.0f) throw std::invalid_argument("adagrad: learning_rate must be > 0");
  if (cfg_.clip_norm <= 0.0f) throw std::invalid_argument("adagrad: clip_norm must be > 0");
  acc_.reserve(store.count());
  for (int pid = 0; pid < store.count(); ++pid) {
    const Tensor& v = store.value(pid);
    Tensor a(v.rows(), v.cols());
    a.shape = v.shape;
    acc_.push_back(std::move(a));
  }
}

void AdaGrad::step(ParamGrads& grads) {
  const double norm = grads.global_norm();
  if (norm > cfg_.clip_norm) grads.scale(static_cast<float>(cfg_.clip_norm / norm));
  grads.for_each([&](int pid, const Tensor& g) {
    if (!g.same_shape(store_->value(pid))) {
      throw std::invalid_argument("adagrad: grad shape mismatch for " + store_->name(pid));
    }
    Tensor& p = store_->value(pid);
    Tensor& a = acc_[pid];
    const float lr = cfg_.learning_rate;
    for (size_t i = 0; i < g.data.size(); ++i) {
      const float gi = g.data[i];
      a.data[i] += gi * gi;
      p.data[i] -= lr * gi / std::sqrt(a.data[i] + cfg_.eps);
    }
  });
}

}  // namespace mgs
