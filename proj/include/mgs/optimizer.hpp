#pragma once

#include "mgs/params.hpp"

namespace mgs {

struct AdaGradConfig {
  float learning_rate = 0.1f;
  float clip_norm = 3.0f;
  float eps = 1e-8f;
};

// AdaGrad with global-norm clipping applied to the whole gradient first.
class AdaGrad {
 public:
  AdaGrad(ParamStore& store, AdaGradConfig cfg);
  // Mutates grads (clip), updates params, grows accumulators.
  void step(ParamGrads& grads);
  const Tensor& accumulator(int pid) const { return acc_[pid]; }
  const AdaGradConfig& config() const { return cfg_; }

 private:
  ParamStore* store_;
  AdaGradConfig cfg_;
  std::vector<Tensor> acc_;
};

}  // namespace mgs
