#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mgs/tensor.hpp"

namespace mgs {

// Named model parameters. Registration order is the checkpoint record order.
class ParamStore {
 public:
  int add(const std::string& name, Tensor init);
  int find(const std::string& name) const;
  int require(const std::string& name) const;
  Tensor& value(int pid) { return values_[pid]; }
  const Tensor& value(int pid) const { return values_[pid]; }
  const std::string& name(int pid) const { return names_[pid]; }
  int count() const { return static_cast<int>(values_.size()); }

  // Checkpoint format: magic "MGD1", then per parameter:
  // u32 name_len, name bytes, u32 rank, u32 dims[rank], f32 data (all LE).
  std::string serialize() const;
  void deserialize(const std::string& bytes);  // names and shapes must match
  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
  std::unordered_map<std::string, int> index_;
};

// Gradient accumulator aligned with ParamStore ids. Buffers are allocated on
// first touch and zeroed (not freed) between steps.
class ParamGrads {
 public:
  explicit ParamGrads(ParamStore& store) : store_(&store) {}
  Tensor& grad(int pid);
  const Tensor* peek(int pid) const;
  void zero();
  double global_norm() const;
  void scale(float s);
  bool all_finite() const;
  ParamStore& store() { return *store_; }

  template <typename F>
  void for_each(F&& f) {
    for (size_t pid = 0; pid < grads_.size(); ++pid) {
      if (live_.size() > pid && live_[pid]) f(static_cast<int>(pid), grads_[pid]);
    }
  }

 private:
  ParamStore* store_;
  std::vector<Tensor> grads_;
  std::vector<uint8_t> live_;
};

// Weight init. Orthogonal rows/columns (whichever side is smaller) from a
// Gaussian draw via modified Gram-Schmidt in double precision.
Tensor orthogonal_init(Rng& rng, int rows, int cols);
Tensor uniform_init(Rng& rng, int rows, int cols, float range);

}  // namespace mgs
