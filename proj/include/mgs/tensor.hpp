#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgs/common.hpp"

namespace mgs {

// Dense row-major f32 tensor. All graph ops work on rank-2 shapes; scalars
// are [1,1]. Reductions inside kernels accumulate in double.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  Tensor(int r, int c) : shape{r, c}, data(static_cast<size_t>(r) * c, 0.0f) {}

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor scalar(float v) {
    Tensor t(1, 1);
    t.data[0] = v;
    return t;
  }
  static Tensor row(std::vector<float> v) {
    Tensor t;
    t.shape = {1, static_cast<int>(v.size())};
    t.data = std::move(v);
    return t;
  }
  static Tensor from(int r, int c, std::vector<float> v);

  int64_t numel() const { return static_cast<int64_t>(data.size()); }
  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? (shape.empty() ? 0 : 1) : shape[1]; }

  float* row_ptr(int r) { return data.data() + static_cast<size_t>(r) * cols(); }
  const float* row_ptr(int r) const { return data.data() + static_cast<size_t>(r) * cols(); }
  float& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
  float at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  void fill(float v) { std::fill(data.begin(), data.end(), v); }
  bool all_finite() const;
  std::string shape_str() const;
};

// out = a * b
Tensor mm(const Tensor& a, const Tensor& b);
// out = a * b^T
Tensor mm_nt(const Tensor& a, const Tensor& b);
// out = a^T * b
Tensor mm_tn(const Tensor& a, const Tensor& b);
// dst += src (same shape)
void add_into(Tensor& dst, const Tensor& src);
// dst += alpha * src
void axpy_into(Tensor& dst, float alpha, const Tensor& src);

double l2_norm_sq(const Tensor& t);
double dot_rows(const float* a, const float* b, int n);

}  // namespace mgs
