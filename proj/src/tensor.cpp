#include "mgs/tensor.hpp"

#include <cmath>
#include <sstream>

namespace mgs {

Tensor Tensor::from(int r, int c, std::vector<float> v) {
  if (static_cast<size_t>(r) * c != v.size()) throw std::invalid_argument("Tensor::from size mismatch");
  Tensor t;
  t.shape = {r, c};
  t.data = std::move(v);
  return t;
}

bool Tensor::all_finite() const {
  for (float v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::string Tensor::shape_str() const {
  std::ostringstream ss;
  ss << "[";
  for (size_t i = 0; i < shape.size(); ++i) ss << (i ? "x" : "") << shape[i];
  ss << "]";
  return ss.str();
}

Tensor mm(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mm: inner dims " + a.shape_str() + " vs " + b.shape_str());
  const int m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out(m, n);
  std::vector<double> acc(n);
  for (int i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const float* arow = a.row_ptr(i);
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      if (av == 0.0) continue;
      const float* brow = b.row_ptr(kk);
      for (int j = 0; j < n; ++j) acc[j] += av * brow[j];
    }
    float* orow = out.row_ptr(i);
    for (int j = 0; j < n; ++j) orow[j] = static_cast<float>(acc[j]);
  }
  return out;
}

Tensor mm_nt(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("mm_nt: inner dims " + a.shape_str() + " vs " + b.shape_str());
  const int m = a.rows(), k = a.cols(), n = b.rows();
  Tensor out(m, n);
  for (int i = 0; i < m; ++i) {
    const float* arow = a.row_ptr(i);
    float* orow = out.row_ptr(i);
    for (int j = 0; j < n; ++j) orow[j] = static_cast<float>(dot_rows(arow, b.row_ptr(j), k));
  }
  return out;
}

Tensor mm_tn(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("mm_tn: inner dims " + a.shape_str() + " vs " + b.shape_str());
  const int m = a.cols(), k = a.rows(), n = b.cols();
  Tensor out(m, n);
  std::vector<double> acc(static_cast<size_t>(m) * n, 0.0);
  for (int kk = 0; kk < k; ++kk) {
    const float* arow = a.row_ptr(kk);
    const float* brow = b.row_ptr(kk);
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* accrow = acc.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) accrow[j] += av * brow[j];
    }
  }
  for (int i = 0; i < m; ++i) {
    float* orow = out.row_ptr(i);
    const double* accrow = acc.data() + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) orow[j] = static_cast<float>(accrow[j]);
  }
  return out;
}

void add_into(Tensor& dst, const Tensor& src) {
  if (!dst.same_shape(src)) throw std::invalid_argument("add_into shape mismatch");
  for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += src.data[i];
}

void axpy_into(Tensor& dst, float alpha, const Tensor& src) {
  if (!dst.same_shape(src)) throw std::invalid_argument("axpy_into shape mismatch");
  for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += alpha * src.data[i];
}

double l2_norm_sq(const Tensor& t) {
  double s = 0.0;
  for (float v : t.data) s += static_cast<double>(v) * v;
  return s;
}

double dot_rows(const float* a, const float* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

}  // namespace mgs
