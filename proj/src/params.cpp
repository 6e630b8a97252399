#include "mgs/params.hpp"

#include <cmath>

namespace mgs {

int ParamStore::add(const std::string& name, Tensor init) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter: " + name);
  int pid = static_cast<int>(values_.size());
  index_[name] = pid;
  names_.push_back(name);
  values_.push_back(std::move(init));
  return pid;
}

int ParamStore::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int ParamStore::require(const std::string& name) const {
  int pid = find(name);
  if (pid < 0) throw std::invalid_argument("unknown parameter: " + name);
  return pid;
}

std::string ParamStore::serialize() const {
  std::string out;
  out.append("MGD1");
  for (int pid = 0; pid < count(); ++pid) {
    const std::string& n = names_[pid];
    const Tensor& t = values_[pid];
    put_u32(out, static_cast<uint32_t>(n.size()));
    out.append(n);
    put_u32(out, static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) put_u32(out, static_cast<uint32_t>(d));
    for (float v : t.data) put_f32(out, v);
  }
  return out;
}

void ParamStore::deserialize(const std::string& bytes) {
  ByteReader r(reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size());
  if (r.bytes(4) != "MGD1") throw DataError("bad checkpoint magic (want MGD1)");
  int seen = 0;
  while (!r.done()) {
    uint32_t name_len = r.u32();
    std::string name = r.bytes(name_len);
    uint32_t rank = r.u32();
    std::vector<int> shape(rank);
    size_t n = 1;
    for (uint32_t i = 0; i < rank; ++i) {
      shape[i] = static_cast<int>(r.u32());
      n *= static_cast<size_t>(shape[i]);
    }
    int pid = find(name);
    if (pid < 0) throw DataError("checkpoint has unknown parameter: " + name);
    Tensor& t = values_[pid];
    if (t.shape != shape) {
      Tensor file_shape;
      file_shape.shape = shape;
      throw DataError("checkpoint shape mismatch for " + name + ": file " +
                      file_shape.shape_str() + " vs model " + t.shape_str());
    }
    r.f32_array(t.data.data(), n);
    ++seen;
  }
  if (seen != count()) throw DataError("checkpoint is missing parameters");
}

void ParamStore::save(const std::string& path) const { write_file(path, serialize()); }

void ParamStore::load(const std::string& path) { deserialize(read_file(path)); }

Tensor& ParamGrads::grad(int pid) {
  if (grads_.size() <= static_cast<size_t>(pid)) {
    grads_.resize(store_->count());
    live_.resize(store_->count(), 0);
  }
  if (!live_[pid]) {
    const Tensor& v = store_->value(pid);
    if (!grads_[pid].same_shape(v)) {
      grads_[pid] = Tensor(v.rows(), v.cols());
      grads_[pid].shape = v.shape;
    } else {
      grads_[pid].fill(0.0f);
    }
    live_[pid] = 1;
  }
  return grads_[pid];
}

const Tensor* ParamGrads::peek(int pid) const {
  if (static_cast<size_t>(pid) >= live_.size() || !live_[pid]) return nullptr;
  return &grads_[pid];
}

void ParamGrads::zero() { std::fill(live_.begin(), live_.end(), 0); }

double ParamGrads::global_norm() const {
  double s = 0.0;
  for (size_t pid = 0; pid < grads_.size(); ++pid) {
    if (live_[pid]) s += l2_norm_sq(grads_[pid]);
  }
  return std::sqrt(s);
}

void ParamGrads::scale(float s) {
  for (size_t pid = 0; pid < grads_.size(); ++pid) {
    if (!live_[pid]) continue;
    for (float& v : grads_[pid].data) v *= s;
  }
}

bool ParamGrads::all_finite() const {
  for (size_t pid = 0; pid < grads_.size(); ++pid) {
    if (live_[pid] && !grads_[pid].all_finite()) return false;
  }
  return true;
}

Tensor orthogonal_init(Rng& rng, int rows, int cols) {
  const bool tall = rows >= cols;
  const int n = tall ? rows : cols;  // vector length
  const int k = tall ? cols : rows;  // number of basis vectors
  std::vector<std::vector<double>> basis(k, std::vector<double>(n));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < n; ++i) basis[j][i] = rng.normal();
  }
  for (int j = 0; j < k; ++j) {
    for (int p = 0; p < j; ++p) {
      double proj = 0.0;
      for (int i = 0; i < n; ++i) proj += basis[j][i] * basis[p][i];
      for (int i = 0; i < n; ++i) basis[j][i] -= proj * basis[p][i];
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += basis[j][i] * basis[j][i];
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      std::fill(basis[j].begin(), basis[j].end(), 0.0);
      basis[j][j % n] = 1.0;
    } else {
      for (int i = 0; i < n; ++i) basis[j][i] /= norm;
    }
  }
  Tensor t(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      t.at(r, c) = static_cast<float>(tall ? basis[c][r] : basis[r][c]);
    }
  }
  return t;
}

Tensor uniform_init(Rng& rng, int rows, int cols, float range) {
  Tensor t(rows, cols);
  for (float& v : t.data) v = static_cast<float>(rng.uniform(-range, range));
  return t;
}

}  // namespace mgs
