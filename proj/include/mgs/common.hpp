#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgs {

// Exit-code mapping used by the CLI: usage 1, data 2, numeric 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG. splitmix64 core; we avoid std:: distributions because
// their output is implementation-defined and corpus/index files must be
// byte-identical for a given seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is irrelevant at our ranges (n << 2^64).
  uint64_t below(uint64_t n) { return next() % n; }

  int index(size_t n) { return static_cast<int>(below(n)); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller without caching (deterministic stream position).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; tag separates call sites.
  Rng fork(uint64_t tag) {
    Rng r(state_ ^ (0x632be59bd9b4e019ULL * (tag + 1)));
    r.next();
    return r;
  }

 private:
  uint64_t state_;
};

// Little-endian binary IO helpers for the fixed file formats.
void put_u32(std::string& out, uint32_t v);
void put_f32(std::string& out, float v);
void put_i8(std::string& out, int8_t v);

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : p_(data), end_(data + size) {}
  uint32_t u32();
  float f32();
  int8_t i8();
  std::string bytes(size_t n);
  void f32_array(float* dst, size_t n);
  void i8_array(int8_t* dst, size_t n);
  bool done() const { return p_ == end_; }
  size_t remaining() const { return static_cast<size_t>(end_ - p_); }

 private:
  void need(size_t n) const;
  const uint8_t* p_;
  const uint8_t* end_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace mgs
