#include "mgs/common.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mgs {

double Rng::normal() {
  // Rejection-free Box-Muller; discard the second variate so the stream
  // position does not depend on call history.
  double u1 = uniform();
  double u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void put_u32(std::string& out, uint32_t v) {
  char b[4];
  b[0] = static_cast<char>(v & 0xff);
  b[1] = static_cast<char>((v >> 8) & 0xff);
  b[2] = static_cast<char>((v >> 16) & 0xff);
  b[3] = static_cast<char>((v >> 24) & 0xff);
  out.append(b, 4);
}

void put_f32(std::string& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

void put_i8(std::string& out, int8_t v) { out.push_back(static_cast<char>(v)); }

void ByteReader::need(size_t n) const {
  if (static_cast<size_t>(end_ - p_) < n) throw DataError("truncated binary file");
}

uint32_t ByteReader::u32() {
  need(4);
  uint32_t v = static_cast<uint32_t>(p_[0]) | (static_cast<uint32_t>(p_[1]) << 8) |
               (static_cast<uint32_t>(p_[2]) << 16) | (static_cast<uint32_t>(p_[3]) << 24);
  p_ += 4;
  return v;
}

float ByteReader::f32() {
  uint32_t bits = u32();
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

int8_t ByteReader::i8() {
  need(1);
  int8_t v = static_cast<int8_t>(*p_);
  ++p_;
  return v;
}

std::string ByteReader::bytes(size_t n) {
  need(n);
  std::string s(reinterpret_cast<const char*>(p_), n);
  p_ += n;
  return s;
}

void ByteReader::f32_array(float* dst, size_t n) {
  for (size_t i = 0; i < n; ++i) dst[i] = f32();
}

void ByteReader::i8_array(int8_t* dst, size_t n) {
  need(n);
  std::memcpy(dst, p_, n);
  p_ += n;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write file: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw DataError("short write: " + path);
}

}  // namespace mgs
