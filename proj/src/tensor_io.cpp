#include "freev/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace freev {

namespace {

static_assert(std::endian::native == std::endian::little,
              "FVT1 I/O assumes a little-endian host");

constexpr char kMagic[4] = {'F', 'V', 'T', '1'};
constexpr std::uint32_t kDtypeF32 = 1;

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("FVT1: truncated stream");
  return v;
}

}  // namespace

std::uint64_t Fvt1Tensor::element_count() const {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

void write_fvt1(std::ostream& os, const Fvt1Tensor& t) {
  if (t.element_count() != t.data.size())
    throw std::invalid_argument("FVT1: payload size does not match dims");
  os.write(kMagic, 4);
  write_raw(os, kDtypeF32);
  write_raw(os, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) write_raw(os, d);
  os.write(reinterpret_cast<const char*>(t.data.data()),
           static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  if (!os) throw std::runtime_error("FVT1: write failed");
}

Fvt1Tensor read_fvt1(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("FVT1: bad magic");
  const auto dtype = read_raw<std::uint32_t>(is);
  if (dtype != kDtypeF32) throw std::runtime_error("FVT1: unsupported dtype code");
  const auto ndim = read_raw<std::uint32_t>(is);
  if (ndim > 8) throw std::runtime_error("FVT1: unreasonable ndim");
  Fvt1Tensor t;
  t.dims.resize(ndim);
  for (auto& d : t.dims) d = read_raw<std::uint64_t>(is);
  const std::uint64_t count = t.element_count();
  if (count > std::numeric_limits<std::size_t>::max() / sizeof(float))
    throw std::runtime_error("FVT1: tensor too large");
  t.data.resize(count);
  is.read(reinterpret_cast<char*>(t.data.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (!is) throw std::runtime_error("FVT1: truncated payload");
  return t;
}

void write_fvt1(const std::string& path, const Fvt1Tensor& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("FVT1: cannot open for writing: " + path);
  write_fvt1(os, t);
}

Fvt1Tensor read_fvt1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("FVT1: cannot open: " + path);
  return read_fvt1(is);
}

Fvt1Tensor tensor_from_matrix(const Mat& m) {
  Fvt1Tensor t;
  t.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  t.data.resize(static_cast<std::size_t>(m.size()));
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data[idx++] = static_cast<float>(m(r, c));
  return t;
}

Fvt1Tensor tensor_from_vector(const Vec& v) {
  Fvt1Tensor t;
  t.dims = {static_cast<std::uint64_t>(v.size())};
  t.data.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) t.data[static_cast<std::size_t>(i)] = static_cast<float>(v[i]);
  return t;
}

Mat matrix_from_tensor(const Fvt1Tensor& t) {
  if (t.dims.size() != 2) throw std::runtime_error("FVT1: expected a 2-D tensor");
  Mat m(static_cast<Eigen::Index>(t.dims[0]), static_cast<Eigen::Index>(t.dims[1]));
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.data[idx++];
  return m;
}

Vec vector_from_tensor(const Fvt1Tensor& t) {
  if (t.dims.size() != 1) throw std::runtime_error("FVT1: expected a 1-D tensor");
  Vec v(static_cast<Eigen::Index>(t.dims[0]));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = t.data[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace freev
