#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "freev/spectrogram.hpp"

namespace freev {

// FVT1 tensor file: magic "FVT1", u32 dtype code (1 = f32 little-endian),
// u32 ndim, ndim x u64 dims, then row-major f32 payload.
struct Fvt1Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> data;  // row-major

  std::uint64_t element_count() const;
};

void write_fvt1(std::ostream& os, const Fvt1Tensor& t);
Fvt1Tensor read_fvt1(std::istream& is);
void write_fvt1(const std::string& path, const Fvt1Tensor& t);
Fvt1Tensor read_fvt1(const std::string& path);

// Eigen glue. Matrices map to 2-D tensors (rows = dim 0), vectors to 1-D.
Fvt1Tensor tensor_from_matrix(const Mat& m);
Fvt1Tensor tensor_from_vector(const Vec& v);
Mat matrix_from_tensor(const Fvt1Tensor& t);
Vec vector_from_tensor(const Fvt1Tensor& t);

}  // namespace freev
