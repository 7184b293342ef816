#include "freev/weights_io.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "freev/tensor_io.hpp"

namespace freev {

namespace {

Fvt1Tensor conv_to_tensor(const Conv1dWeights& c) {
  Fvt1Tensor t;
  const int out = c.out_dim(), in = c.in_dim(), K = c.kernel();
  t.dims = {static_cast<std::uint64_t>(out), static_cast<std::uint64_t>(in),
            static_cast<std::uint64_t>(K)};
  t.data.resize(static_cast<std::size_t>(out) * in * K);
  std::size_t idx = 0;
  for (int o = 0; o < out; ++o)
    for (int i = 0; i < in; ++i)
      for (int k = 0; k < K; ++k) t.data[idx++] = static_cast<float>(c.taps[k](o, i));
  return t;
}

Conv1dWeights conv_from_tensor(const Fvt1Tensor& t, const Vec& bias) {
  if (t.dims.size() != 3) throw std::runtime_error("FVW1: conv weight must be 3-D");
  const int out = static_cast<int>(t.dims[0]);
  const int in = static_cast<int>(t.dims[1]);
  const int K = static_cast<int>(t.dims[2]);
  Conv1dWeights c;
  c.taps.assign(K, Mat(out, in));
  std::size_t idx = 0;
  for (int o = 0; o < out; ++o)
    for (int i = 0; i < in; ++i)
      for (int k = 0; k < K; ++k) c.taps[k](o, i) = t.data[idx++];
  c.bias = bias;
  return c;
}

// storage order for one block, shared by writer and reader
const char* const kBlockFields[] = {"dw_weight", "dw_bias",    "norm_gamma", "norm_beta",
                                    "pw1_weight", "pw1_bias",  "grn_gamma",  "grn_beta",
                                    "pw2_weight", "pw2_bias"};

std::vector<std::string> tensor_names(const NetManifest& m) {
  std::vector<std::string> names;
  auto add_conv = [&](const std::string& base) {
    names.push_back(base + ".weight");
    names.push_back(base + ".bias");
  };
  auto add_block = [&](const std::string& base) {
    for (const char* f : kBlockFields) names.push_back(base + "." + f);
  };
  add_conv("psp_in");
  for (int i = 0; i < m.psp_blocks; ++i) add_block("psp_block" + std::to_string(i));
  add_conv("psp_out_r");
  add_conv("psp_out_i");
  for (int i = 0; i < m.asp_blocks; ++i) add_block("asp_block" + std::to_string(i));
  return names;
}

}  // namespace

void save_weights(const std::string& path, const GeneratorWeights& w) {
  const NetManifest& m = w.manifest;
  m.validate();

  std::ostringstream manifest;
  manifest << "format_version=" << m.format_version << "\n"
           << "n_mels=" << m.n_mels << "\n"
           << "n_freq=" << m.n_freq << "\n"
           << "psp_dim=" << m.psp_dim << "\n"
           << "psp_blocks=" << m.psp_blocks << "\n"
           << "asp_blocks=" << m.asp_blocks << "\n"
           << "hidden=" << m.hidden << "\n"
           << "kernel=" << m.kernel << "\n";
  const auto names = tensor_names(m);
  for (const auto& n : names) manifest << "tensor=" << n << "\n";
  const std::string mtext = manifest.str();

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("FVW1: cannot open for writing: " + path);
  os.write("FVW1", 4);
  const std::uint32_t mlen = static_cast<std::uint32_t>(mtext.size());
  os.write(reinterpret_cast<const char*>(&mlen), 4);
  os.write(mtext.data(), mlen);

  auto write_block = [&](const ConvNeXtV2BlockWeights& b) {
    write_fvt1(os, tensor_from_matrix(b.dw_weight));
    write_fvt1(os, tensor_from_vector(b.dw_bias));
    write_fvt1(os, tensor_from_vector(b.norm_gamma));
    write_fvt1(os, tensor_from_vector(b.norm_beta));
    write_fvt1(os, tensor_from_matrix(b.pw1_weight));
    write_fvt1(os, tensor_from_vector(b.pw1_bias));
    write_fvt1(os, tensor_from_vector(b.grn_gamma));
    write_fvt1(os, tensor_from_vector(b.grn_beta));
    write_fvt1(os, tensor_from_matrix(b.pw2_weight));
    write_fvt1(os, tensor_from_vector(b.pw2_bias));
  };

  write_fvt1(os, conv_to_tensor(w.psp_in));
  write_fvt1(os, tensor_from_vector(w.psp_in.bias));
  for (const auto& b : w.psp_blocks) write_block(b);
  write_fvt1(os, conv_to_tensor(w.psp_out_r));
  write_fvt1(os, tensor_from_vector(w.psp_out_r.bias));
  write_fvt1(os, conv_to_tensor(w.psp_out_i));
  write_fvt1(os, tensor_from_vector(w.psp_out_i.bias));
  for (const auto& b : w.asp_blocks) write_block(b);
  if (!os) throw std::runtime_error("FVW1: write failed");
}

GeneratorWeights load_weights(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("FVW1: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "FVW1", 4) != 0) throw std::runtime_error("FVW1: bad magic");
  std::uint32_t mlen = 0;
  is.read(reinterpret_cast<char*>(&mlen), 4);
  if (!is || mlen > (1u << 20)) throw std::runtime_error("FVW1: bad manifest length");
  std::string mtext(mlen, '\0');
  is.read(mtext.data(), mlen);
  if (!is) throw std::runtime_error("FVW1: truncated manifest");

  NetManifest m;
  std::vector<std::string> listed;
  std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"format_version", [&](const std::string& v) { m.format_version = std::stoi(v); }},
      {"n_mels", [&](const std::string& v) { m.n_mels = std::stoi(v); }},
      {"n_freq", [&](const std::string& v) { m.n_freq = std::stoi(v); }},
      {"psp_dim", [&](const std::string& v) { m.psp_dim = std::stoi(v); }},
      {"psp_blocks", [&](const std::string& v) { m.psp_blocks = std::stoi(v); }},
      {"asp_blocks", [&](const std::string& v) { m.asp_blocks = std::stoi(v); }},
      {"hidden", [&](const std::string& v) { m.hidden = std::stoi(v); }},
      {"kernel", [&](const std::string& v) { m.kernel = std::stoi(v); }},
  };
  std::istringstream ms(mtext);
  std::string line;
  while (std::getline(ms, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("FVW1: malformed manifest line");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "tensor") {
      listed.push_back(value);
    } else if (auto it = setters.find(key); it != setters.end()) {
      it->second(value);
    } else {
      throw std::runtime_error("FVW1: unknown manifest key: " + key);
    }
  }
  if (m.format_version != 1)
    throw std::runtime_error("FVW1: unsupported format version " +
                             std::to_string(m.format_version));
  m.validate();
  if (listed != tensor_names(m))
    throw std::runtime_error("FVW1: tensor list does not match the manifest hyperparameters");

  auto read_vec = [&](int expect) {
    Vec v = vector_from_tensor(read_fvt1(is));
    if (v.size() != expect) throw std::runtime_error("FVW1: unexpected vector length");
    return v;
  };
  auto read_mat = [&](int rows, int cols) {
    Mat mat = matrix_from_tensor(read_fvt1(is));
    if (mat.rows() != rows || mat.cols() != cols)
      throw std::runtime_error("FVW1: unexpected matrix shape");
    return mat;
  };
  auto read_conv = [&](int in, int out) {
    const Fvt1Tensor t = read_fvt1(is);
    if (t.dims.size() != 3 || static_cast<int>(t.dims[0]) != out ||
        static_cast<int>(t.dims[1]) != in || static_cast<int>(t.dims[2]) != m.kernel)
      throw std::runtime_error("FVW1: unexpected conv shape");
    return conv_from_tensor(t, read_vec(out));
  };
  auto read_block = [&](int dim) {
    ConvNeXtV2BlockWeights b;
    b.dw_weight = read_mat(dim, m.kernel);
    b.dw_bias = read_vec(dim);
    b.norm_gamma = read_vec(dim);
    b.norm_beta = read_vec(dim);
    b.pw1_weight = read_mat(m.hidden, dim);
    b.pw1_bias = read_vec(m.hidden);
    b.grn_gamma = read_vec(m.hidden);
    b.grn_beta = read_vec(m.hidden);
    b.pw2_weight = read_mat(dim, m.hidden);
    b.pw2_bias = read_vec(dim);
    return b;
  };

  GeneratorWeights w;
  w.manifest = m;
  w.psp_in = read_conv(m.n_mels, m.psp_dim);
  for (int i = 0; i < m.psp_blocks; ++i) w.psp_blocks.push_back(read_block(m.psp_dim));
  w.psp_out_r = read_conv(m.psp_dim, m.n_freq);
  w.psp_out_i = read_conv(m.psp_dim, m.n_freq);
  for (int i = 0; i < m.asp_blocks; ++i) w.asp_blocks.push_back(read_block(m.n_freq));
  return w;
}

}  // namespace freev
