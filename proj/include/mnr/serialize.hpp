#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mnr {

// Little-endian section container: magic "MNR1", version u8, then sections of
// `tag u8, name-length u16, name bytes, element-count u64, payload`.
// tag 1 = UTF-8 blob (count in bytes), tag 2 = float32 tensor (count in
// elements, row-major for matrices). Bit-exact across platforms.

struct BadMagicError : std::runtime_error {
  BadMagicError() : std::runtime_error("bad magic: not a model file") {}
};
struct UnsupportedVersionError : std::runtime_error {
  explicit UnsupportedVersionError(int v)
      : std::runtime_error("unsupported model version " + std::to_string(v)) {}
};
struct TruncatedFileError : std::runtime_error {
  TruncatedFileError() : std::runtime_error("truncated model file") {}
};

inline constexpr char kModelMagic[4] = {'M', 'N', 'R', '1'};
inline constexpr uint8_t kModelVersion = 1;
inline constexpr uint8_t kTagBlob = 1;
inline constexpr uint8_t kTagTensor = 2;

void write_model_header(std::ostream& out);
// Throws BadMagicError / UnsupportedVersionError / TruncatedFileError.
void read_model_header(std::istream& in);

void write_blob_section(std::ostream& out, const std::string& name,
                        const std::string& data);
void write_f32_section(std::ostream& out, const std::string& name,
                       const std::vector<float>& data);

// Readers validate the expected section name and tag.
std::string read_blob_section(std::istream& in, const std::string& expected_name);
std::vector<float> read_f32_section(std::istream& in, const std::string& expected_name);

template <typename Derived>
void write_matrix_section(std::ostream& out, const std::string& name,
                          const Eigen::MatrixBase<Derived>& m) {
  std::vector<float> buf;
  buf.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      buf.push_back(static_cast<float>(m(r, c)));
    }
  }
  write_f32_section(out, name, buf);
}

template <typename Matrix>
void read_matrix_section(std::istream& in, const std::string& name, Matrix& m,
                         Eigen::Index rows, Eigen::Index cols) {
  std::vector<float> buf = read_f32_section(in, name);
  if (static_cast<Eigen::Index>(buf.size()) != rows * cols) {
    throw std::runtime_error("section " + name + ": unexpected element count");
  }
  m.resize(rows, cols);
  size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = buf[k++];
  }
}

// Rounds entries through float32 so a later save -> load is lossless.
template <typename Derived>
void quantize_to_f32(Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = static_cast<double>(static_cast<float>(m(r, c)));
    }
  }
}

}  // namespace mnr
