#include "mnr/serialize.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace mnr {

namespace {

void put_u8(std::ostream& out, uint8_t v) { out.put(static_cast<char>(v)); }

void put_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

uint8_t get_u8(std::istream& in) {
  int c = in.get();
  if (c == EOF) throw TruncatedFileError();
  return static_cast<uint8_t>(c);
}

uint16_t get_u16(std::istream& in) {
  uint16_t v = get_u8(in);
  v |= static_cast<uint16_t>(get_u8(in)) << 8;
  return v;
}

uint64_t get_u64(std::istream& in) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(get_u8(in)) << (8 * i);
  return v;
}

void write_section_header(std::ostream& out, uint8_t tag, const std::string& name,
                          uint64_t count) {
  put_u8(out, tag);
  put_u16(out, static_cast<uint16_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  put_u64(out, count);
}

uint64_t read_section_header(std::istream& in, uint8_t expected_tag,
                             const std::string& expected_name) {
  uint8_t tag = get_u8(in);
  uint16_t len = get_u16(in);
  std::string name(len, '\0');
  in.read(name.data(), len);
  if (in.gcount() != len) throw TruncatedFileError();
  uint64_t count = get_u64(in);
  if (tag != expected_tag || name != expected_name) {
    throw std::runtime_error("unexpected section '" + name + "' (wanted '" +
                             expected_name + "')");
  }
  return count;
}

}  // namespace

void write_model_header(std::ostream& out) {
  out.write(kModelMagic, 4);
  put_u8(out, kModelVersion);
}

void read_model_header(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0) {
    throw BadMagicError();
  }
  uint8_t version = get_u8(in);
  if (version != kModelVersion) throw UnsupportedVersionError(version);
}

void write_blob_section(std::ostream& out, const std::string& name,
                        const std::string& data) {
  write_section_header(out, kTagBlob, name, data.size());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void write_f32_section(std::ostream& out, const std::string& name,
                       const std::vector<float>& data) {
  write_section_header(out, kTagTensor, name, data.size());
  for (float f : data) {
    uint32_t bits = std::bit_cast<uint32_t>(f);
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b, 4);
  }
}

std::string read_blob_section(std::istream& in, const std::string& expected_name) {
  uint64_t count = read_section_header(in, kTagBlob, expected_name);
  std::string data(count, '\0');
  in.read(data.data(), static_cast<std::streamsize>(count));
  if (static_cast<uint64_t>(in.gcount()) != count) throw TruncatedFileError();
  return data;
}

std::vector<float> read_f32_section(std::istream& in, const std::string& expected_name) {
  uint64_t count = read_section_header(in, kTagTensor, expected_name);
  std::vector<float> data(count);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= static_cast<uint32_t>(get_u8(in)) << (8 * b);
    data[i] = std::bit_cast<float>(bits);
  }
  return data;
}

}  // namespace mnr
