#include "cadpipe/pipeline/digest.h"

#include <openssl/evp.h>

#include <array>

#include "cadpipe/core/error.h"
#include "cadpipe/ingest/csv.h"

namespace cadpipe::pipeline {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string file_sha256(const std::filesystem::path& path) {
  return sha256_hex(ingest::read_text_file(path));
}

}  // namespace cadpipe::pipeline
