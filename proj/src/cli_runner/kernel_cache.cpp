#include <cstring>
#include <fstream>

#include <openssl/evp.h>

#include "dqed/cli_runner.hpp"
#include "dqed/core/errors.hpp"

namespace dqed::cli {
namespace {

constexpr char magic[8] = {'D', 'Q', 'E', 'D', 'K', 'R', 'N', '1'};
constexpr std::uint32_t format_version = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

Sha256 sha256(const std::string& text) {
  Sha256 out{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
    throw Error("sha256: digest failed");
  return out;
}

std::string hex(const Sha256& h) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::uint8_t b : h) {
    s += digits[b >> 4];
    s += digits[b & 15];
  }
  return s;
}

void save_kernel(const std::filesystem::path& file, const MatXc& m, const Sha256& schema_hash) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  // Write to a sibling and rename, so readers never see a half-written file.
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("save_kernel: cannot write " + tmp.string());
    os.write(magic, sizeof magic);
    put(os, format_version);
    put(os, static_cast<std::uint64_t>(m.rows()));
    put(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(schema_hash.data()), schema_hash.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        put(os, m(i, j).real());
        put(os, m(i, j).imag());
      }
    if (!os) throw Error("save_kernel: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::optional<MatXc> load_kernel(const std::filesystem::path& file, const Sha256& schema_hash) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char mg[8];
  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  Sha256 h{};
  if (!is.read(mg, sizeof mg) || std::memcmp(mg, magic, sizeof mg) != 0) return std::nullopt;
  if (!get(is, version) || version != format_version) return std::nullopt;
  if (!get(is, rows) || !get(is, cols)) return std::nullopt;
  if (!is.read(reinterpret_cast<char*>(h.data()), h.size()) || h != schema_hash) return std::nullopt;
  if (rows > (1u << 16) || cols > (1u << 16)) return std::nullopt;
  MatXc m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double re, im;
      if (!get(is, re) || !get(is, im)) return std::nullopt;
      m(i, j) = cd(re, im);
    }
  if (is.peek() != std::char_traits<char>::eof()) return std::nullopt;
  return m;
}

DiscreteKernel KernelCache::get_or_build(const std::string& schema, GridPtr grid,
                                         const std::function<DiscreteKernel()>& build, bool* hit) {
  const Sha256 h = sha256(schema);
  const std::filesystem::path file = dir_ / (hex(h) + ".bin");
  if (auto m = load_kernel(file, h); m && static_cast<std::size_t>(m->rows()) == grid->dim()) {
    if (hit) *hit = true;
    return DiscreteKernel(std::move(grid), std::move(*m));
  }
  DiscreteKernel k = build();
  save_kernel(file, k.m, h);
  if (hit) *hit = false;
  return k;
}

}  // namespace dqed::cli
