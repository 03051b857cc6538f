#include "seqlab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace seqlab {

// Layout (all integers little-endian):
//   magic "SEQLABC1" (8 bytes)
//   u32 vocab_size, embedding_dim, hidden_dim, num_classes, seq_len
//   u8 cell_kind, u8 eq5_literal, u16 reserved
//   u32 tensor_count
//   per tensor: u32 name_len, name bytes, u32 rows, u32 cols,
//               rows*cols f64 values as raw IEEE-754 bit patterns

namespace {

constexpr char kMagic[8] = {'S', 'E', 'Q', 'L', 'A', 'B', 'C', '1'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void ModelConfig::validate() const {
  if (vocab_size < 1 || embedding_dim < 1 || hidden_dim < 1 ||
      num_classes < 1 || seq_len < 1) {
    throw std::invalid_argument("ModelConfig: all dimensions must be >= 1");
  }
}

const Matrix& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return m;
  }
  throw std::invalid_argument("Checkpoint: no tensor named " + name);
}

bool Checkpoint::has_tensor(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return true;
  }
  return false;
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("Checkpoint::save: cannot open " + path);
  }
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(config.vocab_size));
  put_u32(out, static_cast<std::uint32_t>(config.embedding_dim));
  put_u32(out, static_cast<std::uint32_t>(config.hidden_dim));
  put_u32(out, static_cast<std::uint32_t>(config.num_classes));
  put_u32(out, static_cast<std::uint32_t>(config.seq_len));
  const std::uint8_t kind =
      config.variant.kind == CellKind::kNonlinearGate ? 1 : 0;
  const std::uint8_t eq5 = config.variant.eq5_literal ? 1 : 0;
  const std::uint16_t reserved = 0;
  out.write(reinterpret_cast<const char*>(&kind), 1);
  out.write(reinterpret_cast<const char*>(&eq5), 1);
  out.write(reinterpret_cast<const char*>(&reserved), 2);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, m] : tensors) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("Checkpoint::save: write failed for " + path);
  }
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("Checkpoint::load: cannot open " + path);
  }
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("Checkpoint::load: " + path +
                             " is not a checkpoint file");
  }
  Checkpoint ckpt;
  ckpt.config.vocab_size = static_cast<int>(get_u32(in));
  ckpt.config.embedding_dim = static_cast<int>(get_u32(in));
  ckpt.config.hidden_dim = static_cast<int>(get_u32(in));
  ckpt.config.num_classes = static_cast<int>(get_u32(in));
  ckpt.config.seq_len = static_cast<int>(get_u32(in));
  std::uint8_t kind = 0, eq5 = 0;
  std::uint16_t reserved = 0;
  in.read(reinterpret_cast<char*>(&kind), 1);
  in.read(reinterpret_cast<char*>(&eq5), 1);
  in.read(reinterpret_cast<char*>(&reserved), 2);
  ckpt.config.variant.kind =
      kind ? CellKind::kNonlinearGate : CellKind::kBaseline;
  ckpt.config.variant.eq5_literal = eq5 != 0;
  const std::uint32_t count = get_u32(in);
  for (std::uint32_t i = 0; i < count && in; ++i) {
    const std::uint32_t name_len = get_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const int rows = static_cast<int>(get_u32(in));
    const int cols = static_cast<int>(get_u32(in));
    if (rows < 0 || cols < 0) {
      throw std::runtime_error("Checkpoint::load: corrupt tensor shape in " +
                               path);
    }
    Matrix m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (!in) {
    throw std::runtime_error("Checkpoint::load: truncated file " + path);
  }
  ckpt.config.validate();
  return ckpt;
}

}  // namespace seqlab
