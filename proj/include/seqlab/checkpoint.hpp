#pragma once

#include <string>
#include <utility>
#include <vector>

#include "seqlab/matrix.hpp"

namespace seqlab {

enum class CellKind { kBaseline, kNonlinearGate };

struct CellVariant {
  CellKind kind = CellKind::kBaseline;
  // Apply the extra sigmoid in the cell-state update (C_t = sigma(f*C + i*g))
  // instead of the standard unsquashed update. Off by default.
  bool eq5_literal = false;
};

struct ModelConfig {
  int vocab_size = 0;
  int embedding_dim = 0;
  int hidden_dim = 0;
  int num_classes = 0;
  int seq_len = 0;
  CellVariant variant;

  void validate() const;  // throws std::invalid_argument on bad dims
};

// A frozen parameter snapshot: shapes, variant flags, and every matrix by
// name. The on-disk form is a little-endian binary layout (see
// checkpoint.cpp); save -> load round-trips bit-exactly.
struct Checkpoint {
  ModelConfig config;
  std::vector<std::pair<std::string, Matrix>> tensors;  // fixed model order

  const Matrix& tensor(const std::string& name) const;
  bool has_tensor(const std::string& name) const;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

}  // namespace seqlab
