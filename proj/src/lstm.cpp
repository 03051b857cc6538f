#include "seqlab/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "seqlab/rng.hpp"

namespace seqlab {

namespace {

constexpr const char* kExtraNames[8] = {"A", "B", "C", "D",
                                        "E", "F", "G", "H"};

Matrix uniform_init(int rows, int cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m.data()[i] = rng.next_uniform(-bound, bound);
  }
  return m;
}

// Identity plus small noise: the nonlinear-gate model starts close to a
// ReLU-gated baseline instead of a random deep map.
Matrix near_identity_init(int n, double noise, Rng& rng) {
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = (r == c ? 1.0 : 0.0) + rng.next_uniform(-noise, noise);
    }
  }
  return m;
}

}  // namespace

std::vector<std::string> model_tensor_names(const ModelConfig& config) {
  std::vector<std::string> names;
  names.emplace_back("embedding");
  for (int i = 0; i < kNumGateMatrices; ++i) {
    names.emplace_back(gate_matrix_name(static_cast<GateMatrix>(i)));
  }
  if (config.variant.kind == CellKind::kNonlinearGate) {
    for (const char* n : kExtraNames) names.emplace_back(n);
  }
  names.emplace_back("V");
  names.emplace_back("b");
  return names;
}

LstmModel::LstmModel(const ModelConfig& config, std::uint64_t init_seed)
    : config_(config), init_seed_(init_seed) {
  config_.validate();
  register_params(nullptr);
}

LstmModel::LstmModel(const Checkpoint& ckpt) : config_(ckpt.config) {
  config_.validate();
  register_params(&ckpt);
}

void LstmModel::register_params(const Checkpoint* from) {
  const int e = config_.embedding_dim;
  const int h = config_.hidden_dim;
  Rng rng(derive_seed(init_seed_, "init"));

  auto make = [&](const std::string& name, int rows, int cols,
                  bool near_id) -> Var {
    Matrix m;
    if (from) {
      m = from->tensor(name);
      if (m.rows() != rows || m.cols() != cols) {
        throw std::invalid_argument("checkpoint tensor " + name +
                                    " has shape " + m.shape_str() +
                                    ", expected " +
                                    Matrix(rows, cols).shape_str());
      }
    } else if (near_id) {
      m = near_identity_init(rows, 0.01, rng);
    } else {
      m = uniform_init(rows, cols, 1.0 / std::sqrt(rows), rng);
    }
    return tape_.param(std::move(m));
  };

  embedding_ = make("embedding", config_.vocab_size, e, false);
  for (int i = 0; i < kNumGateMatrices; ++i) {
    const GateMatrix gm = static_cast<GateMatrix>(i);
    const bool is_u = i < 4;
    gates_[i] = make(gate_matrix_name(gm), is_u ? e : h, h, false);
  }
  if (config_.variant.kind == CellKind::kNonlinearGate) {
    for (int i = 0; i < 8; ++i) {
      extras_[i] = make(kExtraNames[i], h, h, true);
    }
  }
  head_w_ = make("V", h, config_.num_classes, false);
  if (from) {
    const Matrix& b = from->tensor("b");
    if (b.rows() != 1 || b.cols() != config_.num_classes) {
      throw std::invalid_argument("checkpoint tensor b has shape " +
                                  b.shape_str());
    }
    head_b_ = tape_.param(b);
  } else {
    head_b_ = tape_.param(Matrix(1, config_.num_classes));
  }
  tape_.seal_params();
}

Var LstmModel::extra(int idx) const {
  if (config_.variant.kind != CellKind::kNonlinearGate) {
    throw std::invalid_argument(
        "LstmModel::extra: baseline variant has no A..H matrices");
  }
  if (idx < 0 || idx >= 8) {
    throw std::invalid_argument("LstmModel::extra: index out of range");
  }
  return extras_[idx];
}

std::vector<Var> LstmModel::parameters() const {
  std::vector<Var> out;
  out.push_back(embedding_);
  for (Var v : gates_) out.push_back(v);
  if (config_.variant.kind == CellKind::kNonlinearGate) {
    for (Var v : extras_) out.push_back(v);
  }
  out.push_back(head_w_);
  out.push_back(head_b_);
  return out;
}

LstmModel::State LstmModel::initial_state(int batch_rows) {
  return State{tape_.input(Matrix(batch_rows, config_.hidden_dim)),
               tape_.input(Matrix(batch_rows, config_.hidden_dim))};
}

LstmModel::State LstmModel::step(Var x, State state) {
  auto preact = [&](GateMatrix u, GateMatrix w, int extra_x,
                    int extra_h) -> Var {
    if (config_.variant.kind == CellKind::kBaseline) {
      return tape_.add(tape_.matmul(x, gate(u)), tape_.matmul(state.h, gate(w)));
    }
    return tape_.add(
        tape_.matmul(tape_.relu(tape_.matmul(x, gate(u))), extras_[extra_x]),
        tape_.matmul(tape_.relu(tape_.matmul(state.h, gate(w))),
                     extras_[extra_h]));
  };

  Var i = tape_.sigmoid(preact(GateMatrix::kUi, GateMatrix::kWi, 0, 1));
  Var f = tape_.sigmoid(preact(GateMatrix::kUf, GateMatrix::kWf, 2, 3));
  Var o = tape_.sigmoid(preact(GateMatrix::kUo, GateMatrix::kWo, 4, 5));
  Var g = tape_.tanh_act(preact(GateMatrix::kUg, GateMatrix::kWg, 6, 7));

  Var c_pre = tape_.add(tape_.hadamard(f, state.c), tape_.hadamard(i, g));
  Var c = config_.variant.eq5_literal ? tape_.sigmoid(c_pre) : c_pre;
  Var h = tape_.hadamard(tape_.tanh_act(c), o);
  return State{h, c};
}

Var LstmModel::sequence_logits(
    const std::vector<std::vector<int>>& batch_tokens, const Permutation* perm) {
  if (batch_tokens.empty()) {
    throw std::invalid_argument("sequence_logits: empty batch");
  }
  const int batch = static_cast<int>(batch_tokens.size());
  const int len = config_.seq_len;
  for (const auto& row : batch_tokens) {
    if (static_cast<int>(row.size()) != len) {
      throw std::invalid_argument(
          "sequence_logits: every token row must have length seq_len");
    }
  }
  if (perm && static_cast<int>(perm->size()) != len) {
    throw std::invalid_argument(
        "sequence_logits: permutation length must equal seq_len");
  }

  State state = initial_state(batch);
  std::vector<int> ids(batch);
  for (int t = 0; t < len; ++t) {
    const int src = perm ? (*perm)[t] : t;
    for (int b = 0; b < batch; ++b) ids[b] = batch_tokens[b][src];
    Var x = tape_.row_select(embedding_, ids);  // validates id < vocab_size
    state = step(x, state);
  }
  // Broadcast the 1 x C bias over the batch by re-selecting its only row.
  Var bias = tape_.row_select(head_b_, std::vector<int>(batch, 0));
  return tape_.add(tape_.matmul(state.h, head_w_), bias);
}

Var LstmModel::sequence_logits(const std::vector<int>& tokens,
                               const Permutation* perm) {
  return sequence_logits(std::vector<std::vector<int>>{tokens}, perm);
}

Var LstmModel::data_loss(Var logits, const std::vector<int>& labels) {
  return tape_.softmax_cross_entropy(logits, labels);
}

Checkpoint LstmModel::snapshot() const {
  Checkpoint ckpt;
  ckpt.config = config_;
  auto names = model_tensor_names(config_);
  std::vector<Var> params = parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    ckpt.tensors.emplace_back(names[i], tape_.value(params[i]));
  }
  return ckpt;
}

}  // namespace seqlab
