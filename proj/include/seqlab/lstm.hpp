#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "seqlab/checkpoint.hpp"
#include "seqlab/regularization.hpp"
#include "seqlab/reorder.hpp"
#include "seqlab/tape.hpp"

namespace seqlab {

// An LSTM classifier instance: one tape holding the trainable parameters
// (embedding, the eight recurrent matrices, the A..H extras for the
// nonlinear-gate variant, and the softmax head) plus the forward builders.
//
// Baseline cell:
//   i = sigma(x U_i + h W_i)        f = sigma(x U_f + h W_f)
//   o = sigma(x U_o + h W_o)        g = tanh(x U_g + h W_g)
//   c' = f.c + i.g                  (eq5_literal: c' = sigma(f.c + i.g))
//   h' = tanh(c') . o
//
// Nonlinear-gate cell replaces every gate preactivation with
//   relu(x U) M1 + relu(h W) M2
// using the extra square matrices (A,B) for i, (C,D) for f, (E,F) for o
// and (G,H) for the candidate.
class LstmModel {
 public:
  LstmModel(const ModelConfig& config, std::uint64_t init_seed);
  explicit LstmModel(const Checkpoint& ckpt);

  const ModelConfig& config() const { return config_; }
  Tape& tape() { return tape_; }

  Var embedding() const { return embedding_; }
  Var gate(GateMatrix m) const { return gates_[static_cast<int>(m)]; }
  std::array<Var, kNumGateMatrices> gate_vars() const { return gates_; }
  // A..H by index 0..7; only valid for the nonlinear-gate variant.
  Var extra(int idx) const;
  Var head_weight() const { return head_w_; }
  Var head_bias() const { return head_b_; }
  std::vector<Var> parameters() const;

  struct State {
    Var h;
    Var c;
  };
  State initial_state(int batch_rows);
  // One cell step; x is B x E, state fields are B x H.
  State step(Var x, State state);

  // Unrolled forward over fixed-length token rows; returns B x C logits.
  // perm, when given, must have length seq_len; the token fed at time t is
  // tokens[perm[t]]. Token ids must lie in [0, vocab_size).
  Var sequence_logits(const std::vector<std::vector<int>>& batch_tokens,
                      const Permutation* perm = nullptr);
  Var sequence_logits(const std::vector<int>& tokens,
                      const Permutation* perm = nullptr);

  // Mean softmax cross-entropy of logits against labels.
  Var data_loss(Var logits, const std::vector<int>& labels);

  Checkpoint snapshot() const;

 private:
  void register_params(const Checkpoint* from);

  ModelConfig config_;
  Tape tape_;
  Var embedding_;
  std::array<Var, kNumGateMatrices> gates_{};
  std::array<Var, 8> extras_{};  // A..H
  Var head_w_;
  Var head_b_;
  std::uint64_t init_seed_ = 0;
};

// Tensor names used in checkpoints, in model order.
std::vector<std::string> model_tensor_names(const ModelConfig& config);

}  // namespace seqlab
