#pragma once

#include <array>
#include <string>
#include <vector>

#include "seqlab/matrix.hpp"
#include "seqlab/tape.hpp"

namespace seqlab {

// The eight recurrent weight matrices, in the fixed order used everywhere a
// per-matrix list appears (regularization terms, checkpoints, reports).
enum class GateMatrix : int {
  kUi = 0,
  kUf,
  kUo,
  kUg,
  kWi,
  kWf,
  kWo,
  kWg,
};
inline constexpr int kNumGateMatrices = 8;

const char* gate_matrix_name(GateMatrix m);        // "U_i" .. "W_g"
GateMatrix gate_matrix_from_name(const std::string& name);

// Entrywise p-norm over the flattened matrix with epsilon smoothing:
// (sum_ij (m_ij^2 + eps)^(p/2))^(1/p). eps = 0 recovers the exact norm;
// eps > 0 keeps the term differentiable at 0 for p <= 1.
// Throws std::invalid_argument for p <= 0 or eps < 0.
double lp_norm(const Matrix& m, double p, double eps = 0.0);

struct RegTerm {
  double a = 0.0;  // coefficient, >= 0; 0 disables the term
  double p = 2.0;  // exponent, > 0
};

// One (a, p) pair per recurrent matrix plus a shared smoothing constant.
struct RegSpec {
  std::array<RegTerm, kNumGateMatrices> terms{};
  double epsilon = 1e-8;

  static RegSpec disabled();
  // Same (a, p) for all eight matrices.
  static RegSpec tied(double a, double p, double epsilon = 1e-8);
  RegSpec& set_term(GateMatrix m, double a, double p);
  const RegTerm& term(GateMatrix m) const {
    return terms[static_cast<int>(m)];
  }
  bool any_active() const;
  void validate() const;  // throws on a < 0 or p <= 0 or epsilon < 0
};

// Value-level cost: sum over the eight matrices of a * lp_norm(m, p, eps).
// gates must hold the matrices in GateMatrix order.
double reg_cost_value(std::span<const Matrix> gates, const RegSpec& spec);

// Tape version of the same sum, for training. Returns an invalid Var when
// no term is active. gates must hold the eight parameter Vars in
// GateMatrix order.
Var reg_cost(Tape& tape, std::span<const Var> gates, const RegSpec& spec);

// Deterministic enumeration of candidate specs from coefficient and
// exponent grids. Tied: one spec per (a, p) pair, a-major. Untied: the
// full Cartesian product of per-matrix pair choices (|a|*|p| per matrix,
// last matrix varying fastest). Throws std::invalid_argument on an empty
// grid.
std::vector<RegSpec> sweep_spec(const std::vector<double>& a_grid,
                                const std::vector<double>& p_grid,
                                bool tied = true, double epsilon = 1e-8);

}  // namespace seqlab
