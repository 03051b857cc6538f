#pragma once

#include <cstdint>
#include <vector>

#include "seqlab/matrix.hpp"

namespace seqlab {

// Handle to a node on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Minimal reverse-mode differentiation engine over dense matrices. Nodes
// record each forward operation in creation order; backward() accumulates
// gradients in exact reverse order, additively when a node feeds several
// consumers.
//
// Usage contract: register trainable parameters first, call seal_params(),
// then per step build the transient forward graph, call backward() once,
// read/update values and grads, and call reset() before the next step.
// A second backward() without reset() throws.
class Tape {
 public:
  enum class Op : std::uint8_t {
    kLeaf,
    kMatMul,
    kAdd,
    kHadamard,
    kSigmoid,
    kTanh,
    kRelu,
    kScale,        // alpha * x
    kAbsPowSum,    // sum((x^2 + eps)^(p/2)) -> 1x1
    kPowScalar,    // 1x1 scalar ^ alpha
    kSoftmaxXent,  // mean softmax cross-entropy over rows -> 1x1
    kRowSelect,    // gather rows by index
    kConcatRows,   // vertical stack
  };

  // Trainable leaf; only legal before seal_params().
  Var param(Matrix value);
  // Marks the end of the persistent parameter prefix.
  void seal_params();
  bool sealed() const { return sealed_; }
  // Transient leaf (not a parameter); gradient is computed but usually unused.
  Var input(Matrix value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var sigmoid(Var a);
  Var tanh_act(Var a);
  Var relu(Var a);
  Var scale(Var a, double factor);
  Var abs_pow_sum(Var a, double p, double eps);
  Var pow_scalar(Var a, double exponent);
  // logits: B x C; labels: B entries in [0, C). Returns the mean loss.
  Var softmax_cross_entropy(Var logits, const std::vector<int>& labels);
  Var row_select(Var m, const std::vector<int>& rows);
  Var concat_rows(Var a, Var b);

  const Matrix& value(Var v) const { return node(v).value; }
  // Mutable access to a leaf's value (optimizer updates, finite differences).
  Matrix& leaf_value(Var v);
  const Matrix& grad(Var v) const { return node(v).grad; }

  double scalar(Var v) const;  // value of a 1x1 node

  // Seeds d(loss)/d(loss) = 1 and sweeps in reverse creation order.
  // loss must be 1x1.
  void backward(Var loss);

  // Drops transient nodes, zeroes every remaining gradient, and re-arms
  // backward().
  void reset();

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Op op = Op::kLeaf;
    int lhs = -1;
    int rhs = -1;
    double alpha = 0.0;  // scale factor / p / pow exponent
    double beta = 0.0;   // eps for kAbsPowSum
    std::vector<int> index;  // rows for kRowSelect, labels for kSoftmaxXent
    Matrix value;
    Matrix grad;
  };

  const Node& node(Var v) const;
  Node& node(Var v);
  Var push(Node n);
  void backward_one(const Node& n);

  std::vector<Node> nodes_;
  std::size_t persistent_ = 0;
  bool sealed_ = false;
  bool backward_run_ = false;
};

}  // namespace seqlab
