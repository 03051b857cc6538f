#include "seqlab/tape.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqlab {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || static_cast<std::size_t>(v.id) >= nodes_.size()) {
    throw std::invalid_argument("Tape: invalid Var handle");
  }
  return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
  return const_cast<Node&>(static_cast<const Tape*>(this)->node(v));
}

Var Tape::push(Node n) {
  n.grad = Matrix(n.value.rows(), n.value.cols());
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

Var Tape::param(Matrix value) {
  if (sealed_) {
    throw std::invalid_argument("Tape: param() after seal_params()");
  }
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  Var v = push(std::move(n));
  persistent_ = nodes_.size();
  return v;
}

void Tape::seal_params() {
  sealed_ = true;
  persistent_ = nodes_.size();
}

Var Tape::input(Matrix value) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  return push(std::move(n));
}

Matrix& Tape::leaf_value(Var v) {
  Node& n = node(v);
  if (n.op != Op::kLeaf) {
    throw std::invalid_argument("Tape: leaf_value() on a non-leaf node");
  }
  return n.value;
}

double Tape::scalar(Var v) const {
  const Node& n = node(v);
  if (n.value.rows() != 1 || n.value.cols() != 1) {
    throw std::invalid_argument("Tape: scalar() on a non-scalar node " +
                                n.value.shape_str());
  }
  return n.value(0, 0);
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.cols() != bv.rows()) {
    throw std::invalid_argument("Tape::matmul: shape mismatch " +
                                av.shape_str() + " * " + bv.shape_str());
  }
  Node n;
  n.op = Op::kMatMul;
  n.lhs = a.id;
  n.rhs = b.id;
  n.value = seqlab::matmul(av, bv);
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (!av.same_shape(bv)) {
    throw std::invalid_argument("Tape::add: shape mismatch " + av.shape_str() +
                                " + " + bv.shape_str());
  }
  Node n;
  n.op = Op::kAdd;
  n.lhs = a.id;
  n.rhs = b.id;
  n.value = av;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] += bv.data()[i];
  }
  return push(std::move(n));
}

Var Tape::hadamard(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (!av.same_shape(bv)) {
    throw std::invalid_argument("Tape::hadamard: shape mismatch " +
                                av.shape_str() + " . " + bv.shape_str());
  }
  Node n;
  n.op = Op::kHadamard;
  n.lhs = a.id;
  n.rhs = b.id;
  n.value = av;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] *= bv.data()[i];
  }
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.op = Op::kSigmoid;
  n.lhs = a.id;
  n.value = node(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] = stable_sigmoid(n.value.data()[i]);
  }
  return push(std::move(n));
}

Var Tape::tanh_act(Var a) {
  Node n;
  n.op = Op::kTanh;
  n.lhs = a.id;
  n.value = node(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] = std::tanh(n.value.data()[i]);
  }
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Node n;
  n.op = Op::kRelu;
  n.lhs = a.id;
  n.value = node(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    if (n.value.data()[i] < 0.0) n.value.data()[i] = 0.0;
  }
  return push(std::move(n));
}

Var Tape::scale(Var a, double factor) {
  Node n;
  n.op = Op::kScale;
  n.lhs = a.id;
  n.alpha = factor;
  n.value = node(a).value;
  for (std::size_t i = 0; i < n.value.size(); ++i) {
    n.value.data()[i] *= factor;
  }
  return push(std::move(n));
}

Var Tape::abs_pow_sum(Var a, double p, double eps) {
  if (p <= 0.0) {
    throw std::invalid_argument("Tape::abs_pow_sum: p must be > 0");
  }
  if (eps < 0.0) {
    throw std::invalid_argument("Tape::abs_pow_sum: eps must be >= 0");
  }
  const Matrix& av = node(a).value;
  double sum = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double x = av.data()[i];
    sum += std::pow(x * x + eps, p / 2.0);
  }
  Node n;
  n.op = Op::kAbsPowSum;
  n.lhs = a.id;
  n.alpha = p;
  n.beta = eps;
  n.value = Matrix(1, 1, {sum});
  return push(std::move(n));
}

Var Tape::pow_scalar(Var a, double exponent) {
  const Matrix& av = node(a).value;
  if (av.rows() != 1 || av.cols() != 1) {
    throw std::invalid_argument("Tape::pow_scalar: operand must be 1x1");
  }
  Node n;
  n.op = Op::kPowScalar;
  n.lhs = a.id;
  n.alpha = exponent;
  n.value = Matrix(1, 1, {std::pow(av(0, 0), exponent)});
  return push(std::move(n));
}

Var Tape::softmax_cross_entropy(Var logits, const std::vector<int>& labels) {
  const Matrix& lv = node(logits).value;
  if (static_cast<std::size_t>(lv.rows()) != labels.size()) {
    throw std::invalid_argument(
        "Tape::softmax_cross_entropy: one label per logits row required");
  }
  for (int y : labels) {
    if (y < 0 || y >= lv.cols()) {
      throw std::invalid_argument(
          "Tape::softmax_cross_entropy: label out of range");
    }
  }
  // Mean over rows of logsumexp(row) - row[label], computed with the max
  // shift so huge logits cannot overflow.
  double total = 0.0;
  for (int r = 0; r < lv.rows(); ++r) {
    double mx = lv(r, 0);
    for (int c = 1; c < lv.cols(); ++c) mx = std::max(mx, lv(r, c));
    double z = 0.0;
    for (int c = 0; c < lv.cols(); ++c) z += std::exp(lv(r, c) - mx);
    total += mx + std::log(z) - lv(r, labels[r]);
  }
  Node n;
  n.op = Op::kSoftmaxXent;
  n.lhs = logits.id;
  n.index = labels;
  n.value = Matrix(1, 1, {total / lv.rows()});
  return push(std::move(n));
}

Var Tape::row_select(Var m, const std::vector<int>& rows) {
  const Matrix& mv = node(m).value;
  for (int r : rows) {
    if (r < 0 || r >= mv.rows()) {
      throw std::invalid_argument("Tape::row_select: row index out of range");
    }
  }
  Node n;
  n.op = Op::kRowSelect;
  n.lhs = m.id;
  n.index = rows;
  n.value = Matrix(static_cast<int>(rows.size()), mv.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int c = 0; c < mv.cols(); ++c) {
      n.value(static_cast<int>(i), c) = mv(rows[i], c);
    }
  }
  return push(std::move(n));
}

Var Tape::concat_rows(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.cols() != bv.cols()) {
    throw std::invalid_argument("Tape::concat_rows: column counts differ");
  }
  Node n;
  n.op = Op::kConcatRows;
  n.lhs = a.id;
  n.rhs = b.id;
  n.value = Matrix(av.rows() + bv.rows(), av.cols());
  for (int r = 0; r < av.rows(); ++r) {
    for (int c = 0; c < av.cols(); ++c) n.value(r, c) = av(r, c);
  }
  for (int r = 0; r < bv.rows(); ++r) {
    for (int c = 0; c < bv.cols(); ++c) n.value(av.rows() + r, c) = bv(r, c);
  }
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  const Node& ln = node(loss);
  if (ln.value.rows() != 1 || ln.value.cols() != 1) {
    throw std::invalid_argument("Tape::backward: loss must be a 1x1 scalar");
  }
  if (backward_run_) {
    throw std::logic_error(
        "Tape::backward: called twice without reset(); gradients would "
        "silently accumulate");
  }
  backward_run_ = true;
  nodes_[loss.id].grad(0, 0) = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    backward_one(nodes_[i]);
  }
}

void Tape::backward_one(const Node& n) {
  switch (n.op) {
    case Op::kLeaf:
      return;
    case Op::kMatMul: {
      // dA += dC * B^T ; dB += A^T * dC
      matmul_nt_acc(n.grad, nodes_[n.rhs].value, nodes_[n.lhs].grad);
      matmul_tn_acc(nodes_[n.lhs].value, n.grad, nodes_[n.rhs].grad);
      return;
    }
    case Op::kAdd: {
      Matrix& ga = nodes_[n.lhs].grad;
      Matrix& gb = nodes_[n.rhs].grad;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        ga.data()[i] += n.grad.data()[i];
        gb.data()[i] += n.grad.data()[i];
      }
      return;
    }
    case Op::kHadamard: {
      Matrix& ga = nodes_[n.lhs].grad;
      Matrix& gb = nodes_[n.rhs].grad;
      const Matrix& av = nodes_[n.lhs].value;
      const Matrix& bv = nodes_[n.rhs].value;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        ga.data()[i] += n.grad.data()[i] * bv.data()[i];
        gb.data()[i] += n.grad.data()[i] * av.data()[i];
      }
      return;
    }
    case Op::kSigmoid: {
      Matrix& ga = nodes_[n.lhs].grad;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        const double s = n.value.data()[i];
        ga.data()[i] += n.grad.data()[i] * s * (1.0 - s);
      }
      return;
    }
    case Op::kTanh: {
      Matrix& ga = nodes_[n.lhs].grad;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        const double t = n.value.data()[i];
        ga.data()[i] += n.grad.data()[i] * (1.0 - t * t);
      }
      return;
    }
    case Op::kRelu: {
      // Derivative at exactly 0 is taken as 0.
      Matrix& ga = nodes_[n.lhs].grad;
      const Matrix& av = nodes_[n.lhs].value;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        if (av.data()[i] > 0.0) ga.data()[i] += n.grad.data()[i];
      }
      return;
    }
    case Op::kScale: {
      Matrix& ga = nodes_[n.lhs].grad;
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        ga.data()[i] += n.alpha * n.grad.data()[i];
      }
      return;
    }
    case Op::kAbsPowSum: {
      // d/dx (x^2 + eps)^(p/2) = p * x * (x^2 + eps)^(p/2 - 1)
      Matrix& ga = nodes_[n.lhs].grad;
      const Matrix& av = nodes_[n.lhs].value;
      const double g = n.grad(0, 0);
      const double p = n.alpha;
      const double eps = n.beta;
      for (std::size_t i = 0; i < av.size(); ++i) {
        const double x = av.data()[i];
        ga.data()[i] += g * p * x * std::pow(x * x + eps, p / 2.0 - 1.0);
      }
      return;
    }
    case Op::kPowScalar: {
      const double s = nodes_[n.lhs].value(0, 0);
      nodes_[n.lhs].grad(0, 0) +=
          n.grad(0, 0) * n.alpha * std::pow(s, n.alpha - 1.0);
      return;
    }
    case Op::kSoftmaxXent: {
      // dlogits = (softmax(row) - onehot(label)) / rows
      Matrix& ga = nodes_[n.lhs].grad;
      const Matrix& lv = nodes_[n.lhs].value;
      const double g = n.grad(0, 0) / lv.rows();
      for (int r = 0; r < lv.rows(); ++r) {
        double mx = lv(r, 0);
        for (int c = 1; c < lv.cols(); ++c) mx = std::max(mx, lv(r, c));
        double z = 0.0;
        for (int c = 0; c < lv.cols(); ++c) z += std::exp(lv(r, c) - mx);
        for (int c = 0; c < lv.cols(); ++c) {
          const double soft = std::exp(lv(r, c) - mx) / z;
          ga(r, c) += g * (soft - (c == n.index[r] ? 1.0 : 0.0));
        }
      }
      return;
    }
    case Op::kRowSelect: {
      Matrix& gm = nodes_[n.lhs].grad;
      for (std::size_t i = 0; i < n.index.size(); ++i) {
        for (int c = 0; c < gm.cols(); ++c) {
          gm(n.index[i], c) += n.grad(static_cast<int>(i), c);
        }
      }
      return;
    }
    case Op::kConcatRows: {
      Matrix& ga = nodes_[n.lhs].grad;
      Matrix& gb = nodes_[n.rhs].grad;
      for (int r = 0; r < ga.rows(); ++r) {
        for (int c = 0; c < ga.cols(); ++c) ga(r, c) += n.grad(r, c);
      }
      for (int r = 0; r < gb.rows(); ++r) {
        for (int c = 0; c < gb.cols(); ++c) {
          gb(r, c) += n.grad(ga.rows() + r, c);
        }
      }
      return;
    }
  }
  throw std::logic_error("Tape::backward_one: unhandled op");
}

void Tape::reset() {
  nodes_.resize(persistent_);
  for (Node& n : nodes_) {
    n.grad.fill(0.0);
  }
  backward_run_ = false;
}

}  // namespace seqlab
