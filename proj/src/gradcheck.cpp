#include "seqlab/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace seqlab {

GradCheckResult finite_diff_check(
    Tape& tape, std::span<const Var> params,
    const std::function<Var(Tape&)>& build_loss, double step,
    const std::function<bool(int, int, int)>& skip_entry) {
  if (step <= 0.0) {
    throw std::invalid_argument("finite_diff_check: step must be > 0");
  }

  auto eval_loss = [&]() {
    tape.reset();
    Var loss = build_loss(tape);
    return tape.scalar(loss);
  };

  // Analytic gradients first; copied out because every numeric probe
  // resets the tape.
  tape.reset();
  Var loss = build_loss(tape);
  tape.backward(loss);
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (Var p : params) analytic.push_back(tape.grad(p));

  GradCheckResult result;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Matrix& value = tape.leaf_value(params[pi]);
    for (int r = 0; r < value.rows(); ++r) {
      for (int c = 0; c < value.cols(); ++c) {
        if (skip_entry && skip_entry(static_cast<int>(pi), r, c)) {
          ++result.entries_skipped;
          continue;
        }
        const double saved = value(r, c);
        value(r, c) = saved + step;
        const double plus = eval_loss();
        value(r, c) = saved - step;
        const double minus = eval_loss();
        value(r, c) = saved;

        const double numeric = (plus - minus) / (2.0 * step);
        const double a = analytic[pi](r, c);
        const double rel =
            std::abs(a - numeric) /
            std::max({1.0, std::abs(a), std::abs(numeric)});
        ++result.entries_checked;
        if (rel > result.max_rel_error) {
          result.max_rel_error = rel;
          result.worst_param = static_cast<int>(pi);
          result.worst_row = r;
          result.worst_col = c;
          result.worst_analytic = a;
          result.worst_numeric = numeric;
        }
      }
    }
  }
  tape.reset();
  return result;
}

}  // namespace seqlab
