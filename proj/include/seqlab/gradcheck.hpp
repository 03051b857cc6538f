#pragma once

#include <functional>
#include <span>

#include "seqlab/tape.hpp"

namespace seqlab {

struct GradCheckResult {
  double max_rel_error = 0.0;
  int entries_checked = 0;
  int entries_skipped = 0;
  // Location of the worst entry, for diagnostics.
  int worst_param = -1;
  int worst_row = -1;
  int worst_col = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference verification of the tape's analytic gradients.
//
// build_loss must deterministically rebuild the transient part of the
// graph from the current parameter values (the harness resets the tape
// around every evaluation). For each entry w of each listed parameter the
// analytic gradient is compared against (loss(w+h) - loss(w-h)) / 2h and
// the relative error |analytic - numeric| / max(1, |analytic|, |numeric|)
// is folded into the maximum. skip_entry(param_index, row, col), when
// given, excludes entries (e.g. values sitting on a ReLU kink).
GradCheckResult finite_diff_check(
    Tape& tape, std::span<const Var> params,
    const std::function<Var(Tape&)>& build_loss, double step = 1e-5,
    const std::function<bool(int, int, int)>& skip_entry = {});

}  // namespace seqlab
