#include "seqlab/regularization.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace seqlab {

namespace {
constexpr const char* kGateNames[kNumGateMatrices] = {
    "U_i", "U_f", "U_o", "U_g", "W_i", "W_f", "W_o", "W_g"};
}

const char* gate_matrix_name(GateMatrix m) {
  return kGateNames[static_cast<int>(m)];
}

GateMatrix gate_matrix_from_name(const std::string& name) {
  for (int i = 0; i < kNumGateMatrices; ++i) {
    if (name == kGateNames[i]) return static_cast<GateMatrix>(i);
  }
  throw std::invalid_argument("unknown gate matrix name: " + name);
}

double lp_norm(const Matrix& m, double p, double eps) {
  if (p <= 0.0) throw std::invalid_argument("lp_norm: p must be > 0");
  if (eps < 0.0) throw std::invalid_argument("lp_norm: eps must be >= 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.data()[i];
    sum += std::pow(x * x + eps, p / 2.0);
  }
  return std::pow(sum, 1.0 / p);
}

RegSpec RegSpec::disabled() { return RegSpec{}; }

RegSpec RegSpec::tied(double a, double p, double epsilon) {
  RegSpec spec;
  spec.epsilon = epsilon;
  for (auto& t : spec.terms) {
    t.a = a;
    t.p = p;
  }
  spec.validate();
  return spec;
}

RegSpec& RegSpec::set_term(GateMatrix m, double a, double p) {
  terms[static_cast<int>(m)] = RegTerm{a, p};
  return *this;
}

bool RegSpec::any_active() const {
  for (const auto& t : terms) {
    if (t.a != 0.0) return true;
  }
  return false;
}

void RegSpec::validate() const {
  if (epsilon < 0.0) {
    throw std::invalid_argument("RegSpec: epsilon must be >= 0");
  }
  for (int i = 0; i < kNumGateMatrices; ++i) {
    if (terms[i].a < 0.0) {
      throw std::invalid_argument(std::string("RegSpec: coefficient for ") +
                                  kGateNames[i] + " must be >= 0");
    }
    if (terms[i].p <= 0.0) {
      throw std::invalid_argument(std::string("RegSpec: exponent for ") +
                                  kGateNames[i] + " must be > 0");
    }
  }
}

double reg_cost_value(std::span<const Matrix> gates, const RegSpec& spec) {
  if (gates.size() != kNumGateMatrices) {
    throw std::invalid_argument("reg_cost_value: expected 8 gate matrices");
  }
  spec.validate();
  double cost = 0.0;
  for (int i = 0; i < kNumGateMatrices; ++i) {
    const RegTerm& t = spec.terms[i];
    if (t.a == 0.0) continue;
    cost += t.a * lp_norm(gates[i], t.p, spec.epsilon);
  }
  return cost;
}

Var reg_cost(Tape& tape, std::span<const Var> gates, const RegSpec& spec) {
  if (gates.size() != kNumGateMatrices) {
    throw std::invalid_argument("reg_cost: expected 8 gate matrix Vars");
  }
  spec.validate();
  Var total;
  for (int i = 0; i < kNumGateMatrices; ++i) {
    const RegTerm& t = spec.terms[i];
    if (t.a == 0.0) continue;
    Var norm = tape.pow_scalar(
        tape.abs_pow_sum(gates[i], t.p, spec.epsilon), 1.0 / t.p);
    Var term = tape.scale(norm, t.a);
    total = total.valid() ? tape.add(total, term) : term;
  }
  return total;
}

std::vector<RegSpec> sweep_spec(const std::vector<double>& a_grid,
                                const std::vector<double>& p_grid, bool tied,
                                double epsilon) {
  if (a_grid.empty() || p_grid.empty()) {
    throw std::invalid_argument("sweep_spec: grids must be non-empty");
  }
  std::vector<RegTerm> pairs;
  pairs.reserve(a_grid.size() * p_grid.size());
  for (double a : a_grid) {
    for (double p : p_grid) pairs.push_back(RegTerm{a, p});
  }

  std::vector<RegSpec> specs;
  if (tied) {
    for (const RegTerm& t : pairs) {
      specs.push_back(RegSpec::tied(t.a, t.p, epsilon));
    }
    return specs;
  }

  // Odometer over 8 digits in base |pairs|, last matrix fastest.
  const std::size_t n = pairs.size();
  std::uint64_t count = 1;
  for (int i = 0; i < kNumGateMatrices; ++i) count *= n;
  specs.reserve(count);
  std::array<std::size_t, kNumGateMatrices> digit{};
  for (std::uint64_t it = 0; it < count; ++it) {
    RegSpec spec;
    spec.epsilon = epsilon;
    for (int i = 0; i < kNumGateMatrices; ++i) {
      spec.terms[i] = pairs[digit[i]];
    }
    specs.push_back(spec);
    for (int i = kNumGateMatrices - 1; i >= 0; --i) {
      if (++digit[i] < n) break;
      digit[i] = 0;
    }
  }
  return specs;
}

}  // namespace seqlab
