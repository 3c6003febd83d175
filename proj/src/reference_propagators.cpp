#include "varprop/reference_propagators.hpp"

#include <cmath>

namespace varprop {

Matrix exact_propagator(const Generator& h, double t) {
  return h.exp_itheta(-t);
}

SplitFormula ts1_formula() {
  return {"TS1", {{"A", 1.0}, {"B", 1.0}}};
}

SplitFormula ts2_formula() {
  return {"TS2", {{"A", 0.5}, {"B", 1.0}, {"A", 0.5}}};
}

SplitFormula ruth4_formula() {
  const double p = 1.0 / (2.0 - std::cbrt(2.0));
  const double q = 1.0 - 2.0 * p;
  // TS2(pt) TS2(qt) TS2(pt) with adjacent outer A half-steps merged.
  return {"RUTH4",
          {{"A", p / 2.0},
           {"B", p},
           {"A", (p + q) / 2.0},
           {"B", q},
           {"A", (p + q) / 2.0},
           {"B", p},
           {"A", p / 2.0}}};
}

SplitFormula ts7_abc_formula() {
  return {"TS7_ABC",
          {{"C", 0.25},
           {"B", 0.5},
           {"C", 0.25},
           {"A", 1.0},
           {"C", 0.25},
           {"B", 0.5},
           {"C", 0.25}}};
}

Matrix apply_formula(const SplitFormula& formula, const HamiltonianSplit& split,
                     double t) {
  const Eigen::Index dim = split.dim();
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& [name, coeff] : formula.factors) {
    std::size_t pos = std::size_t(name[0] - 'A');
    if (name.size() != 1 || pos >= split.blocks.size())
      throw std::invalid_argument("formula references block '" + name +
                                  "' not present in split");
    u = u * split.blocks[pos].op->exp_itheta(-coeff * t);
  }
  return u;
}

namespace {

void require_block_count(const HamiltonianSplit& split, std::size_t n,
                         const char* who) {
  if (split.blocks.size() != n)
    throw std::invalid_argument(std::string(who) + ": split must have " +
                                std::to_string(n) + " blocks, got " +
                                std::to_string(split.blocks.size()));
}

}  // namespace

Matrix ts1(const HamiltonianSplit& split, double t) {
  require_block_count(split, 2, "ts1");
  return apply_formula(ts1_formula(), split, t);
}

Matrix ts2(const HamiltonianSplit& split, double t) {
  require_block_count(split, 2, "ts2");
  return apply_formula(ts2_formula(), split, t);
}

Matrix ruth4(const HamiltonianSplit& split, double t) {
  require_block_count(split, 2, "ruth4");
  return apply_formula(ruth4_formula(), split, t);
}

Matrix ts7_abc(const HamiltonianSplit& split, double t) {
  require_block_count(split, 3, "ts7_abc");
  return apply_formula(ts7_abc_formula(), split, t);
}

StroboscopicResult repeat_stroboscopic(const Matrix& u_step, double t_total,
                                       double tau) {
  if (tau <= 0.0) throw std::invalid_argument("repeat_stroboscopic: tau <= 0");
  const long n = long(std::floor(t_total / tau));
  return {unitary_power(u_step, n), n};
}

}  // namespace varprop
