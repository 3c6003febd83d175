#pragma once

#include <string>
#include <vector>

#include "varprop/models.hpp"

namespace varprop {

/// exp(-iHt) via the cached eigendecomposition.
Matrix exact_propagator(const Generator& h, double t);

/// Fixed-coefficient product formula: ordered (block name, coefficient) pairs,
/// each factor contributing exp(-i * coeff * t * Block). Coefficients per
/// block sum to 1, so the formula is exact for mutually commuting blocks.
struct SplitFormula {
  std::string name;
  std::vector<std::pair<std::string, double>> factors;
};

SplitFormula ts1_formula();
SplitFormula ts2_formula();
/// Ruth's fourth-order composition TS2(pt) TS2(qt) TS2(pt) with
/// p = 1/(2 - 2^(1/3)), q = 1 - 2p, kept as the merged seven-factor form.
SplitFormula ruth4_formula();
/// Seven-factor scheme for three blocks: U_BC(t) e^{-itA} U_BC(t) with
/// U_BC = e^{-it/4 C} e^{-it/2 B} e^{-it/4 C}.
SplitFormula ts7_abc_formula();

/// Evaluates a formula on a split (block names resolved by position A, B[, C]
/// against the split's stored order).
Matrix apply_formula(const SplitFormula& formula, const HamiltonianSplit& split,
                     double t);

Matrix ts1(const HamiltonianSplit& split, double t);
Matrix ts2(const HamiltonianSplit& split, double t);
Matrix ruth4(const HamiltonianSplit& split, double t);
Matrix ts7_abc(const HamiltonianSplit& split, double t);

struct StroboscopicResult {
  Matrix u;
  long n = 0;
};

/// (U_step^n, n) with n = floor(t_total / tau); the product is re-unitarized
/// by polar projection every 50 multiplications.
StroboscopicResult repeat_stroboscopic(const Matrix& u_step, double t_total,
                                       double tau);

}  // namespace varprop
