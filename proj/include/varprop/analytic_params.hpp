#pragma once

#include <array>

#include "varprop/operator_core.hpp"

namespace varprop {

/// Time-independent traces of block products. The two-block fields (a2..abab)
/// are always meaningful; the three-block extension is populated when
/// has_three_block is set. Field names follow the index pattern, e.g.
/// a2b2 = Tr[A^2 B^2], abab = Tr[(AB)^2], abac = Tr[ABAC].
struct TraceRecord {
  double a2 = 0, b2 = 0, ab = 0, a2b2 = 0, abab = 0;

  bool has_three_block = false;
  double c2 = 0, ac = 0, bc = 0;
  double a2c2 = 0, b2c2 = 0, a2bc = 0, a2cb = 0;
  double acac = 0, bcbc = 0, abac = 0;
};

/// chi = (Tr[A^2B^2] - Tr[(AB)^2]) / (Tr[A^2]Tr[B^2] - Tr[AB]^2); nonnegative
/// for Hermitian blocks, zero iff the blocks commute.
double chi_factor(const TraceRecord& traces);

/// c_j(t) ~ linear * t + cubic * t^3 / 6 per slot.
struct CubicParams {
  struct SlotCoeffs {
    double linear = 0.0;
    double cubic = 0.0;
    double at(double t) const { return linear * t + cubic * t * t * t / 6.0; }
  };
  std::vector<SlotCoeffs> slots;
};

enum class ActionKind { FirstOrder, NormSquared };  // the two variational actions

/// Cubic parameters for the two-factor ansatz e^{ic0 A} e^{ic1 B}.
CubicParams cubic_2exp(const TraceRecord& traces, ActionKind action);

/// Cubic parameters for the palindromic three-factor ansatz
/// e^{ic0 A} e^{ic1 B} e^{ic0 A} (slots: outer, middle). Both actions give the
/// same coefficients here.
CubicParams cubic_3exp(const TraceRecord& traces);

/// Ising chain closed forms with the trace-table labeling A = ZZ + z-field
/// block, B = x-field block (the reverse of the split builder's ordering).
TraceRecord ising_closed_traces(double J, double h_x, double h_z, int n);

/// XXZ nearest-neighbour closed forms; A = even-start bonds (floor counts),
/// B = odd-start bonds (ceil counts).
TraceRecord xxz_nn_closed_traces(double J1, double delta1, int n);

/// XXZ with next-nearest neighbours; A = XX, B = YY, C = ZZ blocks. All
/// fifteen traces, including the N = 3 special cases.
TraceRecord xxz_nnn_closed_traces(double J1, double J2, double delta1,
                                  double delta2, int n);

/// Two-block record for (A, B+C) derived from a three-block record.
TraceRecord grouped_outer_traces(const TraceRecord& three);

/// Two-block record for the inner stage (B, C) of a three-block record.
TraceRecord inner_stage_traces(const TraceRecord& three);

/// Two-step-split parameters (c0..c5) at time t for the nested ansatz
/// e^{ic0 A} [e^{ic3 B} e^{ic4 C} e^{ic5 B}] e^{ic2 A}: the outer stage treats
/// B+C as one block; the inner stage runs at effective time -c1(t).
std::array<double, 6> three_block_two_step_params(const TraceRecord& outer,
                                                  const TraceRecord& inner,
                                                  double t);

}  // namespace varprop
