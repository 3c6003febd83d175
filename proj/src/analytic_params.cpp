#include "varprop/analytic_params.hpp"

#include <cmath>
#include <stdexcept>

namespace varprop {

double chi_factor(const TraceRecord& traces) {
  const double num = traces.a2b2 - traces.abab;
  const double den = traces.a2 * traces.b2 - traces.ab * traces.ab;
  if (std::abs(den) < 1e-14 * std::max(1.0, traces.a2 * traces.b2))
    throw std::invalid_argument("chi_factor: blocks are (near-)proportional");
  return num / den;
}

CubicParams cubic_2exp(const TraceRecord& traces, ActionKind action) {
  const double chi = chi_factor(traces);
  CubicParams params;
  if (action == ActionKind::FirstOrder) {
    params.slots = {{-1.0, -2.0 * chi * traces.ab},
                    {-1.0, 2.0 * chi * traces.a2}};
  } else {
    params.slots = {{-1.0, -2.0 * chi * (traces.b2 + traces.ab)},
                    {-1.0, 2.0 * chi * (traces.a2 + traces.ab)}};
  }
  return params;
}

CubicParams cubic_3exp(const TraceRecord& traces) {
  const double chi = chi_factor(traces);
  CubicParams params;
  params.slots = {{-0.5, -chi * (traces.b2 + 0.5 * traces.ab) / 2.0},
                  {-1.0, chi * (traces.ab + 0.5 * traces.a2)}};
  return params;
}

TraceRecord ising_closed_traces(double J, double h_x, double h_z, int n) {
  if (n < 2) throw std::invalid_argument("ising_closed_traces: need N >= 2");
  const double d = std::ldexp(1.0, n);  // 2^N
  TraceRecord r;
  r.a2 = (n - 1) * d * J * J / 16.0 + n * d * h_z * h_z / 4.0;
  r.b2 = n * d * h_x * h_x / 4.0;
  r.ab = 0.0;
  r.a2b2 = n * d * h_x * h_x / 4.0 *
           ((n - 1) * J * J / 16.0 + n * h_z * h_z / 4.0);
  r.abab = d * h_x * h_x / 4.0 *
           (J * J / 16.0 * (n - 1) * (n - 4) + h_z * h_z / 4.0 * n * (n - 2));
  return r;
}

TraceRecord xxz_nn_closed_traces(double J1, double delta1, int n) {
  if (n < 3) throw std::invalid_argument("xxz_nn_closed_traces: need N >= 3");
  const double d = std::ldexp(1.0, n);
  const double floor_bonds = double((n - 1) / 2);  // even-start bonds
  const double ceil_bonds = double(n / 2);         // odd-start bonds
  const double unit = J1 * J1 * d * (2.0 + delta1 * delta1) / 16.0;
  const double quart = std::pow(J1 / 4.0, 4.0);
  TraceRecord r;
  r.a2 = unit * floor_bonds;
  r.b2 = unit * ceil_bonds;
  r.ab = 0.0;
  r.a2b2 = quart * std::pow(2.0 + delta1 * delta1, 2.0) * d * floor_bonds * ceil_bonds;
  r.abab = r.a2b2 - 4.0 * quart * (1.0 + 2.0 * delta1 * delta1) * d * (n - 2);
  return r;
}

TraceRecord xxz_nnn_closed_traces(double J1, double J2, double delta1,
                                  double delta2, int n) {
  if (n < 3) throw std::invalid_argument("xxz_nnn_closed_traces: need N >= 3");
  const double d = std::ldexp(1.0, n);
  const double w1 = J1 * J1 * (n - 1) + J2 * J2 * (n - 2);
  const double wd =
      delta1 * delta1 * J1 * J1 * (n - 1) + delta2 * delta2 * J2 * J2 * (n - 2);
  const double scale = std::ldexp(1.0, n - 8);  // 2^(N-8)
  const double poly = double(n) * n - 11.0 * n + 22.0;
  const double tail = (n == 3) ? 1.0 : double(n) * n - 8.0 * n + 20.0;

  TraceRecord r;
  r.has_three_block = true;
  r.a2 = d / 16.0 * w1;
  r.b2 = r.a2;
  r.c2 = d / 16.0 * wd;
  r.ab = r.ac = r.bc = 0.0;
  r.a2b2 = scale * w1 * w1;
  r.a2c2 = scale * wd * w1;
  r.b2c2 = r.a2c2;
  r.a2bc = -(J1 / 4.0) * (J1 / 4.0) * (J2 / 4.0) *
           (delta2 * J2 / 2.0 + delta1 * J1) * d * (n - 2);
  r.a2cb = r.a2bc;
  r.abab = scale * (std::pow(J1, 4.0) * (n - 3) * (n - 3) +
                    2.0 * J1 * J1 * J2 * J2 * poly + std::pow(J2, 4.0) * tail);
  r.acac = scale * (delta1 * delta1 * std::pow(J1, 4.0) * (n - 3) * (n - 3) +
                    (delta1 * delta1 + delta2 * delta2) * J1 * J1 * J2 * J2 * poly +
                    delta2 * delta2 * std::pow(J2, 4.0) * tail);
  r.bcbc = r.acac;
  r.abac = std::ldexp(1.0, n - 7) * (n - 2) * J1 * J1 * J2 *
           (2.0 * delta1 * J1 + delta2 * J2);
  return r;
}

TraceRecord grouped_outer_traces(const TraceRecord& three) {
  if (!three.has_three_block)
    throw std::invalid_argument("grouped_outer_traces: need a three-block record");
  TraceRecord r;
  r.a2 = three.a2;
  r.b2 = three.b2 + three.c2 + 2.0 * three.bc;
  r.ab = three.ab + three.ac;
  // Tr[A^2 (B+C)^2] and Tr[(A(B+C))^2] expand into the stored cross traces.
  r.a2b2 = three.a2b2 + three.a2c2 + three.a2bc + three.a2cb;
  r.abab = three.abab + three.acac + 2.0 * three.abac;
  return r;
}

TraceRecord inner_stage_traces(const TraceRecord& three) {
  if (!three.has_three_block)
    throw std::invalid_argument("inner_stage_traces: need a three-block record");
  TraceRecord r;
  r.a2 = three.b2;
  r.b2 = three.c2;
  r.ab = three.bc;
  r.a2b2 = three.b2c2;
  r.abab = three.bcbc;
  return r;
}

std::array<double, 6> three_block_two_step_params(const TraceRecord& outer,
                                                  const TraceRecord& inner,
                                                  double t) {
  const CubicParams stage1 = cubic_3exp(outer);
  const CubicParams stage2 = cubic_3exp(inner);
  const double c0 = stage1.slots[0].at(t);
  const double c1 = stage1.slots[1].at(t);
  // Inner stage: B+C evolved for effective time -c1(t).
  const double c3 = stage2.slots[0].at(-c1);
  const double c4 = stage2.slots[1].at(-c1);
  return {c0, c1, c0, c3, c4, c3};
}

}  // namespace varprop
