#pragma once

#include <functional>
#include <span>
#include <stdexcept>

#include "varprop/operator_core.hpp"

namespace varprop {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 = choose automatically
  long max_steps = 1000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(double t, double h)
      : std::runtime_error("ODE step size underflow at t = " + std::to_string(t) +
                           " (h = " + std::to_string(h) + ")"),
        time(t) {}
  double time;
};

using OdeRhs = std::function<RealVector(double, const RealVector&)>;
using OdeSampleSink = std::function<void(double, const RealVector&)>;

/// Dormand-Prince 4(5) with PI-free step control and the standard quartic
/// dense-output interpolant. `sample_times` must be sorted ascending within
/// [t0, t1]; `on_sample` receives interpolated states at those times.
/// Returns the final state at t1.
RealVector integrate_dopri5(const OdeRhs& f, RealVector y0, double t0, double t1,
                            std::span<const double> sample_times,
                            const OdeSampleSink& on_sample,
                            const OdeOptions& options = {},
                            OdeStats* stats = nullptr);

}  // namespace varprop
