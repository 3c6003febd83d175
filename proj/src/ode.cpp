#include "varprop/ode.hpp"

#include <algorithm>
#include <cmath>

namespace varprop {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// y5 - y4 error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output weights (Hairer, Norsett & Wanner)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double error_norm(const RealVector& err, const RealVector& y0,
                  const RealVector& y1, double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    const double q = err(i) / scale;
    acc += q * q;
  }
  return std::sqrt(acc / double(err.size()));
}

}  // namespace

RealVector integrate_dopri5(const OdeRhs& f, RealVector y, double t0, double t1,
                            std::span<const double> sample_times,
                            const OdeSampleSink& on_sample,
                            const OdeOptions& options, OdeStats* stats) {
  const double span = t1 - t0;
  if (span <= 0.0) throw std::invalid_argument("integrate_dopri5: t1 <= t0");
  OdeStats local;
  OdeStats& st = stats ? *stats : local;

  std::size_t next_sample = 0;
  auto emit_upto = [&](double t_lo, double t_hi, const RealVector& y_lo,
                       const RealVector& diff, const RealVector& r3,
                       const RealVector& r4, const RealVector& r5) {
    while (next_sample < sample_times.size() &&
           sample_times[next_sample] <= t_hi + 1e-14 * std::abs(t_hi)) {
      const double ts = sample_times[next_sample];
      const double h = t_hi - t_lo;
      const double theta = std::clamp((ts - t_lo) / h, 0.0, 1.0);
      const double om = 1.0 - theta;
      RealVector ys =
          y_lo + theta * (diff + om * (r3 + theta * (r4 + om * r5)));
      on_sample(ts, ys);
      ++next_sample;
    }
  };

  // leading samples at exactly t0
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    on_sample(sample_times[next_sample], y);
    ++next_sample;
  }

  double t = t0;
  RealVector k1 = f(t, y);
  ++st.rhs_evaluations;

  double h = options.initial_step;
  if (h <= 0.0) {
    // small but not absurd first step; the controller adapts quickly
    const double ynorm = y.cwiseAbs().maxCoeff();
    const double fnorm = k1.cwiseAbs().maxCoeff();
    h = (fnorm > 1e-12) ? 0.01 * (1.0 + ynorm) / fnorm : 1e-3 * span;
    h = std::min(h, 0.1 * span);
  }

  const double hmin_floor = 1e-14 * std::max(1.0, std::abs(t1));
  RealVector k2, k3, k4, k5, k6, k7, ynew, err;

  for (long step = 0; step < options.max_steps; ++step) {
    if (t >= t1 - 1e-14 * std::max(1.0, std::abs(t1))) break;
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < hmin_floor) throw StepSizeUnderflow(t, h);

    k2 = f(t + c2 * h, y + h * (a21 * k1));
    k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(t + h, ynew);
    st.rhs_evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double enorm = error_norm(err, y, ynew, options.atol, options.rtol);

    if (enorm <= 1.0) {
      ++st.accepted;
      if (!sample_times.empty() && next_sample < sample_times.size()) {
        RealVector diff = ynew - y;
        RealVector r3 = h * k1 - diff;
        RealVector r4 = diff - h * k7 - r3;
        RealVector r5 =
            h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        emit_upto(t, t + h, y, diff, r3, r4, r5);
      }
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      const double factor =
          (enorm > 0.0) ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0) : 5.0;
      if (!last) h = std::min(h * factor, span);
    } else {
      ++st.rejected;
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
    }
  }

  if (t < t1 - 1e-10 * std::max(1.0, std::abs(t1)))
    throw std::runtime_error("integrate_dopri5: max step count exceeded at t = " +
                             std::to_string(t));

  // trailing samples pinned to the endpoint
  while (next_sample < sample_times.size()) {
    on_sample(sample_times[next_sample], y);
    ++next_sample;
  }
  return y;
}

}  // namespace varprop
