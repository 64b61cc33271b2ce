// Adaptive embedded Dormand-Prince 5(4) integrator with 4th-order dense
// output. Generic over Eigen vector/matrix states with real or complex
// scalars; the right-hand side is any callable rhs(t, y) -> state.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace srchi {

struct OdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepSizeUnderflowError : OdeError {
  double time;
  explicit StepSizeUnderflowError(double t)
      : OdeError("step size underflow at t = " + std::to_string(t)),
        time(t) {}
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double initial_step = 0.0;  // 0 selects the automatic guess
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 10'000'000;
};

namespace dopri5 {

inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                        a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                        a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                        c5 = 8.0 / 9.0;
// Difference between the 5th- and 4th-order solutions.
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                        e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights.
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

}  // namespace dopri5

namespace detail {

template <class State>
double scaled_rms_norm(const State& err, const State& y0, const State& y1,
                       double atol, double rtol) {
  const auto ea = err.cwiseAbs().array();
  const auto sc =
      atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array();
  const double n = static_cast<double>(err.size());
  return std::sqrt((ea / sc).square().sum() / n);
}

template <class State>
double hairer_norm(const State& v, const State& ref, double atol,
                   double rtol) {
  const auto va = v.cwiseAbs().array();
  const auto sc = atol + rtol * ref.cwiseAbs().array();
  const double n = static_cast<double>(v.size());
  return std::sqrt((va / sc).square().sum() / n);
}

}  // namespace detail

template <class State, class Rhs>
class Dopri5Integrator {
 public:
  Dopri5Integrator(Rhs rhs, OdeOptions opts = {})
      : rhs_(std::move(rhs)), opts_(opts) {}

  /// Integrate from (t0, y0) to t_end. sample_times must be nondecreasing
  /// and lie within [t0, t_end]; each is emitted through sample(t, y) using
  /// dense output of the enclosing accepted step. Returns y(t_end).
  template <class Sampler>
  State integrate(State y, double t0, double t_end,
                  std::span<const double> sample_times, Sampler&& sample) {
    namespace dp = dopri5;
    if (!(t_end >= t0)) throw OdeError("integration interval is reversed");

    std::size_t next = 0;
    while (next < sample_times.size() && sample_times[next] <= t0) {
      sample(sample_times[next], y);
      ++next;
    }
    if (t_end == t0) return y;

    double t = t0;
    State k1 = rhs_(t, y);
    double h = opts_.initial_step > 0.0 ? opts_.initial_step
                                        : initial_step_guess(t, y, k1, t_end);
    h = std::min({h, opts_.max_step, t_end - t});

    bool rejected = false;
    for (long step = 0; step < opts_.max_steps; ++step) {
      if (t + h == t) throw StepSizeUnderflowError(t);
      const bool last = (t + h >= t_end);
      if (last) h = t_end - t;

      const State k2 = rhs_(t + dp::c2 * h, (y + h * (dp::a21 * k1)).eval());
      const State k3 = rhs_(t + dp::c3 * h,
                            (y + h * (dp::a31 * k1 + dp::a32 * k2)).eval());
      const State k4 = rhs_(
          t + dp::c4 * h,
          (y + h * (dp::a41 * k1 + dp::a42 * k2 + dp::a43 * k3)).eval());
      const State k5 =
          rhs_(t + dp::c5 * h, (y + h * (dp::a51 * k1 + dp::a52 * k2 +
                                         dp::a53 * k3 + dp::a54 * k4))
                                   .eval());
      const State k6 = rhs_(
          t + h, (y + h * (dp::a61 * k1 + dp::a62 * k2 + dp::a63 * k3 +
                           dp::a64 * k4 + dp::a65 * k5))
                     .eval());
      const State ynew =
          y + h * (dp::a71 * k1 + dp::a73 * k3 + dp::a74 * k4 +
                   dp::a75 * k5 + dp::a76 * k6);
      const State k7 = rhs_(t + h, ynew);

      const State err = h * (dp::e1 * k1 + dp::e3 * k3 + dp::e4 * k4 +
                             dp::e5 * k5 + dp::e6 * k6 + dp::e7 * k7);
      const double errnorm =
          detail::scaled_rms_norm(err, y, ynew, opts_.atol, opts_.rtol);

      if (errnorm <= 1.0) {
        // Accepted; emit dense-output samples inside (t, t+h].
        if (next < sample_times.size() && sample_times[next] <= t + h) {
          const State ydiff = ynew - y;
          const State bspl = h * k1 - ydiff;
          const State cont4 = ydiff - h * k7 - bspl;
          const State cont5 =
              h * (dp::d1 * k1 + dp::d3 * k3 + dp::d4 * k4 + dp::d5 * k5 +
                   dp::d6 * k6 + dp::d7 * k7);
          while (next < sample_times.size() && sample_times[next] <= t + h) {
            const double theta = (sample_times[next] - t) / h;
            const State ys =
                y + theta * (ydiff + (1.0 - theta) *
                                         (bspl + theta * (cont4 +
                                                          (1.0 - theta) *
                                                              cont5)));
            sample(sample_times[next], ys);
            ++next;
          }
        }
        t += h;
        y = ynew;
        k1 = k7;
        if (t >= t_end) return y;

        double fac = 0.9 * std::pow(std::max(errnorm, 1e-32), -0.2);
        fac = std::min(rejected ? 1.0 : 10.0, std::max(0.2, fac));
        h = std::min({h * fac, opts_.max_step, t_end - t});
        rejected = false;
      } else {
        const double fac =
            std::max(0.2, 0.9 * std::pow(errnorm, -0.2));
        h *= fac;
        rejected = true;
      }
    }
    throw OdeError("step limit exceeded at t = " + std::to_string(t));
  }

  State integrate_to(State y, double t0, double t_end) {
    return integrate(std::move(y), t0, t_end, {}, [](double, const State&) {});
  }

 private:
  // Hairer's starting-step heuristic.
  double initial_step_guess(double t0, const State& y0, const State& f0,
                            double t_end) {
    const double d0 =
        detail::hairer_norm(y0, y0, opts_.atol, opts_.rtol);
    const double d1 = detail::hairer_norm(f0, y0, opts_.atol, opts_.rtol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t0);

    const State y1 = y0 + h0 * f0;
    const State f1 = rhs_(t0 + h0, y1);
    const double d2 =
        detail::hairer_norm((f1 - f0).eval(), y0, opts_.atol, opts_.rtol) /
        h0;
    const double dm = std::max(d1, d2);
    const double h1 =
        dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min(100.0 * h0, h1);
  }

  Rhs rhs_;
  OdeOptions opts_;
};

/// Convenience wrapper: integrate and emit dense samples.
template <class State, class Rhs, class Sampler>
State integrate_sampled(Rhs&& rhs, State y0, double t0, double t_end,
                        std::span<const double> times, Sampler&& sample,
                        const OdeOptions& opts = {}) {
  Dopri5Integrator<State, std::decay_t<Rhs>> solver(std::forward<Rhs>(rhs),
                                                    opts);
  return solver.integrate(std::move(y0), t0, t_end, times,
                          std::forward<Sampler>(sample));
}

/// Convenience wrapper: advance the state to t_end.
template <class State, class Rhs>
State integrate_to(Rhs&& rhs, State y0, double t0, double t_end,
                   const OdeOptions& opts = {}) {
  Dopri5Integrator<State, std::decay_t<Rhs>> solver(std::forward<Rhs>(rhs),
                                                    opts);
  return solver.integrate_to(std::move(y0), t0, t_end);
}

}  // namespace srchi
