// Transient response: integrates the seven-variable envelope hierarchy from
// drive switch-on at t = 0 and reports chi1(t) and chi3(t). The switch-on
// is an instantaneous step; the initial state is the ground state.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "srchi/hierarchy.hpp"
#include "srchi/model.hpp"
#include "srchi/ode.hpp"

namespace srchi {

/// The two relaxation timescales of chi3: the fast radiative settling and
/// the slow enhancement stage.
struct RelaxationTimes {
  double tau1 = 0.0;  // 1 / (N gamma_r)
  double tau2 = std::numeric_limits<double>::infinity();  // 1/(2 gd/N + 2 gn)

  bool tau2_finite() const { return std::isfinite(tau2); }
};

inline RelaxationTimes relaxation_times(const SystemDrive& drive,
                                        const DampingRates& rates) {
  drive.require_valid();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  RelaxationTimes t;
  t.tau1 = 1.0 / (n * rates.gamma_r);
  const double slow_rate = 2.0 * rates.gamma_d / n + 2.0 * rates.gamma_n;
  if (slow_rate > 0.0) t.tau2 = 1.0 / slow_rate;
  return t;
}

/// Sample-time specification. The default grid is logarithmic, matching the
/// decades spanned by the two relaxation stages; a linear grid is available
/// by flag. Both start at t = 0.
struct TimeGrid {
  double t_end = 1e3;
  int count = 400;
  bool logarithmic = true;
  double t_start = 1e-2;  // first nonzero sample of the log grid

  std::vector<double> make_times() const {
    if (!(t_end > 0.0)) throw InvalidParameterError("t_end must be positive");
    if (count < 2) throw InvalidParameterError("time grid needs >= 2 points");
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(count));
    ts.push_back(0.0);
    if (logarithmic) {
      if (!(t_start > 0.0 && t_start < t_end))
        throw InvalidParameterError("log grid needs 0 < t_start < t_end");
      const int m = count - 1;
      const double ratio = t_end / t_start;
      for (int i = 0; i + 1 < m; ++i)
        ts.push_back(t_start *
                     std::pow(ratio, static_cast<double>(i) /
                                         static_cast<double>(m - 1)));
      ts.push_back(t_end);
    } else {
      for (int i = 1; i < count; ++i)
        ts.push_back(t_end * static_cast<double>(i) /
                     static_cast<double>(count - 1));
    }
    ts.back() = t_end;
    return ts;
  }
};

/// Sampled transient response. chi1_t and chi3_t are the envelope ratios
/// <s1>(t)/E and <s3>(t)/(|E|^2 E); both start at zero.
struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> chi1_t;
  std::vector<cplx> chi3_t;
};

/// Full envelope states along the same grid, for diagnostics and for
/// comparison against the master-equation solver.
struct StateTrajectory {
  std::vector<double> times;
  std::vector<PerturbativeState> states;
};

inline StateTrajectory integrate_states(const SystemDrive& drive,
                                        const DampingRates& rates,
                                        const std::vector<double>& times,
                                        const OdeOptions& opts = {}) {
  drive.require_collective();
  rates.require_valid();
  if (times.empty()) throw InvalidParameterError("empty sample grid");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw InvalidParameterError("sample times must be strictly increasing");
  if (times.front() < 0.0)
    throw InvalidParameterError("sample times must start at t >= 0");

  const HierarchyCoefficients coeffs =
      HierarchyCoefficients::make(drive, rates);
  auto rhs = [&coeffs](double, const Vector7cd& v) -> Vector7cd {
    return hierarchy_rhs_scaled(PerturbativeState::from_vector(v), coeffs)
        .dot.to_vector();
  };

  StateTrajectory out;
  out.times = times;
  out.states.reserve(times.size());
  integrate_sampled(
      rhs, Vector7cd(Vector7cd::Zero()), 0.0, times.back(),
      std::span<const double>(times),
      [&out](double, const Vector7cd& v) {
        out.states.push_back(PerturbativeState::from_vector(v));
      },
      opts);
  return out;
}

/// Integrate from switch-on and report the transient susceptibilities on
/// the requested grid.
inline Trajectory integrate(const SystemDrive& drive,
                            const DampingRates& rates, const TimeGrid& grid,
                            const OdeOptions& opts = {}) {
  if (drive.field_amplitude == cplx(0.0, 0.0))
    throw InvalidParameterError(
        "transient susceptibilities need a nonzero drive amplitude");
  const std::vector<double> times = grid.make_times();
  const StateTrajectory st = integrate_states(drive, rates, times, opts);

  Trajectory out;
  out.times = st.times;
  out.chi1_t.reserve(st.states.size());
  out.chi3_t.reserve(st.states.size());
  const cplx E = drive.field_amplitude;
  const cplx cubic = std::norm(E) * E;
  for (const PerturbativeState& s : st.states) {
    out.chi1_t.push_back(s.s1 / E);
    out.chi3_t.push_back(s.s3 / cubic);
  }
  return out;
}

}  // namespace srchi
