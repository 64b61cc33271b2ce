// Rotating-frame perturbative hierarchy: the seven coupled envelope
// equations of motion for the first-order coherence, the two-photon
// coherence, the population pair and the three third-order moments.
//
// Envelope convention: s1, s3, sdss, sdssp carry the first drive harmonic,
// ss carries the second harmonic, sds and sdsp are carrier-free. With the
// carriers factored out the system is autonomous and the detuning enters
// the first-harmonic equations as +i*detuning.
#pragma once

#include <Eigen/Dense>
#include <array>

#include "srchi/model.hpp"

namespace srchi {

using Vector7cd = Eigen::Matrix<cplx, 7, 1>;

/// Slowly varying envelopes of the hierarchy, ordered as in the equations
/// of motion. sds and sdsp are real-valued in exact arithmetic; they are
/// stored as complex so the integrator can verify that their imaginary
/// parts stay at roundoff level.
struct PerturbativeState {
  cplx s1{};     // first-order <s>
  cplx ss{};     // <ss>, two distinct atoms
  cplx sds{};    // <s+ s>, same atom (population)
  cplx sdsp{};   // <s+ s'>, distinct atoms
  cplx s3{};     // third-order <s>
  cplx sdss{};   // <s+ s s>, index pattern (i=j or i=k, j != k)
  cplx sdssp{};  // <s+ s s'>, all indices distinct

  Vector7cd to_vector() const {
    Vector7cd v;
    v << s1, ss, sds, sdsp, s3, sdss, sdssp;
    return v;
  }
  static PerturbativeState from_vector(const Vector7cd& v) {
    return {v(0), v(1), v(2), v(3), v(4), v(5), v(6)};
  }
};

/// Constant coefficients of the envelope equations for a fixed drive and
/// rate set. Precomputed once per integration.
struct HierarchyCoefficients {
  cplx s1_drift;        // i*detuning - Gamma_{N,1,1}
  cplx ss_drift;        // 2i*detuning - Gamma_{2N-2,2,2}
  double sds_decay;     // Gamma_{2,0,2}
  double sds_cross;     // Gamma_{2N-2,0,0}, multiplies sdsp
  double sdsp_cross;    // Gamma_{2,0,0}, multiplies sds
  double sdsp_decay;    // Gamma_{2N-2,2,2}
  double s3_feed;       // Gamma_{2N-2,0,0}, multiplies sdss
  cplx sdss_drift;      // i*detuning - Gamma_{N+2,1,3}
  double sdss_cross;    // Gamma_{2N-4,0,0}, multiplies sdssp
  cplx sdssp_drift;     // i*detuning - Gamma_{3N-6,3,3}
  double sdssp_cross;   // Gamma_{4,0,0}, multiplies sdss
  cplx field;           // drive envelope E

  static HierarchyCoefficients make(const SystemDrive& drive,
                                    const DampingRates& rates) {
    drive.require_collective();
    rates.require_valid();
    const double n = static_cast<double>(drive.n_atoms);
    const double delta = drive.detuning;
    HierarchyCoefficients c;
    c.s1_drift = cplx(0.0, delta) - gamma_combine({n, 1, 1}, rates);
    c.ss_drift = cplx(0.0, 2.0 * delta) -
                 gamma_combine({2 * n - 2, 2, 2}, rates);
    c.sds_decay = gamma_combine({2, 0, 2}, rates);
    c.sds_cross = gamma_combine({2 * n - 2, 0, 0}, rates);
    c.sdsp_cross = gamma_combine({2, 0, 0}, rates);
    c.sdsp_decay = gamma_combine({2 * n - 2, 2, 2}, rates);
    c.s3_feed = c.sds_cross;
    c.sdss_drift = cplx(0.0, delta) - gamma_combine({n + 2, 1, 3}, rates);
    c.sdss_cross = gamma_combine({2 * n - 4, 0, 0}, rates);
    c.sdssp_drift = cplx(0.0, delta) - gamma_combine({3 * n - 6, 3, 3}, rates);
    c.sdssp_cross = gamma_combine({4, 0, 0}, rates);
    c.field = drive.field_amplitude;
    return c;
  }
};

/// Right-hand side of the seven envelope equations together with the
/// magnitude of the largest additive term per equation. The scales give a
/// cancellation-aware reference for stationarity residuals.
struct HierarchyDerivative {
  PerturbativeState dot;
  std::array<double, 7> scale;
};

inline HierarchyDerivative hierarchy_rhs_scaled(
    const PerturbativeState& y, const HierarchyCoefficients& c) {
  constexpr cplx I(0.0, 1.0);
  const cplx E = c.field;
  const cplx Ec = std::conj(E);

  HierarchyDerivative d;
  auto mx = [](std::initializer_list<double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, x);
    return m;
  };

  // d<s1>/dt
  {
    const cplx a = c.s1_drift * y.s1;
    const cplx b = -I * E;
    d.dot.s1 = a + b;
    d.scale[0] = mx({std::abs(a), std::abs(b)});
  }
  // d<ss>/dt
  {
    const cplx a = c.ss_drift * y.ss;
    const cplx b = -2.0 * I * E * y.s1;
    d.dot.ss = a + b;
    d.scale[1] = mx({std::abs(a), std::abs(b)});
  }
  // Shared pump of the population pair, 2 Re(i E* <s1>) kept complex so a
  // stray imaginary part in sds/sdsp decays instead of being discarded.
  const cplx pump_half = I * Ec * y.s1;
  const cplx pump = pump_half + std::conj(pump_half);
  // d<s+s>/dt
  {
    const cplx a = -c.sds_decay * y.sds;
    const cplx b = -c.sds_cross * y.sdsp;
    d.dot.sds = pump + a + b;
    d.scale[2] = mx({std::abs(pump), std::abs(a), std::abs(b)});
  }
  // d<s+s'>/dt
  {
    const cplx a = -c.sdsp_cross * y.sds;
    const cplx b = -c.sdsp_decay * y.sdsp;
    d.dot.sdsp = pump + a + b;
    d.scale[3] = mx({std::abs(pump), std::abs(a), std::abs(b)});
  }
  // d<s3>/dt
  {
    const cplx a = c.s1_drift * y.s3;
    const cplx b = 2.0 * I * E * y.sds;
    const cplx e = c.s3_feed * y.sdss;
    d.dot.s3 = a + b + e;
    d.scale[4] = mx({std::abs(a), std::abs(b), std::abs(e)});
  }
  // d<s+ss>/dt
  {
    const cplx a = c.sdss_drift * y.sdss;
    const cplx b = -c.sdss_cross * y.sdssp;
    const cplx e = I * Ec * y.ss;
    const cplx f = -I * E * (y.sds + y.sdsp);
    d.dot.sdss = a + b + e + f;
    d.scale[5] = mx({std::abs(a), std::abs(b), std::abs(e), std::abs(f)});
  }
  // d<s+ss'>/dt
  {
    const cplx a = c.sdssp_drift * y.sdssp;
    const cplx b = -c.sdssp_cross * y.sdss;
    const cplx e = I * Ec * y.ss;
    const cplx f = -2.0 * I * E * y.sdsp;
    d.dot.sdssp = a + b + e + f;
    d.scale[6] = mx({std::abs(a), std::abs(b), std::abs(e), std::abs(f)});
  }
  return d;
}

/// Time derivative of the envelope state at fixed drive and rates.
inline PerturbativeState rotating_frame_rhs(const PerturbativeState& y,
                                            const SystemDrive& drive,
                                            const DampingRates& rates) {
  return hierarchy_rhs_scaled(y, HierarchyCoefficients::make(drive, rates))
      .dot;
}

}  // namespace srchi
