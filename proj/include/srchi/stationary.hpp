// Closed-form stationary solutions of the perturbative hierarchy and the
// per-atom susceptibilities chi1 and chi3, together with the gamma_d -> 0
// limit, the ratio-of-rates approximation and the size-enhancement factor.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "srchi/hierarchy.hpp"
#include "srchi/model.hpp"

namespace srchi {

/// The seven stationary envelopes. The population pair is real-valued.
struct StationaryExpectations {
  cplx s1{};
  cplx ss{};
  double sds = 0.0;
  double sdsp = 0.0;
  cplx sdss{};
  cplx sdssp{};
  cplx s3{};
};

struct SecondOrderMoments {
  cplx ss{};
  double sds = 0.0;
  double sdsp = 0.0;
};

struct ThirdOrderMoments {
  cplx sdss{};
  cplx sdssp{};
};

/// chi values and the enhancement prefactor at one detuning.
struct SpectralPoint {
  double detuning = 0.0;
  cplx chi1{};
  cplx chi3{};
  cplx chi3_gd0{};
  cplx chi3_approx{};
  double enhancement = 1.0;
};

/// Stationary first-order coherence, f_{N,1,1} * E.
inline cplx first_order(const SystemDrive& drive, const DampingRates& rates) {
  drive.require_collective();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  return resonance_fn({n, 1, 1}, rates, drive.detuning) *
         drive.field_amplitude;
}

/// Stationary two-photon coherence and population pair. The ratio of the
/// damping constants, not their size, sets the population split between the
/// same-atom and distinct-atom channels.
inline SecondOrderMoments second_order(const SystemDrive& drive,
                                       const DampingRates& rates) {
  drive.require_collective();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  const double gr = rates.gamma_r, gd = rates.gamma_d, gn = rates.gamma_n;

  const double denom = gr * (gd + n * gn) + gn * (gd + gn);
  if (denom == 0.0)
    throw IndefiniteLimitError(
        "stationary populations are indefinite at gamma_d = gamma_n = 0");

  const cplx f1 = resonance_fn({n, 1, 1}, rates, drive.detuning);
  const cplx fm = resonance_fn({n - 1, 1, 1}, rates, drive.detuning);
  const cplx E = drive.field_amplitude;
  const double e2 = std::norm(E);
  const double prefactor = (n * gr + gd + gn) / denom;
  const double weight = prefactor * std::norm(f1) * e2;

  SecondOrderMoments m;
  m.ss = f1 * fm * E * E;
  m.sds = weight * (gd + gn);
  m.sdsp = weight * gn;
  return m;
}

/// Stationary third-order pair from the printed 2x2 linear system, solved
/// in closed form. Condition numbers are O(1) for physical rates.
inline ThirdOrderMoments third_order_pair(const SystemDrive& drive,
                                          const DampingRates& rates,
                                          const SecondOrderMoments& second) {
  drive.require_collective();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  const double delta = drive.detuning;
  const cplx E = drive.field_amplitude;
  constexpr cplx I(0.0, 1.0);

  const cplx a11 = resonance_inverse({n + 2, 1, 3}, rates, delta);
  const cplx a12 = I * gamma_combine({2 * n - 4, 0, 0}, rates);
  const cplx a21 = I * gamma_combine({4, 0, 0}, rates);
  const cplx a22 = resonance_inverse({3 * n - 6, 3, 3}, rates, delta);

  const cplx b1 =
      -std::conj(E) * second.ss + E * (second.sds + second.sdsp);
  const cplx b2 = -std::conj(E) * second.ss + 2.0 * E * second.sdsp;

  const cplx det = a11 * a22 - a12 * a21;
  if (std::abs(det) == 0.0)
    throw SingularMatrixError("third-order 2x2 system is singular");

  ThirdOrderMoments t;
  t.sdss = (b1 * a22 - a12 * b2) / det;
  t.sdssp = (a11 * b2 - a21 * b1) / det;
  return t;
}

/// All seven stationary envelopes at the drive amplitude.
inline StationaryExpectations stationary_state(const SystemDrive& drive,
                                               const DampingRates& rates) {
  const SecondOrderMoments m2 = second_order(drive, rates);
  const ThirdOrderMoments m3 = third_order_pair(drive, rates, m2);
  const double n = static_cast<double>(drive.n_atoms);
  const cplx f1 = resonance_fn({n, 1, 1}, rates, drive.detuning);
  constexpr cplx I(0.0, 1.0);

  StationaryExpectations st;
  st.s1 = first_order(drive, rates);
  st.ss = m2.ss;
  st.sds = m2.sds;
  st.sdsp = m2.sdsp;
  st.sdss = m3.sdss;
  st.sdssp = m3.sdssp;
  st.s3 = f1 * (-2.0 * drive.field_amplitude * m2.sds +
                I * gamma_combine({2 * n - 2, 0, 0}, rates) * m3.sdss);
  return st;
}

/// Linear susceptibility per atom, f_{N,1,1}. Independent of the amplitude
/// and symmetric under exchanging gamma_d and gamma_n.
inline cplx chi1(const SystemDrive& drive, const DampingRates& rates) {
  drive.require_collective();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  return resonance_fn({n, 1, 1}, rates, drive.detuning);
}

namespace detail {

// Susceptibilities are ratios; evaluate them at unit amplitude when the
// drive carries none.
inline SystemDrive nonzero_amplitude(SystemDrive drive) {
  if (drive.field_amplitude == cplx(0.0, 0.0)) drive.field_amplitude = 1.0;
  return drive;
}

}  // namespace detail

/// Third-order susceptibility per atom, <s3> / (|E|^2 E). The amplitude
/// dependence of the ingredients cancels by construction.
inline cplx chi3(const SystemDrive& drive, const DampingRates& rates) {
  const SystemDrive d = detail::nonzero_amplitude(drive);
  const StationaryExpectations st = stationary_state(d, rates);
  const cplx E = d.field_amplitude;
  return st.s3 / (std::norm(E) * E);
}

/// Closed form of chi3 in the limit gamma_d -> 0. Depends on the system
/// size only through the enhancement of the radiative rate; off resonance
/// it approaches -2 / detuning^3 independently of N.
inline cplx chi3_limit_gd0(const SystemDrive& drive,
                           const DampingRates& rates) {
  drive.require_collective();
  rates.require_valid();
  const double n = static_cast<double>(drive.n_atoms);
  const double delta = drive.detuning;
  if (rates.gamma_n == 0.0 && delta == 0.0)
    throw PoleError(
        "chi3 limit is evaluated on the gamma_n = 0 resonance pole");
  const cplx f1 = resonance_fn({n, 0, 1}, rates, delta);
  const cplx fm = resonance_fn({n - 1, 0, 1}, rates, delta);
  const cplx f0_inv = resonance_inverse({0, 0, 1}, rates, delta);
  return -2.0 * std::norm(f1) * f1 * fm * f0_inv;
}

/// Size-enhancement prefactor N (gamma_d + gamma_n) / (gamma_d + N gamma_n),
/// between 1 (dissipation-dominated) and N (dephasing-dominated).
inline double enhancement_factor(int n_atoms, const DampingRates& rates) {
  rates.require_valid();
  if (n_atoms < 1) throw InvalidParameterError("n_atoms must be >= 1");
  const double n = static_cast<double>(n_atoms);
  const double denom = rates.gamma_d + n * rates.gamma_n;
  if (denom == 0.0)
    throw IndefiniteLimitError(
        "enhancement factor is indefinite at gamma_d = gamma_n = 0");
  return n * (rates.gamma_d + rates.gamma_n) / denom;
}

/// Approximate chi3: enhancement factor times the gamma_d -> 0 closed form.
inline cplx chi3_approx(const SystemDrive& drive, const DampingRates& rates) {
  return enhancement_factor(drive.n_atoms, rates) *
         chi3_limit_gd0(drive, rates);
}

/// Evaluates the rotating-frame right-hand side of all seven equations of
/// motion at the supplied values and returns the largest per-equation
/// residual relative to the magnitude of the terms entering that equation.
/// Stationary inputs give residuals at roundoff level (< 1e-10).
inline double verify_stationarity(const SystemDrive& drive,
                                  const DampingRates& rates,
                                  const StationaryExpectations& st) {
  PerturbativeState y;
  y.s1 = st.s1;
  y.ss = st.ss;
  y.sds = st.sds;
  y.sdsp = st.sdsp;
  y.s3 = st.s3;
  y.sdss = st.sdss;
  y.sdssp = st.sdssp;

  const HierarchyDerivative d =
      hierarchy_rhs_scaled(y, HierarchyCoefficients::make(drive, rates));
  const cplx dots[7] = {d.dot.s1,  d.dot.ss,   d.dot.sds, d.dot.sdsp,
                        d.dot.s3,  d.dot.sdss, d.dot.sdssp};
  double worst = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double r = std::abs(dots[i]);
    if (d.scale[i] > 0.0)
      worst = std::max(worst, r / d.scale[i]);
    else if (r > 0.0)
      worst = std::numeric_limits<double>::infinity();
  }
  return worst;
}

/// chi1, chi3, its gamma_d -> 0 limit, the approximation and the
/// enhancement factor at one detuning. Amplitude independent.
inline SpectralPoint spectral_point(const SystemDrive& drive,
                                    const DampingRates& rates) {
  SpectralPoint p;
  p.detuning = drive.detuning;
  p.chi1 = chi1(drive, rates);
  p.chi3 = chi3(drive, rates);
  p.chi3_gd0 = chi3_limit_gd0(drive, rates);
  p.chi3_approx = enhancement_factor(drive.n_atoms, rates) * p.chi3_gd0;
  p.enhancement = enhancement_factor(drive.n_atoms, rates);
  return p;
}

}  // namespace srchi
