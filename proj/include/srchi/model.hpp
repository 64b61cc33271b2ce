// Model parameters and resonance algebra for N identical two-level emitters
// with collective radiative decay, per-atom dephasing and per-atom
// nonradiative dissipation. All rates and detunings are expressed in units
// of the single-atom radiative rate gamma_r.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace srchi {

using cplx = std::complex<double>;

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters outside the validity domain of an operation.
struct InvalidParameterError : ModelError {
  using ModelError::ModelError;
};

// Evaluation exactly on a resonance pole (detuning = 0 and width = 0).
struct PoleError : ModelError {
  using ModelError::ModelError;
};

// The stationary third-order response has no unique value at
// gamma_d = gamma_n = 0; callers must pick a limit direction or use the
// transient evolution, whose plateau is well defined.
struct IndefiniteLimitError : ModelError {
  using ModelError::ModelError;
};

struct SingularMatrixError : ModelError {
  using ModelError::ModelError;
};

/// Single-atom damping constants (gamma_r, gamma_d, gamma_n).
struct DampingRates {
  double gamma_r = 1.0;  // radiative decay; collective, sets the unit scale
  double gamma_d = 0.0;  // pure dephasing, local to each atom
  double gamma_n = 0.0;  // nonradiative dissipation, local to each atom

  void require_valid() const {
    if (!(std::isfinite(gamma_r) && std::isfinite(gamma_d) &&
          std::isfinite(gamma_n)))
      throw InvalidParameterError("damping rates must be finite");
    if (gamma_r <= 0.0)
      throw InvalidParameterError("gamma_r must be positive");
    if (gamma_d < 0.0 || gamma_n < 0.0)
      throw InvalidParameterError("damping rates must be nonnegative");
  }
};

/// Atom count, detuning of the drive from the atomic transition, and the
/// complex drive envelope. Every formula depends on the drive and atomic
/// frequencies only through the detuning.
struct SystemDrive {
  int n_atoms = 2;
  double detuning = 0.0;      // drive frequency minus transition frequency
  cplx field_amplitude = 1.0; // complex envelope E

  void require_valid() const {
    if (n_atoms < 1) throw InvalidParameterError("n_atoms must be >= 1");
    if (!std::isfinite(detuning))
      throw InvalidParameterError("detuning must be finite");
    if (!(std::isfinite(field_amplitude.real()) &&
          std::isfinite(field_amplitude.imag())))
      throw InvalidParameterError("field amplitude must be finite");
  }

  // The collective closed forms are derived for at least two atoms.
  void require_collective() const {
    require_valid();
    if (n_atoms < 2)
      throw InvalidParameterError(
          "closed-form stationary results require n_atoms >= 2; "
          "use the full master-equation solver for a single atom");
  }
};

/// Coefficient triple (a, b, c) multiplying (gamma_r, gamma_d, gamma_n) in a
/// combined damping constant. Values such as N, 2N-2, 3N-6 arise; negative
/// entries signal a system size outside the derivation domain.
struct GammaTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Combined damping constant (a*gamma_r + b*gamma_d + c*gamma_n) / 2.
inline double gamma_combine(const GammaTriple& t, const DampingRates& g) {
  if (!(std::isfinite(t.a) && std::isfinite(t.b) && std::isfinite(t.c)))
    throw InvalidParameterError("gamma coefficients must be finite");
  if (t.a < 0.0 || t.b < 0.0 || t.c < 0.0)
    throw InvalidParameterError(
        "negative gamma coefficient (unsupported system size)");
  return 0.5 * (t.a * g.gamma_r + t.b * g.gamma_d + t.c * g.gamma_n);
}

/// Complex resonance function 1 / (detuning + i * Gamma_{a,b,c}).
inline cplx resonance_fn(const GammaTriple& t, const DampingRates& g,
                         double detuning) {
  const double width = gamma_combine(t, g);
  if (detuning == 0.0 && width == 0.0)
    throw PoleError("resonance function evaluated on its pole");
  return 1.0 / cplx(detuning, width);
}

/// Reciprocal of the resonance function, detuning + i * Gamma_{a,b,c}.
/// Well defined everywhere, including the pole of the function itself.
inline cplx resonance_inverse(const GammaTriple& t, const DampingRates& g,
                              double detuning) {
  return cplx(detuning, gamma_combine(t, g));
}

}  // namespace srchi
