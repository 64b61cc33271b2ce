// Acceptance suite. Each numbered criterion prints one PASS/FAIL line with
// the measured quantities; the process exits with the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <srchi/lindblad.hpp>
#include <srchi/stationary.hpp>
#include <srchi/transient.hpp>

using namespace srchi;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double rel_err(cplx a, cplx b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

const std::vector<std::pair<double, double>> fig1_settings = {
    {0.0, 0.1}, {0.05, 0.05}, {0.1, 0.0}};

// Amplitude set for verification-grade extraction; keeps the fifth-order
// leakage of the two-term odd fit below the chi3 tolerance even at the
// narrowest resonance in the grid.
const std::vector<double> strict_amps = {2.5e-3, 1.25e-3, 6.25e-4};

void criterion1_plugback() {
  Timer timer;
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> atoms(2, 8);
  std::uniform_real_distribution<double> local(0.0, 0.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  const int samples = 200;
  for (int k = 0; k < samples; ++k) {
    const int n = atoms(rng);
    DampingRates g{1.0, local(rng), local(rng)};
    if (g.gamma_d + g.gamma_n == 0.0) g.gamma_n = 0.05;
    const double delta = (2.0 * unit(rng) - 1.0) * 10.0 * n;
    const SystemDrive d{n, delta,
                        std::polar(0.5 + 1.5 * unit(rng),
                                   6.283185307179586 * unit(rng))};
    worst = std::max(worst, verify_stationarity(d, g, stationary_state(d, g)));
  }
  const double secs = timer.seconds();
  report(1, "plug-back stationarity", worst < 1e-10 && secs < 1.0,
         fmt("max residual %.3e < 1e-10 over %d random sets, %.3f s < 1 s",
             worst, samples, secs));
}

void criterion2_oracle_equivalence() {
  Timer timer;
  double worst1 = 0.0, worst3 = 0.0;
  std::string worst_at = "-";
  bool ok = true;
  for (int n : {2, 3}) {
    for (const auto& [gd, gn] : fig1_settings) {
      const DampingRates g{1.0, gd, gn};
      for (double delta : {0.0, 1.0, -1.0, 5.0, -5.0, 20.0, -20.0}) {
        const SystemDrive d{n, delta, 1.0};
        const ExtractionReport r =
            extract_susceptibilities(d, g, strict_amps);
        const double e1 = rel_err(r.chi1, chi1(d, g));
        const double e3 = rel_err(r.chi3, chi3(d, g));
        worst1 = std::max(worst1, e1);
        if (e3 > worst3) {
          worst3 = e3;
          worst_at = fmt("N=%d gd=%.2f gn=%.2f delta=%g", n, gd, gn, delta);
        }
        ok = ok && e1 < 1e-6 && e3 < 1e-3;
      }
    }
  }
  const double secs = timer.seconds();
  report(2, "oracle equivalence", ok && secs < 60.0,
         fmt("max chi1 err %.3e < 1e-6, max chi3 err %.3e < 1e-3 (at %s), "
             "%.1f s < 60 s",
             worst1, worst3, worst_at.c_str(), secs));
}

void criterion3_gd0_degeneracy() {
  std::mt19937 rng(7331);
  std::uniform_int_distribution<int> atoms(2, 8);
  std::uniform_real_distribution<double> gn_dist(0.005, 0.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = atoms(rng);
    const DampingRates g{1.0, 0.0, gn_dist(rng)};
    const double delta = (2.0 * unit(rng) - 1.0) * 10.0 * n;
    const SystemDrive d{n, delta, std::polar(1.0, unit(rng))};
    const StationaryExpectations st = stationary_state(d, g);
    worst = std::max(worst, std::abs(st.sds - st.sdsp) /
                                std::max(st.sds, 1e-300));
    worst = std::max(worst, rel_err(st.sdss, st.sdssp));
    worst = std::max(worst, rel_err(chi3(d, g), chi3_limit_gd0(d, g)));
  }
  report(3, "gamma_d = 0 degeneracy", worst < 1e-12,
         fmt("max split %.3e < 1e-12 over 50 samples "
             "(sds=sdsp, sdss=sdssp, chi3=chi3_gd0)",
             worst));
}

void criterion4_size_enhancement() {
  bool ok = true;
  std::string detail;
  for (double delta : {20.0, -20.0}) {
    const SystemDrive d{5, delta, 1.0};
    const double base = std::abs(chi3(d, {1.0, 0.0, 0.1}));
    const double deph = std::abs(chi3(d, {1.0, 0.1, 0.0}));
    const double mixed = std::abs(chi3(d, {1.0, 0.05, 0.05}));
    const double r1 = deph / base;
    const double r2 = mixed / base;
    ok = ok && std::abs(r1 / 5.0 - 1.0) < 0.1 &&
         std::abs(r2 / (5.0 / 3.0) - 1.0) < 0.1;
    if (delta > 0)
      detail = fmt("delta=+20: ratios %.3f (want 5 +-10%%), %.3f (want 5/3 "
                   "+-10%%)",
                   r1, r2);
  }
  report(4, "size-enhancement ratio", ok, detail + ", both signs checked");
}

void criterion5_off_resonant_asymptote() {
  const DampingRates g{1.0, 0.0, 0.1};
  bool ok = true;
  double worst_dev = 0.0, worst_spread = 0.0;
  std::vector<cplx> normalized;
  for (int n : {2, 5, 20}) {
    const double width = gamma_combine({double(n), 0, 1}, g);
    for (double sign : {1.0, -1.0}) {
      const double delta = sign * 100.0 * width;
      const cplx v = chi3_limit_gd0({n, delta, 1.0}, g) * delta * delta *
                     delta / (-2.0);
      const double dev = std::abs(v - 1.0);
      worst_dev = std::max(worst_dev, dev);
      ok = ok && dev < 0.05;
      if (sign > 0) normalized.push_back(v);
    }
  }
  for (std::size_t i = 0; i < normalized.size(); ++i)
    for (std::size_t j = 0; j < normalized.size(); ++j)
      if (i != j)
        worst_spread = std::max(
            worst_spread, std::abs(normalized[i] - normalized[j]) /
                              std::abs(normalized[j]));
  ok = ok && worst_spread < 0.05;
  report(5, "off-resonant asymptote", ok,
         fmt("max |chi3_gd0 delta^3 / (-2) - 1| = %.4f < 0.05 at "
             "|delta| = 100 Gamma_{N,0,1}; N-spread %.4f < 0.05",
             worst_dev, worst_spread));
}

void criterion6_fig2_reproduction() {
  Timer timer;
  const int n = 5;
  const double delta = 5.0;
  bool ok_a = true, ok_b = true, ok_c = true;
  std::string detail_a, detail_b, detail_c;

  // (a) gamma_d = 0: flat at the unenhanced value once the radiative
  // settling (rate Gamma_{N,1,1} = N/2) has run its course; the drift
  // window starts at 40 tau1 where the stated 1e-6 is attainable.
  {
    const DampingRates g{1.0, 0.0, 0.0};
    const double tau1 = relaxation_times({n, delta, 1.0}, g).tau1;
    TimeGrid grid;
    grid.t_end = 150.0 * tau1;
    grid.count = 300;
    const Trajectory tr = integrate({n, delta, 1.0}, g, grid);
    const cplx final_value = tr.chi3_t.back();
    double drift = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      if (tr.times[i] >= 40.0 * tau1)
        drift = std::max(drift, std::abs(tr.chi3_t[i] - final_value) /
                                    std::abs(final_value));
    const double off =
        rel_err(final_value, chi3_limit_gd0({n, delta, 1.0}, g));
    ok_a = drift < 1e-6 && off < 1e-6;
    detail_a = fmt("(a) drift %.2e < 1e-6 past 40 tau1, final vs gd0 limit "
                   "%.2e < 1e-6",
                   drift, off);
  }

  // (b)+(c) two-stage rise for gamma_d in {0.01, 0.05}
  for (const double gd : {0.01, 0.05}) {
    const DampingRates g{1.0, gd, 0.0};
    const SystemDrive d{n, delta, 1.0};
    const RelaxationTimes taus = relaxation_times(d, g);
    TimeGrid grid;
    grid.t_end = 40.0 * taus.tau2;
    grid.count = 800;
    const Trajectory tr = integrate(d, g, grid);

    // plateau once the coherent ring has decayed (10 tau1), then the
    // half-rise time of |chi3_t|
    double plateau = 0.0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      if (tr.times[i] >= 10.0 * taus.tau1) {
        plateau = std::abs(tr.chi3_t[i]);
        start = i;
        break;
      }
    const double final_mag = std::abs(tr.chi3_t.back());
    const double mid = 0.5 * (plateau + final_mag);
    double t_half = 0.0;
    for (std::size_t i = start + 1; i < tr.times.size(); ++i) {
      const double a = std::abs(tr.chi3_t[i - 1]);
      const double b = std::abs(tr.chi3_t[i]);
      if (b >= mid && a < mid) {
        const double w = (mid - a) / (b - a);
        t_half = tr.times[i - 1] + w * (tr.times[i] - tr.times[i - 1]);
        break;
      }
    }
    const double nominal = n / (2.0 * gd);
    const bool in_window = t_half > 0.5 * nominal && t_half < 2.0 * nominal;
    ok_b = ok_b && in_window;
    detail_b += fmt(" gd=%.2f: t_half %.0f vs N/(2 gd)=%.0f (factor %.2f);",
                    gd, t_half, nominal, t_half / nominal);

    const double off = rel_err(tr.chi3_t.back(), chi3(d, g));
    ok_c = ok_c && off < 1e-6;
    detail_c += fmt(" gd=%.2f: final vs stationary %.2e;", gd, off);
  }

  const double secs = timer.seconds();
  const bool ok = ok_a && ok_b && ok_c && secs < 10.0;
  report(6, "transient two-stage relaxation", ok,
         detail_a + ";" + detail_b + detail_c +
             fmt(" runtime %.1f s < 10 s", secs));
}

void criterion7_density_matrix_sanity() {
  struct Run {
    SystemDrive drive;
    DampingRates rates;
    Eigen::MatrixXcd start;
    double t_end;
  };
  std::vector<Run> runs;
  runs.push_back({{2, 0.5, 1.0}, {1.0, 0.0, 0.1},
                  ground_state_projector(2), 30.0});
  runs.push_back({{3, 1.0, 0.8}, {1.0, 0.05, 0.05},
                  ground_state_projector(3), 30.0});
  {
    // superradiant burst from the fully excited pair
    Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(4, 4);
    excited(3, 3) = 1.0;
    runs.push_back({{2, 0.0, 0.0}, {1.0, 0.0, 0.0}, excited, 6.0});
  }
  runs.push_back({{4, 2.0, 0.5}, {1.0, 0.1, 0.05},
                  ground_state_projector(4), 20.0});

  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  for (const Run& run : runs) {
    const LindbladGenerator gen(run.drive, run.rates);
    std::vector<double> times;
    for (int i = 0; i <= 40; ++i) times.push_back(run.t_end * i / 40.0);
    propagate(gen, run.start, times, [&](double, const Eigen::MatrixXcd& r) {
      const DensityDiagnostics diag = density_diagnostics(r);
      worst_trace = std::max(worst_trace, diag.trace_error);
      worst_herm = std::max(worst_herm, diag.hermiticity_error);
      worst_eig = std::min(worst_eig, diag.min_eigenvalue);
    });
  }
  const bool ok =
      worst_trace < 1e-10 && worst_herm < 1e-10 && worst_eig >= -1e-8;
  report(7, "density-matrix sanity", ok,
         fmt("trace dev %.2e < 1e-10, hermiticity %.2e < 1e-10, min "
             "eigenvalue %.2e >= -1e-8 over %zu propagations",
             worst_trace, worst_herm, worst_eig, runs.size()));
}

void criterion8_swap_symmetry() {
  const SystemDrive d{5, 20.0, 1.0};
  const cplx a = chi1(d, {1.0, 0.1, 0.0});
  const cplx b = chi1(d, {1.0, 0.0, 0.1});
  const bool identical = a == b;  // bit-for-bit
  const double ratio =
      std::abs(chi3(d, {1.0, 0.1, 0.0})) / std::abs(chi3(d, {1.0, 0.0, 0.1}));
  const bool ok = identical && ratio > 2.0;
  report(8, "chi1 symmetry vs chi3 asymmetry", ok,
         fmt("chi1 bit-identical under gamma_d <-> gamma_n: %s; |chi3| "
             "ratio %.2f > 2",
             identical ? "yes" : "no", ratio));
}

}  // namespace

int main() {
  std::printf("acceptance suite: collective-emitter susceptibility toolkit\n");
  criterion1_plugback();
  criterion2_oracle_equivalence();
  criterion3_gd0_degeneracy();
  criterion4_size_enhancement();
  criterion5_off_resonant_asymptote();
  criterion6_fig2_reproduction();
  criterion7_density_matrix_sanity();
  criterion8_swap_symmetry();
  if (failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
