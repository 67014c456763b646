#pragma once

// Field representations and the conserved functionals.
//
// The working variable is the hydrodynamic pair (eta, w) = (1 - |u|^2, theta'):
// both decay at the box edges even when u carries a phase jump, so periodic
// truncation is clean.  The complex form tags the total phase increment
// across the box (Bloch twist) explicitly.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ngplab/grid.hpp"
#include "ngplab/kernel.hpp"

namespace ngplab {

struct HydroField {
  Grid grid;
  std::vector<double> eta;  // 1 - |u|^2
  std::vector<double> w;    // theta'

  void check_sizes() const {
    if (static_cast<int>(eta.size()) != grid.n() || static_cast<int>(w.size()) != grid.n())
      throw std::invalid_argument("HydroField: array sizes do not match grid");
  }
  // Nonvanishing: the lifting u = rho e^{i theta} requires eta < 1 everywhere.
  void check_nonvanishing() const {
    for (double e : eta)
      if (!(e < 1.0)) throw std::domain_error("HydroField: eta >= 1 (field leaves the nonvanishing class)");
  }
};

struct ComplexField {
  Grid grid;
  std::vector<cd> values;
  double phase_jump = 0.0;  // theta(L/2) - theta(-L/2)
};

// Worst |eta|, |w| over the outer `fraction` of the box on each side.
struct BoundaryDecay {
  double worst_eta = 0.0;
  double worst_w = 0.0;
  bool ok(double tol = 1e-8) const { return worst_eta < tol && worst_w < tol; }
};

inline BoundaryDecay boundary_decay(const HydroField& h, double fraction = 0.05) {
  const int n = h.grid.n();
  const int m = std::max(1, static_cast<int>(fraction * n));
  BoundaryDecay b;
  for (int j = 0; j < n; ++j) {
    if (j >= m && j < n - m) continue;
    b.worst_eta = std::max(b.worst_eta, std::abs(h.eta[j]));
    b.worst_w = std::max(b.worst_w, std::abs(h.w[j]));
  }
  return b;
}

struct EnergyBreakdown {
  double kinetic_rho = 0.0;    // (1/2) int rho'^2 = (1/2) int eta'^2 / (4(1-eta))
  double kinetic_phase = 0.0;  // (1/2) int (1-eta) w^2
  double potential = 0.0;      // (1/4) int (W*eta) eta
  double total() const { return kinetic_rho + kinetic_phase + potential; }
};

// E = (1/2)int rho'^2 + (1/2)int (1-eta) w^2 + (1/4)int (W*eta) eta,
// with rho' = -eta'/(2 sqrt(1-eta)) and eta' spectral.
inline EnergyBreakdown energy_parts(const HydroField& h, const InteractionKernel& kernel) {
  h.check_sizes();
  h.check_nonvanishing();
  const int n = h.grid.n();
  const auto etap = differentiate(h.grid, h.eta, 1);
  std::vector<double> f1(n), f2(n);
  for (int j = 0; j < n; ++j) {
    f1[j] = etap[j] * etap[j] / (4.0 * (1.0 - h.eta[j]));
    f2[j] = (1.0 - h.eta[j]) * h.w[j] * h.w[j];
  }
  const auto weta = convolve_with_symbol(h.grid, h.eta, kernel);
  std::vector<double> f3(n);
  for (int j = 0; j < n; ++j) f3[j] = weta[j] * h.eta[j];

  EnergyBreakdown e;
  e.kinetic_rho = 0.5 * quadrature(h.grid, f1);
  e.kinetic_phase = 0.5 * quadrature(h.grid, f2);
  e.potential = 0.25 * quadrature(h.grid, f3);
  return e;
}

inline double energy(const HydroField& h, const InteractionKernel& kernel) {
  return energy_parts(h, kernel).total();
}

// Renormalized momentum p = (1/2) int eta w.
inline double momentum(const HydroField& h) {
  h.check_sizes();
  const int n = h.grid.n();
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) f[j] = h.eta[j] * h.w[j];
  return 0.5 * quadrature(h.grid, f);
}

// w -> lambda w. Rescales the momentum exactly; for |lambda| <= 1 the energy
// cannot increase (the phase-kinetic term is quadratic in w).
inline HydroField scale_phase(const HydroField& h, double lambda) {
  HydroField out = h;
  for (auto& v : out.w) v *= lambda;
  return out;
}

// Lifting u = sqrt(1-eta) e^{i theta}: theta is the cumulative integral of w
// from the left edge, theta(-L/2) = 0, computed spectrally (mean ramp plus
// periodic antiderivative).  The total increment is exactly quadrature(w),
// which becomes the Bloch twist.
inline ComplexField reconstruct_complex(const HydroField& h) {
  h.check_sizes();
  h.check_nonvanishing();
  const int n = h.grid.n();
  const double wbar = quadrature(h.grid, h.w) / h.grid.length();
  const auto& xi = h.grid.frequencies();
  const int ny = h.grid.nyquist_index();
  std::vector<cd> tmp(h.w.begin(), h.w.end());
  auto anti = h.grid.apply_multiplier(std::span<const cd>(tmp), [&](int k) {
    if (k == 0 || k == ny) return cd(0.0, 0.0);
    return cd(1.0, 0.0) / cd(0.0, xi[k]);
  });
  ComplexField out{h.grid, std::vector<cd>(n), 0.0};
  const double theta0 = anti[0].real();
  for (int j = 0; j < n; ++j) {
    const double theta = wbar * (h.grid.x(j) + 0.5 * h.grid.length()) + anti[j].real() - theta0;
    out.values[j] = std::sqrt(1.0 - h.eta[j]) * std::exp(cd(0.0, theta));
  }
  out.phase_jump = wbar * h.grid.length();
  return out;
}

// Derivative of u in its Bloch frame: u' = e^{i J x / L} d/dx[e^{-i J x / L} u]
// computed with the multiplier shifted by J/L.
inline std::vector<cd> complex_derivative(const ComplexField& c) {
  const int n = c.grid.n();
  const double L = c.grid.length();
  const double k0 = c.phase_jump / L;
  std::vector<cd> v(n);
  for (int j = 0; j < n; ++j)
    v[j] = c.values[j] * std::exp(cd(0.0, -k0 * c.grid.x(j)));
  const auto& xi = c.grid.frequencies();
  auto dv = c.grid.apply_multiplier(std::span<const cd>(v),
                                    [&](int k) { return cd(0.0, xi[k] + k0); });
  for (int j = 0; j < n; ++j) dv[j] *= std::exp(cd(0.0, k0 * c.grid.x(j)));
  return dv;
}

// E = (1/2) int |u'|^2 + (1/4) int (W*eta) eta on the complex representation.
inline double energy_complex(const ComplexField& c, const InteractionKernel& kernel) {
  const int n = c.grid.n();
  const auto du = complex_derivative(c);
  std::vector<double> eta(n), f1(n);
  for (int j = 0; j < n; ++j) {
    eta[j] = 1.0 - std::norm(c.values[j]);
    f1[j] = std::norm(du[j]);
  }
  const auto weta = convolve_with_symbol(c.grid, eta, kernel);
  std::vector<double> f2(n);
  for (int j = 0; j < n; ++j) f2[j] = weta[j] * eta[j];
  return 0.5 * quadrature(c.grid, f1) + 0.25 * quadrature(c.grid, f2);
}

// p = (1/2) int eta Im(conj(u) u')/|u|^2, suspended by the caller when the
// modulus degenerates.
inline double momentum_complex(const ComplexField& c) {
  const int n = c.grid.n();
  const auto du = complex_derivative(c);
  std::vector<double> f(n);
  for (int j = 0; j < n; ++j) {
    const double m2 = std::norm(c.values[j]);
    f[j] = (1.0 - m2) * std::imag(std::conj(c.values[j]) * du[j]) / m2;
  }
  return 0.5 * quadrature(c.grid, f);
}

inline double min_modulus(const ComplexField& c) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : c.values) m = std::min(m, std::abs(v));
  return m;
}

// --- a priori estimates -------------------------------------------------------
//
// With kappa_tilde = 3/2 (valid under (H1)):
//   ||eta||_inf^2  <= 8 k E (1 + 8 k E + 2 sqrt(2 k E))
//   ||eta||_L2^2   <= same right-hand side
// and the momentum-energy control |p| <= E / (sqrt(2) (1 - eps)) whenever
// eps = sup|eta| < 1.

struct AprioriReport {
  double bound = 0.0;          // right-hand side above
  double eta_sup = 0.0;
  double eta_l2_sq = 0.0;
  bool sup_ok = false;
  bool l2_ok = false;
  bool momentum_ok = false;    // vacuously true when eps >= 1
  double momentum_bound = 0.0;
  bool all_ok() const { return sup_ok && l2_ok && momentum_ok; }
};

inline AprioriReport apriori_check(double E, double q, const HydroField& h,
                                   double kappa_tilde = 1.5) {
  if (!(E >= 0.0)) throw std::invalid_argument("apriori_check: E must be nonnegative");
  h.check_sizes();
  AprioriReport r;
  const double kE = kappa_tilde * E;
  r.bound = 8.0 * kE * (1.0 + 8.0 * kE + 2.0 * std::sqrt(2.0 * kE));

  std::vector<double> eta2(h.eta.size());
  for (size_t j = 0; j < h.eta.size(); ++j) {
    r.eta_sup = std::max(r.eta_sup, std::abs(h.eta[j]));
    eta2[j] = h.eta[j] * h.eta[j];
  }
  r.eta_l2_sq = quadrature(h.grid, eta2);

  const double slack = 1e-12 * (1.0 + r.bound);
  r.sup_ok = r.eta_sup * r.eta_sup <= r.bound + slack;
  r.l2_ok = r.eta_l2_sq <= r.bound + slack;

  if (r.eta_sup < 1.0) {
    r.momentum_bound = E / (std::sqrt(2.0) * (1.0 - r.eta_sup));
    r.momentum_ok = std::abs(q) <= r.momentum_bound + 1e-12 * (1.0 + r.momentum_bound);
  } else {
    r.momentum_ok = true;
  }
  return r;
}

}  // namespace ngplab
