// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures.  Desk scale: N = 8192, L = 256 unless a criterion's physics needs
// a longer box (the long-wave regimes of criteria 3 and 5).

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ngplab/closed_form.hpp"
#include "ngplab/curve.hpp"
#include "ngplab/evolve.hpp"
#include "ngplab/hypotheses.hpp"
#include "ngplab/minimize.hpp"

using namespace ngplab;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& label, const std::string& detail) {
  std::printf("%s  criterion %2d  %-38s %s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// oracle E at momentum q via bisection on the strictly decreasing p(c)
OracleInvariants dirac_oracle_at_q(double q) {
  double lo = 1e-4, hi = std::sqrt(2.0) - 1e-7;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gp_soliton_invariants(mid).p > q ? lo : hi) = mid;
  }
  return gp_soliton_invariants(0.5 * (lo + hi));
}

// best real shift aligning a onto b, by correlation peak + golden refinement
double align_shift(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
  const int n = g.n();
  std::vector<cd> fa(a.begin(), a.end()), fb(b.begin(), b.end()), ha(n), hb(n);
  g.raw_dft(fa.data(), ha.data());
  g.raw_dft(fb.data(), hb.data());
  for (int k = 0; k < n; ++k) ha[k] = hb[k] * std::conj(ha[k]);
  g.raw_idft(ha.data(), fa.data());
  int best = 0;
  for (int s = 1; s < n; ++s)
    if (fa[s].real() > fa[best].real()) best = s;
  double s0 = best * g.spacing();
  if (s0 > g.length() / 2) s0 -= g.length();

  auto l2err = [&](double s) {
    auto at = translate(g, a, s);
    double acc = 0;
    for (int j = 0; j < n; ++j) acc += (at[j] - b[j]) * (at[j] - b[j]);
    return acc;
  };
  double lo = s0 - g.spacing(), hi = s0 + g.spacing();
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
  double f1 = l2err(c1), f2 = l2err(c2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      hi = c2; c2 = c1; f2 = f1;
      c1 = hi - gr * (hi - lo); f1 = l2err(c1);
    } else {
      lo = c1; c1 = c2; f1 = f2;
      c2 = lo + gr * (hi - lo); f2 = l2err(c2);
    }
  }
  return 0.5 * (lo + hi);
}

HydroField smooth_random_field(const Grid& g, std::uint64_t seed, double amp) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-g.length() / 10, g.length() / 10);
  std::uniform_real_distribution<double> us(2.0, 6.0);
  std::uniform_real_distribution<double> ua(-amp, amp);
  HydroField h{g, std::vector<double>(g.n(), 0.0), std::vector<double>(g.n(), 0.0)};
  for (int b = 0; b < 3; ++b) {
    const double c1 = uc(rng), s1 = us(rng), a1 = ua(rng);
    const double c2 = uc(rng), s2 = us(rng), a2 = ua(rng);
    for (int j = 0; j < g.n(); ++j) {
      const double z1 = (g.x(j) - c1) / s1, z2 = (g.x(j) - c2) / s2;
      h.eta[j] += a1 * std::exp(-z1 * z1);
      h.w[j] += a2 * std::exp(-z2 * z2);
    }
  }
  return h;
}

struct MinimizerRecord {
  std::string origin;
  SolitonSolution sol;
};
std::vector<MinimizerRecord> g_minimizers;

// ---------------------------------------------------------------------------

void criterion_1() {
  const Grid g = make_grid(8192, 256.0);
  const auto kernel = InteractionKernel::dirac();
  const auto oracle = gp_soliton_invariants(1.0);

  HydroField seed = gp_soliton_hydro(1.0, g);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> amp(5), ph(5);
  for (int m = 0; m < 5; ++m) {
    amp[m] = 0.01 * u(rng);
    ph[m] = M_PI * u(rng);
  }
  for (int j = 0; j < g.n(); ++j) {
    double f = 1.0;
    for (int m = 0; m < 5; ++m)
      f += amp[m] * std::sin(2 * M_PI * (m + 1) * g.x(j) / g.length() + ph[m]);
    seed.eta[j] *= f;
    seed.w[j] *= f;
  }

  SolitonSolution sol = minimize(g, kernel, oracle.p, seed);
  g_minimizers.push_back({"criterion1", sol});

  const auto exact = gp_soliton_hydro(1.0, g);
  const double s = align_shift(g, sol.field.eta, exact.eta);
  auto eta_al = translate(g, sol.field.eta, s);
  auto w_al = translate(g, sol.field.w, s);
  double sup = 0;
  for (int j = 0; j < g.n(); ++j) {
    sup = std::max(sup, std::abs(eta_al[j] - exact.eta[j]));
    sup = std::max(sup, std::abs(w_al[j] - exact.w[j]));
  }
  const double erel = std::abs(sol.E - oracle.E) / oracle.E;
  const bool ok = sol.converged && sup <= 1e-3 && erel <= 1e-4;
  report(1, ok, "dirac oracle equivalence",
         "sup profile err " + fmt(sup) + " (<=1e-3), rel E err " + fmt(erel) +
             " (<=1e-4), converged=" + (sol.converged ? "yes" : "no"));
}

void criterion_2() {
  const Grid g = make_grid(8192, 256.0);
  const auto kernel = InteractionKernel::dirac();
  std::vector<double> qs;
  for (int i = 1; i <= 14; ++i) qs.push_back(0.1 * i);
  for (double q = 1.45; q <= 2.0 + 1e-9; q += 0.05) qs.push_back(q);

  auto res = sweep(g, kernel, qs, {});
  bool match = true;
  double worst = 0;
  for (size_t i = 0; i < res.points.size(); ++i) {
    const auto& pt = res.points[i];
    if (pt.q > 1.5 + 1e-9) continue;
    if (!pt.converged) {
      match = false;
      continue;
    }
    const double Eo = dirac_oracle_at_q(pt.q).E;
    const double rel = std::abs(pt.E - Eo) / Eo;
    worst = std::max(worst, rel);
    if (rel > 1e-3) match = false;
    g_minimizers.push_back({"criterion2 q=" + fmt(pt.q), res.solutions[i]});
  }
  auto qstar = estimate_q_star(res.points);
  const bool qstar_ok = qstar && std::abs(*qstar - M_PI / 2) <= 0.05;
  report(2, match && qstar_ok, "dirac curve vs parametric oracle",
         "worst rel E err " + fmt(worst) + " (<=1e-3), q* " +
             (qstar ? fmt(*qstar) : std::string("none")) + " (pi/2 +- 0.05)");
}

void criterion_3() {
  const Grid g = make_grid(16384, 2048.0);
  const auto kernel = InteractionKernel::dirac();  // omega = 1
  bool ok = true;
  std::string detail;
  for (double eps : {0.1, 0.2, 0.4}) {
    const KdvAnsatz a{eps, 1.0};
    const auto h = kdv_ansatz(a, g);
    const auto pred = kdv_predictions(a);
    const double perr = std::abs(momentum(h) - pred.p);
    const double eerr = std::abs(energy(h, kernel) - pred.E);
    if (perr > 1e-8 || eerr > 5 * std::pow(eps, 6.0)) ok = false;
    if (eps == 0.4) detail = "p err " + fmt(perr) + " (<=1e-8), E err " + fmt(eerr) + " (<=5eps^6=" + fmt(5 * std::pow(eps, 6.0)) + ")";
  }
  const double res = kdv_profile_residual(1.0, make_grid(2048, 256.0));
  if (res > 1e-8) ok = false;
  report(3, ok, "long-wave asymptotics", detail + ", profile residual " + fmt(res) + " (<=1e-8)");
}

void criterion_4() {
  const auto kernel = InteractionKernel::roton(-36.0, 2687.0, 30.0);
  auto ext = dispersion_extrema(kernel, 0.01, 1.2, 4000);
  bool ok = ext.size() == 2 && ext[0].is_max && !ext[1].is_max && ext[0].xi >= 0.31 &&
            ext[0].xi <= 0.35 && ext[1].xi >= 0.51 && ext[1].xi <= 0.55;
  std::string detail = "found " + std::to_string(ext.size()) + " extrema";
  if (ext.size() == 2)
    detail += ": max at " + fmt(ext[0].xi) + " (in [0.31,0.35]), min at " + fmt(ext[1].xi) +
              " (in [0.51,0.55])";
  report(4, ok, "roton-maxon dispersion", detail);
}

void criterion_5() {
  // omega ~ 13.4 puts the small-q solitons in a wide long-wave regime; the
  // default box cannot hold them, so the sweep runs on L = 4096.
  const Grid g = make_grid(16384, 4096.0);
  const auto kernel = InteractionKernel::exp_pair(0.05, 0.15);
  std::vector<double> qs;
  for (int i = 1; i <= 30; ++i) qs.push_back(0.05 * i);

  auto res = sweep(g, kernel, qs, {});
  bool all_converged = true, under_line = true;
  for (size_t i = 0; i < res.points.size(); ++i) {
    const auto& pt = res.points[i];
    if (!pt.converged) all_converged = false;
    if (!(pt.E <= std::sqrt(2.0) * pt.q)) under_line = false;
    if (pt.converged) g_minimizers.push_back({"criterion5 q=" + fmt(pt.q), res.solutions[i]});
  }
  const double omega = std::sqrt(1.0 + check_H1(kernel).second_deriv_at_zero);
  auto diag = diagnose(res.points, omega);
  const double maxE = res.points.back().E;

  auto ratio = [&](double q) {
    for (const auto& pt : res.points)
      if (std::abs(pt.q - q) < 1e-9) return pt.E / pt.q;
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double r02 = ratio(0.2), r01 = ratio(0.1), r005 = ratio(0.05);
  const bool tangent = r02 < r01 && r01 < r005 && r005 < std::sqrt(2.0);

  const bool ok = all_converged && diag.concave && under_line && tangent;
  report(5, ok, "exp_pair concavity and tangent",
         "worst 2nd diff " + fmt(diag.worst_second_difference) + " (<= " + fmt(1e-6 * maxE) +
             "), E/q at {0.2,0.1,0.05} = {" + fmt(r02) + "," + fmt(r01) + "," + fmt(r005) +
             "} increasing to sqrt2=" + (tangent ? "yes" : "no"));
}

void criterion_6() {
  bool ok = true;
  std::string detail;

  for (const auto& [kernel, name] :
       {std::pair{InteractionKernel::exp_pair(0.05, 0.15), "exp_pair"},
        std::pair{InteractionKernel::log_kernel(0.8), "log_kernel"}}) {
    auto rep = check_all(kernel);
    const bool pass = *rep.h0_ok && *rep.h1_ok && *rep.h2prime == H2Verdict::verified_on_family;
    if (!pass) ok = false;
    detail += std::string(name) + (pass ? " ok; " : " FAILED; ");
  }

  const auto td = InteractionKernel::three_delta(10.0);
  auto rep = check_H2prime(td);
  bool td_ok = *rep.h2prime == H2Verdict::violated && rep.h2_witness.has_value();
  if (td_ok) {
    double n2 = 0;
    const double I = h2prime_integral(td, rep.h2_witness->function, &n2);
    td_ok = I < -1e-9 * n2;
    detail += "three_delta witness I/||f||^2 = " + fmt(I / n2) + "; ";
  } else {
    detail += "three_delta violation NOT found; ";
  }
  if (!td_ok) ok = false;

  auto roton = check_H1(InteractionKernel::roton(-36.0, 2687.0, 30.0));
  const bool roton_fails_h1 = !*roton.h1_ok;
  detail += std::string("roton H1 ") + (roton_fails_h1 ? "fails as expected" : "UNEXPECTEDLY PASSES");
  if (!roton_fails_h1) ok = false;

  report(6, ok, "hypothesis checker", detail);
}

void criterion_7() {
  const Grid g = make_grid(1024, 256.0);
  const auto kernel = InteractionKernel::exp_pair(0.05, 0.15);
  double worstE = 0, worstP = 0;
  for (int trial = 0; trial < 10; ++trial) {
    auto h = smooth_random_field(g, 7000 + trial, 0.25);
    auto gE = grad_energy(h, kernel);
    auto gp = grad_momentum(h);
    for (int d = 0; d < 3; ++d) {
      auto dir = smooth_random_field(g, 8000 + 10 * trial + d, 1.0);
      const double t = 1e-6;
      HydroField hp = h, hm = h;
      for (int j = 0; j < g.n(); ++j) {
        hp.eta[j] += t * dir.eta[j];
        hp.w[j] += t * dir.w[j];
        hm.eta[j] -= t * dir.eta[j];
        hm.w[j] -= t * dir.w[j];
      }
      std::vector<double> f(g.n());
      for (int j = 0; j < g.n(); ++j) f[j] = gE.eta[j] * dir.eta[j] + gE.w[j] * dir.w[j];
      const double anE = quadrature(g, f);
      const double fdE = (energy(hp, kernel) - energy(hm, kernel)) / (2 * t);
      worstE = std::max(worstE, std::abs(anE - fdE) / std::max(1e-300, std::abs(fdE)));

      for (int j = 0; j < g.n(); ++j) f[j] = gp.eta[j] * dir.eta[j] + gp.w[j] * dir.w[j];
      const double anP = quadrature(g, f);
      const double fdP = (momentum(hp) - momentum(hm)) / (2 * t);
      worstP = std::max(worstP, std::abs(anP - fdP) / std::max(1e-300, std::abs(fdP)));
    }
  }
  const bool ok = worstE <= 1e-5 && worstP <= 1e-10;
  report(7, ok, "gradient correctness",
         "worst rel err: energy " + fmt(worstE) + " (<=1e-5), momentum " + fmt(worstP) +
             " (<=1e-10)");
}

void criterion_8() {
  const Grid g = make_grid(8192, 256.0);
  const auto kernel = InteractionKernel::dirac();
  const auto u = gp_soliton_complex(1.0, g);

  auto drift = [&](double dt, double t_end) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = std::max(1, static_cast<int>(std::llround(0.5 / dt)));
    auto s = evolve(u, kernel, cfg);
    const double E0 = s.energies.front(), p0 = s.momenta.front();
    double dE = 0, dp = 0, minmod = 1;
    for (size_t i = 0; i < s.times.size(); ++i) {
      dE = std::max(dE, std::abs(s.energies[i] - E0) / std::abs(E0));
      minmod = std::min(minmod, s.min_modulus[i]);
      if (s.min_modulus[i] > 0.1) dp = std::max(dp, std::abs(s.momenta[i] - p0) / std::abs(p0));
    }
    return std::tuple{dE, dp, minmod};
  };

  const auto [dE, dp, minmod] = drift(1e-3, 10.0);
  const bool conserve_ok = dE <= 1e-6 && dp <= 1e-6 && minmod > 0.1;

  // the order-2 ratio is measured at dt large enough that the splitting error
  // resolves above the roundoff floor (at dt = 1e-3 the drift is ~1e-12)
  const auto [d1, p1, m1] = drift(0.05, 10.0);
  const auto [d2, p2, m2] = drift(0.025, 10.0);
  const bool order2_ok = d1 > 1e-9 && d2 <= d1 / 3.5;

  report(8, conserve_ok && order2_ok, "conservation and splitting order",
         "rel drift at dt=1e-3: E " + fmt(dE) + ", p " + fmt(dp) +
             " (<=1e-6); drift(0.05)/drift(0.025) = " + fmt(d1 / d2) + " (>=3.5)");
}

void criterion_9() {
  const Grid g = make_grid(8192, 256.0);
  const auto kernel = InteractionKernel::dirac();

  double lo = 1e-4, hi = std::sqrt(2.0) - 1e-7;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gp_soliton_invariants(mid).p > 0.5 ? lo : hi) = mid;
  }
  auto sol = minimize(g, kernel, 0.5, gp_soliton_hydro(0.5 * (lo + hi), g));
  if (!sol.converged) {
    report(9, false, "orbital stability", "reference solve did not converge");
    return;
  }
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 50.0;
  cfg.record_every = 250;
  cfg.perturbation_amplitude = 1e-2;
  auto [max_dist, summary] = stability_experiment(sol, kernel, cfg, 42);
  const double d0 = summary.distances.front();
  const bool ok = d0 > 0 && max_dist <= 10.0 * d0;
  report(9, ok, "orbital stability",
         "initial dist " + fmt(d0) + ", max dist " + fmt(max_dist) + " (<= 10x initial)");
}

void criterion_10() {
  bool ok = true;
  int checked = 0;
  std::string worst;
  for (const auto& rec : g_minimizers) {
    if (!rec.sol.converged) continue;
    auto rep = apriori_check(rec.sol.E, rec.sol.q, rec.sol.field);
    ++checked;
    if (!rep.all_ok()) {
      ok = false;
      worst = rec.origin;
    }
  }
  report(10, ok && checked > 0, "a priori bounds at minimizers",
         std::to_string(checked) + " minimizers checked" +
             (ok ? "" : ", first failure: " + worst));
}

}  // namespace

int main() {
  std::printf("ngplab acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
