#pragma once

// Sweeping the minimizing curve E_min(q) and its structural diagnostics:
// concavity, monotonicity, the sqrt(2) Lipschitz bound, tangent gaps, the
// relative gap Sigma_q, small-q asymptotic bounds and the plateau threshold.

#include <cmath>
#include <optional>
#include <vector>

#include "ngplab/hypotheses.hpp"
#include "ngplab/minimize.hpp"

namespace ngplab {

struct CurvePoint {
  double q = 0.0;
  double E = 0.0;
  double c_est = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  long iterations = 0;
};

struct SweepResult {
  std::vector<CurvePoint> points;
  std::vector<SolitonSolution> solutions;  // same order as points
};

// Sequential continuation: each point warm-starts from the previous field
// rescaled to the new momentum; the first point is seeded by the long-wave
// ansatz (falling back to the dirac-soliton seed when omega is undefined).
inline SweepResult sweep(const Grid& g, const InteractionKernel& kernel,
                         const std::vector<double>& q_values,
                         const MinimizerConfig& config = {}) {
  if (q_values.empty()) throw std::invalid_argument("sweep: no momenta given");
  for (size_t i = 0; i < q_values.size(); ++i) {
    if (!(q_values[i] > 0.0)) throw std::invalid_argument("sweep: momenta must be positive");
    if (i > 0 && !(q_values[i] > q_values[i - 1]))
      throw std::invalid_argument("sweep: momenta must be strictly ascending");
  }

  const double d2 = check_H1(kernel).second_deriv_at_zero;
  const double omega = (1.0 + d2 > 0.0) ? std::sqrt(1.0 + d2) : 0.0;

  SweepResult out;
  std::optional<HydroField> warm;
  for (double q : q_values) {
    std::optional<SolitonSolution> sol;
    try {
      if (warm) {
        sol = minimize(g, kernel, q, project_momentum(*warm, q), config);
      } else if (omega > 0.0) {
        sol = minimize(g, kernel, q, SeedRule::kdv, config, omega);
      } else {
        sol = minimize(g, kernel, q, SeedRule::gp, config);
      }
    } catch (const BoxTooSmallError& e) {
      sol = e.partial;
      sol->converged = false;
    }
    warm = sol->field;
    out.points.push_back(
        {q, sol->E, sol->c_est, sol->residual_norm, sol->converged, sol->iterations});
    out.solutions.push_back(std::move(*sol));
  }
  return out;
}

struct CurveDiagnostics {
  bool concave = false;
  double worst_second_difference = 0.0;  // max of E_{i+1} - 2E_i + E_{i-1} style differences
  int concavity_witness = -1;            // index where the worst difference occurs
  bool nondecreasing = false;
  bool lipschitz_ok = false;
  std::vector<std::pair<double, double>> tangent_gap;  // (q, sqrt(2) - E/q)
  std::vector<double> sigma;                           // 1 - E/(sqrt(2) q)
  std::optional<double> q_star_estimate;
  bool kdv_bound_ok = false;
};

// Smallest q whose forward slope drops below slope_threshold * sqrt(2) and
// stays below for every later interval; nullopt when no plateau exists.
inline std::optional<double> estimate_q_star(const std::vector<CurvePoint>& points,
                                             double slope_threshold = 0.02) {
  if (points.size() < 2) return std::nullopt;
  const double thr = slope_threshold * std::sqrt(2.0);
  const int m = static_cast<int>(points.size()) - 1;  // number of forward slopes
  int first = -1;
  for (int i = m - 1; i >= 0; --i) {
    const double s = (points[i + 1].E - points[i].E) / (points[i + 1].q - points[i].q);
    if (s < thr)
      first = i;
    else
      break;
  }
  if (first < 0) return std::nullopt;
  return points[first].q;
}

// One-sided difference quotients at an interior point; by concavity the right
// slope is the lower end of the speed bracket.
inline std::pair<double, double> speed_bracket(const std::vector<CurvePoint>& points, int index) {
  if (index <= 0 || index + 1 >= static_cast<int>(points.size()))
    throw std::invalid_argument("speed_bracket: index must be interior");
  const double right =
      (points[index + 1].E - points[index].E) / (points[index + 1].q - points[index].q);
  const double left =
      (points[index].E - points[index - 1].E) / (points[index].q - points[index - 1].q);
  return {right, left};
}

// Diagnostics over the converged points. omega (= sqrt(1 + W_hat''(0)))
// enters the small-q upper bound through K1 = (3 sqrt(2)/omega)^{5/3} omega/20;
// pass 0 when undefined to skip the small-q bound check.
inline CurveDiagnostics diagnose(const std::vector<CurvePoint>& all_points, double omega) {
  std::vector<CurvePoint> pts;
  for (const auto& p : all_points)
    if (p.converged) pts.push_back(p);
  if (pts.size() < 3) throw std::invalid_argument("diagnose: need at least 3 converged points");

  CurveDiagnostics d;
  double maxE = 0.0;
  for (const auto& p : pts) maxE = std::max(maxE, p.E);
  const double tol = 1e-6 * maxE;

  // concavity via slope monotonicity, scaled to match uniform-grid second
  // differences E_{i+1} - 2 E_i + E_{i-1}
  d.concave = true;
  d.worst_second_difference = -std::numeric_limits<double>::infinity();
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    const double sr = (pts[i + 1].E - pts[i].E) / (pts[i + 1].q - pts[i].q);
    const double sl = (pts[i].E - pts[i - 1].E) / (pts[i].q - pts[i - 1].q);
    const double dd = (sr - sl) * 0.5 * (pts[i + 1].q - pts[i - 1].q);
    if (dd > d.worst_second_difference) {
      d.worst_second_difference = dd;
      d.concavity_witness = static_cast<int>(i);
    }
    if (dd > tol) d.concave = false;
  }

  d.nondecreasing = true;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].E < pts[i - 1].E - 1e-8) d.nondecreasing = false;

  d.lipschitz_ok = true;
  for (size_t i = 1; i < pts.size(); ++i) {
    const double dq = pts[i].q - pts[i - 1].q;
    if (std::abs(pts[i].E - pts[i - 1].E) > std::sqrt(2.0) * dq + 1e-8 * (1.0 + maxE))
      d.lipschitz_ok = false;
  }

  for (const auto& p : pts) {
    d.tangent_gap.emplace_back(p.q, std::sqrt(2.0) - p.E / p.q);
    d.sigma.push_back(1.0 - p.E / (std::sqrt(2.0) * p.q));
  }

  d.q_star_estimate = estimate_q_star(all_points);

  // Small-q bounds sqrt(2)q - K0 q^{3/2} <= E <= sqrt(2)q - K1 q^{5/3} + K2 q^2:
  // K1 is fixed by omega; K0 and K2 are fitted at the smallest swept q (with
  // 10% headroom) and the bounds then re-checked at the remaining small-q
  // points, which probes the predicted scalings rather than a tautology.
  d.kdv_bound_ok = true;
  if (omega > 0.0) {
    const double K1 = std::pow(3.0 * std::sqrt(2.0) / omega, 5.0 / 3.0) * omega / 20.0;
    std::vector<const CurvePoint*> small;
    for (const auto& p : pts)
      if (p.q <= 0.3) small.push_back(&p);
    if (small.size() >= 2) {
      const auto& p0 = *small.front();
      const double gap0 = std::sqrt(2.0) * p0.q - p0.E;
      if (gap0 <= 0.0) {
        d.kdv_bound_ok = false;
      } else {
        const double K0 = 1.1 * gap0 / std::pow(p0.q, 1.5);
        const double K2 = 1.1 * std::max(0.0, (p0.E - std::sqrt(2.0) * p0.q +
                                                K1 * std::pow(p0.q, 5.0 / 3.0)) /
                                                   (p0.q * p0.q));
        for (const auto* pp : small) {
          const double lower = std::sqrt(2.0) * pp->q - K0 * std::pow(pp->q, 1.5);
          const double upper =
              std::sqrt(2.0) * pp->q - K1 * std::pow(pp->q, 5.0 / 3.0) + K2 * pp->q * pp->q;
          if (pp->E < lower - tol || pp->E > upper + tol) d.kdv_bound_ok = false;
        }
      }
    }
  }
  return d;
}

}  // namespace ngplab
