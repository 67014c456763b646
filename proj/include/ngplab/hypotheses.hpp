#pragma once

// Numeric verification of the kernel hypotheses:
//   (H0)  W_hat bounded, nonnegative, W_hat(0) = 1
//   (H1)  W_hat in C^3, W_hat''(0) > -1, W_hat(xi) >= 1 - xi^2/2 on |xi| < 2
//   (H2') int_0^inf W_hat(xi) (|f_s|^2 - |f_c|^2) dxi >= 0 for all odd f
//
// (H2') ranges over an infinite function space, so the checker is a
// falsifier: it searches a parameterized family of odd test functions for a
// counterexample.  "verified_on_family" is weaker than the universal claim.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ngplab/grid.hpp"
#include "ngplab/kernel.hpp"

namespace ngplab {

enum class H2Verdict { verified_on_family, violated, inconclusive };

inline const char* h2_verdict_name(H2Verdict v) {
  switch (v) {
    case H2Verdict::verified_on_family: return "verified-on-family";
    case H2Verdict::violated: return "violated";
    case H2Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Odd test function on the half line, one of two shapes:
//   hermite: f(x) = x exp(-(x/s)^2) (p0 + p1 x^2 + p2 x^4)
//   bumps:   f(x) = sum_j c_j [exp(-((x-a_j)/s_j)^2) - exp(-((x+a_j)/s_j)^2)]
// (the bump sum is the odd extension of translated Gaussians).
struct TestFunction {
  enum class Shape { hermite, bumps };
  Shape shape = Shape::bumps;
  std::vector<double> params;

  double operator()(double x) const {
    if (shape == Shape::hermite) {
      const double s = std::max(std::abs(params[0]), 0.2);
      const double x2 = x * x;
      return x * std::exp(-x2 / (s * s)) * (params[1] + params[2] * x2 + params[3] * x2 * x2);
    }
    double f = 0.0;
    for (size_t j = 0; j + 3 <= params.size(); j += 3) {
      const double c = params[j], a = params[j + 1];
      const double s = std::max(std::abs(params[j + 2]), 0.2);
      const double dm = (x - a) / s, dp = (x + a) / s;
      f += c * (std::exp(-dm * dm) - std::exp(-dp * dp));
    }
    return f;
  }
};

struct H2PrimeWitness {
  TestFunction function;
  double integral;  // I(f) at the stored parameters
  double norm2;     // int_0^inf f^2
};

struct HypothesisReport {
  // (H0)
  std::optional<bool> h0_ok;
  double h0_worst_value = 0.0;
  double h0_worst_xi = 0.0;
  // (H1)
  std::optional<bool> h1_ok;
  double second_deriv_at_zero = 0.0;
  double h1_margin = 0.0;  // min over |xi|<2 of W_hat - (1 - xi^2/2)
  std::optional<double> omega;
  // (H2')
  std::optional<H2Verdict> h2prime;
  std::optional<H2PrimeWitness> h2_witness;
  double h2_min_ratio = 0.0;  // min I(f)/||f||^2 seen during the search

  void merge(const HypothesisReport& o) {
    if (o.h0_ok) { h0_ok = o.h0_ok; h0_worst_value = o.h0_worst_value; h0_worst_xi = o.h0_worst_xi; }
    if (o.h1_ok) {
      h1_ok = o.h1_ok;
      second_deriv_at_zero = o.second_deriv_at_zero;
      h1_margin = o.h1_margin;
      omega = o.omega;
    }
    if (o.h2prime) { h2prime = o.h2prime; h2_witness = o.h2_witness; h2_min_ratio = o.h2_min_ratio; }
  }
};

// --- (H0) --------------------------------------------------------------------

template <typename Symbol>
HypothesisReport check_H0_fn(Symbol&& symbol, double xi_max, int n_samples) {
  if (n_samples < 1000) throw std::invalid_argument("check_H0: n_samples must be >= 1000");
  HypothesisReport rep;
  double worst = symbol(0.0), worst_xi = 0.0;
  for (int i = 0; i <= n_samples; ++i) {
    const double xi = xi_max * i / n_samples;
    const double v = symbol(xi);
    if (v < worst) { worst = v; worst_xi = xi; }
  }
  rep.h0_worst_value = worst;
  rep.h0_worst_xi = worst_xi;
  rep.h0_ok = (worst >= -1e-12) && (std::abs(symbol(0.0) - 1.0) <= 1e-12);
  return rep;
}

inline HypothesisReport check_H0(const InteractionKernel& k, double xi_max = 100.0,
                                 int n_samples = 100000) {
  return check_H0_fn([&](double z) { return k.symbol(z); }, xi_max, n_samples);
}

// --- (H1) --------------------------------------------------------------------

namespace detail {

// 5-point central second difference, O(h^4).
template <typename Symbol>
double second_diff(Symbol&& f, double h) {
  return (-f(-2 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2 * h)) / (12.0 * h * h);
}

}  // namespace detail

template <typename Symbol>
HypothesisReport check_H1_fn(Symbol&& symbol) {
  HypothesisReport rep;
  const double h = 1e-3;
  const double d_h = detail::second_diff(symbol, h);
  const double d_h2 = detail::second_diff(symbol, 0.5 * h);
  const double d2 = (16.0 * d_h2 - d_h) / 15.0;  // one Richardson step
  rep.second_deriv_at_zero = d2;

  double margin = std::numeric_limits<double>::infinity();
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double xi = -2.0 + 4.0 * i / (n - 1);
    margin = std::min(margin, symbol(xi) - (1.0 - 0.5 * xi * xi));
  }
  rep.h1_margin = margin;
  rep.h1_ok = (d2 > -1.0) && (margin >= -1e-12);
  if (1.0 + d2 >= 0.0) rep.omega = std::sqrt(1.0 + d2);
  return rep;
}

inline HypothesisReport check_H1(const InteractionKernel& k) {
  return check_H1_fn([&](double z) { return k.symbol(z); });
}

// --- (H2') -------------------------------------------------------------------

namespace detail {

// Half-line quadrature workspace for I(f) = int_0^inf W_hat (|f_s|^2-|f_c|^2).
// With F(xi) = int_0^inf e^{-i x xi} f(x) dx = f_c - i f_s one has
// |f_s|^2 - |f_c|^2 = -Re(F^2); F is computed by a zero-padded FFT.
class HalfLineTransform {
 public:
  HalfLineTransform(int n_x = 4096, double extent = 64.0, int pad = 4)
      : n_x_(n_x), extent_(extent), hx_(extent / n_x), n_f_(pad * n_x), engine_(n_f_) {
    xi_.resize(n_f_ / 2 + 1);
    for (int k = 0; k <= n_f_ / 2; ++k) xi_[k] = 2.0 * M_PI * k / (n_f_ * hx_);
  }

  double hx() const { return hx_; }
  double extent() const { return extent_; }

  template <typename Symbol>
  double integral(Symbol&& symbol, const TestFunction& f, double* norm2_out) const {
    std::vector<cd> buf(n_f_, cd(0.0, 0.0));
    double n2 = 0.0;
    for (int j = 0; j < n_x_; ++j) {
      const double v = f(hx_ * j);
      buf[j] = v;
      n2 += v * v;
    }
    n2 *= hx_;
    if (norm2_out) *norm2_out = n2;

    std::vector<cd> hat(n_f_);
    engine_.dft(buf.data(), hat.data());
    const double dxi = xi_[1];
    double acc = 0.0, comp = 0.0;
    for (int k = 0; k <= n_f_ / 2; ++k) {
      const cd F = hx_ * hat[k];
      const double diff = -(F * F).real();  // |f_s|^2 - |f_c|^2
      double term = symbol(xi_[k]) * diff * ((k == 0 || k == n_f_ / 2) ? 0.5 : 1.0);
      double y = term - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    return dxi * acc;
  }

 private:
  int n_x_;
  double extent_, hx_;
  int n_f_;
  FftEngine engine_;
  std::vector<double> xi_;
};

}  // namespace detail

// Re-evaluates the (H2') integral for a stored test function; used to confirm
// witnesses independently of the search.
template <typename Symbol>
double h2prime_integral_fn(Symbol&& symbol, const TestFunction& f, double* norm2 = nullptr,
                           bool refined = false) {
  if (refined) {
    detail::HalfLineTransform fine(8192, 96.0, 4);
    return fine.integral(symbol, f, norm2);
  }
  detail::HalfLineTransform std_grid;
  return std_grid.integral(symbol, f, norm2);
}

inline double h2prime_integral(const InteractionKernel& k, const TestFunction& f,
                               double* norm2 = nullptr, bool refined = false) {
  return h2prime_integral_fn([&](double z) { return k.symbol(z); }, f, norm2, refined);
}

// Derivative-free coordinate-descent search for a violating test function.
// search_budget counts integral evaluations across all restarts.
template <typename Symbol>
HypothesisReport check_H2prime_fn(Symbol&& symbol, long search_budget = 4000,
                                  std::uint64_t seed = 12345) {
  if (search_budget < 100) throw std::invalid_argument("check_H2prime: search_budget must be >= 100");
  detail::HalfLineTransform hl;
  long evals = 0;

  double best_ratio = std::numeric_limits<double>::infinity();
  TestFunction best_f;
  double best_I = 0.0, best_n2 = 0.0;

  auto eval = [&](const TestFunction& f) {
    double n2 = 0.0;
    const double I = hl.integral(symbol, f, &n2);
    ++evals;
    if (n2 < 1e-10) return std::numeric_limits<double>::infinity();
    const double r = I / n2;
    if (r < best_ratio) { best_ratio = r; best_f = f; best_I = I; best_n2 = n2; }
    return r;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ucoef(-1.0, 1.0), ucenter(0.5, 20.0), uwidth(0.3, 4.0);

  auto make_start = [&](int restart) {
    TestFunction f;
    if (restart % 4 == 3) {
      f.shape = TestFunction::Shape::hermite;
      f.params = {uwidth(rng) + 0.5, ucoef(rng), 0.1 * ucoef(rng), 0.01 * ucoef(rng)};
    } else {
      f.shape = TestFunction::Shape::bumps;
      const int K = 1 + restart % 3;
      for (int j = 0; j < K; ++j) {
        f.params.push_back(ucoef(rng));
        f.params.push_back(ucenter(rng));
        f.params.push_back(uwidth(rng));
      }
    }
    return f;
  };

  for (int restart = 0; evals < search_budget; ++restart) {
    TestFunction f = make_start(restart);
    double val = eval(f);
    std::vector<double> step(f.params.size());
    for (size_t i = 0; i < step.size(); ++i)
      step[i] = (f.shape == TestFunction::Shape::bumps && i % 3 == 1) ? 2.0 : 0.4;

    while (evals < search_budget) {
      bool improved = false;
      for (size_t i = 0; i < f.params.size() && evals < search_budget; ++i) {
        for (double sgn : {1.0, -1.0}) {
          TestFunction trial = f;
          trial.params[i] += sgn * step[i];
          const double v = eval(trial);
          if (v < val - 1e-15) { f = trial; val = v; improved = true; }
        }
      }
      if (!improved) {
        for (auto& s : step) s *= 0.5;
        if (*std::max_element(step.begin(), step.end()) < 1e-3) break;
      }
    }
  }

  HypothesisReport rep;
  rep.h2_min_ratio = best_ratio;
  if (best_ratio < -1e-9) {
    // confirm on a refined quadrature before committing to "violated"
    double n2_ref = 0.0;
    const double I_ref = h2prime_integral_fn(symbol, best_f, &n2_ref, /*refined=*/true);
    if (I_ref < -0.5e-9 * n2_ref) {
      rep.h2prime = H2Verdict::violated;
      rep.h2_witness = H2PrimeWitness{best_f, best_I, best_n2};
    } else {
      rep.h2prime = H2Verdict::inconclusive;
    }
  } else {
    rep.h2prime = H2Verdict::verified_on_family;
  }
  return rep;
}

inline HypothesisReport check_H2prime(const InteractionKernel& k, long search_budget = 4000,
                                      std::uint64_t seed = 12345) {
  return check_H2prime_fn([&](double z) { return k.symbol(z); }, search_budget, seed);
}

inline HypothesisReport check_all(const InteractionKernel& k, double xi_max = 100.0) {
  HypothesisReport rep = check_H0(k, xi_max);
  rep.merge(check_H1(k));
  rep.merge(check_H2prime(k));
  return rep;
}

}  // namespace ngplab
