#pragma once

// Catalog of interaction kernels, each described by its even real Fourier
// symbol with the normalization symbol(0) = 1, plus the Bogoliubov dispersion
// relation and its extrema.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ngplab/grid.hpp"

namespace ngplab {

enum class KernelKind { dirac, exp_pair, log_kernel, perturbed_log, three_delta, roton };

inline const char* kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::dirac: return "dirac";
    case KernelKind::exp_pair: return "exp_pair";
    case KernelKind::log_kernel: return "log_kernel";
    case KernelKind::perturbed_log: return "perturbed_log";
    case KernelKind::three_delta: return "three_delta";
    case KernelKind::roton: return "roton";
  }
  return "?";
}

namespace detail {

// 3*(xi*coth(xi) - 1)/xi^2, even, smooth, = 1 at 0. coth cancels
// catastrophically near 0, switch to the Taylor series there.
inline double coth_symbol(double xi) {
  double z = std::abs(xi);
  if (z < 1e-4) return 1.0 - xi * xi / 15.0;
  return 3.0 * (z / std::tanh(z) - 1.0) / (z * z);
}

}  // namespace detail

class InteractionKernel {
 public:
  static InteractionKernel dirac() { return InteractionKernel(KernelKind::dirac, {}); }

  static InteractionKernel exp_pair(double alpha, double beta) {
    if (!(beta > 2.0 * alpha && alpha > 0.0))
      throw std::invalid_argument("exp_pair kernel requires beta > 2*alpha > 0");
    return InteractionKernel(KernelKind::exp_pair, {alpha, beta});
  }

  static InteractionKernel log_kernel(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw std::invalid_argument("log_kernel requires alpha in [0,1)");
    return InteractionKernel(KernelKind::log_kernel, {alpha});
  }

  static InteractionKernel perturbed_log(double sigma, int m) {
    if (m < 1) throw std::invalid_argument("perturbed_log requires integer m >= 1");
    const double lo = -0.5 * M_PI * M_PI * m * m;
    if (!(sigma > lo && sigma <= 3.0))
      throw std::invalid_argument("perturbed_log requires sigma in (-pi^2 m^2/2, 3]");
    return InteractionKernel(KernelKind::perturbed_log, {sigma, static_cast<double>(m)});
  }

  static InteractionKernel three_delta(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("three_delta requires sigma > 0");
    return InteractionKernel(KernelKind::three_delta, {sigma});
  }

  static InteractionKernel roton(double a, double b, double c) {
    return InteractionKernel(KernelKind::roton, {a, b, c});
  }

  KernelKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  std::string name() const { return kernel_kind_name(kind_); }

  double symbol(double xi) const {
    switch (kind_) {
      case KernelKind::dirac:
        return 1.0;
      case KernelKind::exp_pair: {
        const double a = params_[0], b = params_[1];
        return b / (b - 2.0 * a) * (1.0 - 2.0 * a * b / (xi * xi + b * b));
      }
      case KernelKind::log_kernel: {
        const double a = params_[0];
        return (1.0 - a * detail::coth_symbol(xi)) / (1.0 - a);
      }
      case KernelKind::perturbed_log: {
        const double s = params_[0], mpi = params_[1] * M_PI;
        const double pref = 2.0 * mpi * mpi / (mpi * mpi + 2.0 * s);
        return pref * (1.0 - 0.5 * detail::coth_symbol(xi) + s / (xi * xi + mpi * mpi));
      }
      case KernelKind::three_delta:
        return 2.0 - std::cos(params_[0] * xi);
      case KernelKind::roton: {
        const double a = params_[0], b = params_[1], c = params_[2];
        const double x2 = xi * xi;
        return (1.0 + a * x2 + b * x2 * x2) * std::exp(-c * x2);
      }
    }
    return 0.0;
  }

  std::function<double(double)> symbol_fn() const {
    return [k = *this](double xi) { return k.symbol(xi); };
  }

 private:
  InteractionKernel(KernelKind k, std::vector<double> p) : kind_(k), params_(std::move(p)) {}
  KernelKind kind_;
  std::vector<double> params_;
};

inline InteractionKernel make_kernel(KernelKind kind, const std::vector<double>& params) {
  switch (kind) {
    case KernelKind::dirac: return InteractionKernel::dirac();
    case KernelKind::exp_pair: return InteractionKernel::exp_pair(params.at(0), params.at(1));
    case KernelKind::log_kernel: return InteractionKernel::log_kernel(params.at(0));
    case KernelKind::perturbed_log:
      return InteractionKernel::perturbed_log(params.at(0), static_cast<int>(params.at(1)));
    case KernelKind::three_delta: return InteractionKernel::three_delta(params.at(0));
    case KernelKind::roton:
      return InteractionKernel::roton(params.at(0), params.at(1), params.at(2));
  }
  throw std::invalid_argument("make_kernel: unknown kind");
}

inline std::vector<double> convolve_with_symbol(const Grid& g, std::span<const double> field,
                                                const InteractionKernel& kernel) {
  if (kernel.kind() == KernelKind::dirac) return std::vector<double>(field.begin(), field.end());
  return convolve_with_symbol_fn(g, field, [&](double xi) { return kernel.symbol(xi); });
}

// --- dispersion relation -----------------------------------------------------

// w(xi) = sqrt(xi^4 + 2 W_hat(xi) xi^2); a negative radicand signals linear
// instability of the constant state.
template <typename Symbol>
double dispersion_fn(Symbol&& symbol, double xi) {
  const double r = xi * xi * xi * xi + 2.0 * symbol(xi) * xi * xi;
  if (r < 0.0)
    throw std::domain_error("dispersion: negative radicand at xi=" + std::to_string(xi) +
                            " (constant state linearly unstable)");
  return std::sqrt(r);
}

inline double dispersion(const InteractionKernel& k, double xi) {
  return dispersion_fn([&](double z) { return k.symbol(z); }, xi);
}

template <typename Symbol>
double speed_of_sound_fn(Symbol&& symbol) {
  const double w0 = symbol(0.0);
  if (!(w0 > 0.0)) throw std::domain_error("speed_of_sound: requires W_hat(0) > 0");
  return std::sqrt(2.0 * w0);
}

inline double speed_of_sound(const InteractionKernel& k) {
  return speed_of_sound_fn([&](double z) { return k.symbol(z); });
}

struct DispersionExtremum {
  double xi;
  double w;
  bool is_max;
};

// Interior extrema of w on (xi_min, xi_max): dense sampling to bracket, then
// golden-section refinement to |dxi| <= 1e-4.
template <typename Symbol>
std::vector<DispersionExtremum> dispersion_extrema_fn(Symbol&& symbol, double xi_min,
                                                      double xi_max, int n_samples) {
  if (!(0.0 < xi_min && xi_min < xi_max))
    throw std::invalid_argument("dispersion_extrema: need 0 < xi_min < xi_max");
  if (n_samples < 3) throw std::invalid_argument("dispersion_extrema: need n_samples >= 3");

  auto w = [&](double xi) { return dispersion_fn(symbol, xi); };
  const double h = (xi_max - xi_min) / (n_samples - 1);
  std::vector<DispersionExtremum> out;

  auto golden = [&](double a, double b, bool find_max) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = w(c), fd = w(d);
    while (b - a > 1e-4) {
      const bool keep_left = find_max ? (fc > fd) : (fc < fd);
      if (keep_left) {
        b = d; d = c; fd = fc;
        c = b - gr * (b - a); fc = w(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + gr * (b - a); fd = w(d);
      }
    }
    return 0.5 * (a + b);
  };

  double prev = w(xi_min), cur = w(xi_min + h);
  for (int i = 1; i + 1 < n_samples; ++i) {
    const double next = w(xi_min + (i + 1) * h);
    const double xl = xi_min + (i - 1) * h, xr = xi_min + (i + 1) * h;
    if (cur > prev && cur > next) {
      const double xs = golden(xl, xr, true);
      out.push_back({xs, w(xs), true});
    } else if (cur < prev && cur < next) {
      const double xs = golden(xl, xr, false);
      out.push_back({xs, w(xs), false});
    }
    prev = cur;
    cur = next;
  }
  return out;
}

inline std::vector<DispersionExtremum> dispersion_extrema(const InteractionKernel& k,
                                                          double xi_min, double xi_max,
                                                          int n_samples) {
  return dispersion_extrema_fn([&](double z) { return k.symbol(z); }, xi_min, xi_max,
                               n_samples);
}

}  // namespace ngplab
