#pragma once

// Uniform periodic grid on [-L/2, L/2) with its FFT-backed spectral toolbox:
// transforms in the integral convention f_hat(xi) = int e^{-i x xi} f(x) dx,
// spectral differentiation, symbol multiplication and quadrature.

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

namespace ngplab {

using cd = std::complex<double>;

namespace detail {

// FFTW plan pair for one size. Plan creation is serialized (FFTW's planner is
// not thread-safe); execution through the new-array interface is.
class FftEngine {
 public:
  explicit FftEngine(int n) : n_(n) {
    std::scoped_lock lk(planner_mutex());
    std::vector<cd> a(n), b(n);
    fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(b.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                            reinterpret_cast<fftw_complex*>(b.data()),
                            FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!fwd_ || !bwd_) throw std::runtime_error("fftw plan creation failed");
  }
  ~FftEngine() {
    std::scoped_lock lk(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  void dft(const cd* in, cd* out) const {
    fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  void idft(const cd* in, cd* out) const {
    fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
  int n() const { return n_; }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }
  int n_;
  fftw_plan fwd_, bwd_;
};

inline bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

// Compensated (Kahan) sum; the quadrature feeding energies must not lose
// digits to naive accumulation.
inline double kahan_sum(std::span<const double> v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    double y = x - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace detail

class Grid {
 public:
  // n_points a power of two >= 8, length > 0.
  static Grid make(int n_points, double length) {
    if (!detail::is_power_of_two(n_points) || n_points < 8)
      throw std::invalid_argument("Grid: n_points must be a power of two >= 8 (got " +
                                  std::to_string(n_points) + ")");
    if (!(length > 0.0))
      throw std::invalid_argument("Grid: length must be positive");
    return Grid(n_points, length);
  }

  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return spacing_; }
  double x(int j) const { return -0.5 * length_ + spacing_ * j; }

  // Frequencies in transform-native (FFT) order: 0, 1, ..., N/2-1, -N/2, ..., -1
  // times 2*pi/length. index_of_mode maps a signed mode number to its slot.
  const std::vector<double>& frequencies() const { return freq_; }
  int index_of_mode(int k) const { return k >= 0 ? k : k + n_; }
  int nyquist_index() const { return n_ / 2; }

  bool same_as(const Grid& o) const {
    return n_ == o.n_ && length_ == o.length_;
  }

  // f_hat(xi_k) ~= int_{-L/2}^{L/2} e^{-i x xi_k} f(x) dx
  std::vector<cd> forward(std::span<const cd> samples) const {
    check_size(samples.size());
    std::vector<cd> out(n_);
    engine_->dft(samples.data(), out.data());
    for (int k = 0; k < n_; ++k) out[k] *= spacing_ * center_phase(k);
    return out;
  }

  std::vector<cd> forward(std::span<const double> samples) const {
    check_size(samples.size());
    std::vector<cd> tmp(samples.begin(), samples.end());
    return forward(std::span<const cd>(tmp));
  }

  // Exact inverse of forward().
  std::vector<cd> inverse(std::span<const cd> coeffs) const {
    check_size(coeffs.size());
    std::vector<cd> tmp(n_);
    for (int k = 0; k < n_; ++k) tmp[k] = coeffs[k] * center_phase(k);
    std::vector<cd> out(n_);
    engine_->idft(tmp.data(), out.data());
    const double scale = 1.0 / length_;
    for (auto& v : out) v *= scale;
    return out;
  }

  // Applies a diagonal-in-frequency multiplier: field -> ifft(m(k) * fft(field)).
  // The centering phases cancel, so this works on raw DFT coefficients.
  template <typename Mult>
  std::vector<cd> apply_multiplier(std::span<const cd> field, Mult&& m) const {
    check_size(field.size());
    std::vector<cd> hat(n_), out(n_);
    engine_->dft(field.data(), hat.data());
    for (int k = 0; k < n_; ++k) hat[k] *= m(k);
    engine_->idft(hat.data(), out.data());
    const double scale = 1.0 / n_;
    for (auto& v : out) v *= scale;
    return out;
  }

  template <typename Mult>
  std::vector<double> apply_multiplier_real(std::span<const double> field, Mult&& m,
                                            const char* what) const {
    std::vector<cd> tmp(field.begin(), field.end());
    std::vector<cd> res = apply_multiplier(std::span<const cd>(tmp), m);
    std::vector<double> out(n_);
    double worst_imag = 0.0, scale = 1.0;
    for (int j = 0; j < n_; ++j) {
      out[j] = res[j].real();
      worst_imag = std::max(worst_imag, std::abs(res[j].imag()));
      scale = std::max(scale, std::abs(res[j].real()));
    }
    if (worst_imag > 1e-12 * scale)
      throw std::runtime_error(std::string(what) +
                               ": imaginary residue exceeds 1e-12, symbol not even/real?");
    return out;
  }

  double quadrature(std::span<const double> field) const {
    check_size(field.size());
    return spacing_ * detail::kahan_sum(field);
  }

  // Unnormalized DFT pair for hot loops that manage their own buffers and
  // normalization. in == out is not allowed.
  void raw_dft(const cd* in, cd* out) const { engine_->dft(in, out); }
  void raw_idft(const cd* in, cd* out) const { engine_->idft(in, out); }

 private:
  Grid(int n, double length)
      : n_(n),
        length_(length),
        spacing_(length / n),
        engine_(std::make_shared<detail::FftEngine>(n)) {
    freq_.resize(n_);
    const double dxi = 2.0 * M_PI / length_;
    for (int k = 0; k < n_; ++k) {
      int mode = (k < n_ / 2) ? k : k - n_;
      freq_[k] = dxi * mode;
    }
  }

  // e^{+i pi k} = (-1)^k: accounts for the box being centered at 0.
  static double center_phase(int k) { return (k & 1) ? -1.0 : 1.0; }

  void check_size(size_t m) const {
    if (static_cast<int>(m) != n_)
      throw std::invalid_argument("Grid: sample length " + std::to_string(m) +
                                  " does not match n_points " + std::to_string(n_));
  }

  int n_;
  double length_;
  double spacing_;
  std::vector<double> freq_;
  std::shared_ptr<const detail::FftEngine> engine_;
};

inline Grid make_grid(int n_points, double length) { return Grid::make(n_points, length); }

inline std::vector<cd> forward_transform(const Grid& g, std::span<const cd> samples) {
  return g.forward(samples);
}
inline std::vector<cd> inverse_transform(const Grid& g, std::span<const cd> coeffs) {
  return g.inverse(coeffs);
}

// Spectral derivative of given order. Odd orders zero the Nyquist mode (its
// sign is ambiguous); order 2 uses the real multiplier -xi^2 there.
inline std::vector<double> differentiate(const Grid& g, std::span<const double> field,
                                         int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("differentiate: order must be 1, 2 or 3");
  const auto& xi = g.frequencies();
  const int ny = g.nyquist_index();
  if (order == 2) {
    return g.apply_multiplier_real(
        field, [&](int k) { return cd(-xi[k] * xi[k], 0.0); }, "differentiate");
  }
  return g.apply_multiplier_real(
      field,
      [&](int k) {
        if (k == ny) return cd(0.0, 0.0);
        cd m(0.0, xi[k]);
        return order == 1 ? m : m * m * m;
      },
      "differentiate");
}

inline std::vector<cd> differentiate(const Grid& g, std::span<const cd> field, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("differentiate: order must be 1, 2 or 3");
  const auto& xi = g.frequencies();
  const int ny = g.nyquist_index();
  return g.apply_multiplier(field, [&](int k) {
    if (order == 2) return cd(-xi[k] * xi[k], 0.0);
    if (k == ny) return cd(0.0, 0.0);
    cd m(0.0, xi[k]);
    return order == 1 ? m : m * m * m;
  });
}

inline double quadrature(const Grid& g, std::span<const double> field) {
  return g.quadrature(field);
}

// W*f for a real even symbol evaluated on the grid frequencies.
template <typename Symbol>
std::vector<double> convolve_with_symbol_fn(const Grid& g, std::span<const double> field,
                                            Symbol&& symbol) {
  const auto& xi = g.frequencies();
  return g.apply_multiplier_real(
      field, [&](int k) { return cd(symbol(xi[k]), 0.0); }, "convolve_with_symbol");
}

// Translation by a real shift: f(x) -> f(x - shift), spectral interpolation.
inline std::vector<double> translate(const Grid& g, std::span<const double> field,
                                     double shift) {
  const auto& xi = g.frequencies();
  const int ny = g.nyquist_index();
  std::vector<cd> tmp(field.begin(), field.end());
  auto res = g.apply_multiplier(std::span<const cd>(tmp), [&](int k) {
    if (k == ny) return cd(std::cos(xi[k] * shift), 0.0);
    return std::exp(cd(0.0, -xi[k] * shift));
  });
  std::vector<double> out(g.n());
  for (int j = 0; j < g.n(); ++j) out[j] = res[j].real();
  return out;
}

}  // namespace ngplab
