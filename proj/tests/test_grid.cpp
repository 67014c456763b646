#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ngplab/grid.hpp"
#include "ngplab/kernel.hpp"

using namespace ngplab;

TEST_CASE("make_grid basic layout") {
  Grid g = make_grid(8, 2 * M_PI);
  CHECK(g.spacing() == Catch::Approx(M_PI / 4).epsilon(1e-15));
  // fft-native order 0,1,2,3,-4,-3,-2,-1 at spacing 2*pi/L = 1
  const std::vector<double> want{0, 1, 2, 3, -4, -3, -2, -1};
  for (int k = 0; k < 8; ++k) CHECK(g.frequencies()[k] == Catch::Approx(want[k]).margin(1e-14));
  int zeros = 0;
  double maxfreq = 0;
  for (double f : g.frequencies()) {
    if (f == 0.0) ++zeros;
    maxfreq = std::max(maxfreq, std::abs(f));
  }
  CHECK(zeros == 1);
  CHECK(maxfreq == Catch::Approx(M_PI / g.spacing()).epsilon(1e-15));
  CHECK(g.spacing() * g.n() == Catch::Approx(g.length()).epsilon(1e-15));

  Grid g2 = make_grid(8192, 256.0);
  CHECK(g2.spacing() == Catch::Approx(0.03125).epsilon(1e-15));
}

TEST_CASE("make_grid rejects bad parameters") {
  CHECK_THROWS_AS(make_grid(7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(100, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(16, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(16, -2.0), std::invalid_argument);
}

TEST_CASE("forward transform of elementary fields") {
  Grid g = make_grid(64, 32.0);
  const int n = g.n();

  std::vector<cd> ones(n, 1.0);
  auto hat = forward_transform(g, ones);
  CHECK(hat[0].real() == Catch::Approx(g.length()).epsilon(1e-13));
  CHECK(hat[0].imag() == Catch::Approx(0.0).margin(1e-12));
  for (int k = 1; k < n; ++k) CHECK(std::abs(hat[k]) < 1e-11);

  const double xi1 = g.frequencies()[1];
  std::vector<cd> mode(n);
  for (int j = 0; j < n; ++j) mode[j] = std::exp(cd(0, xi1 * g.x(j)));
  hat = forward_transform(g, mode);
  CHECK(hat[1].real() == Catch::Approx(g.length()).epsilon(1e-13));
  for (int k = 0; k < n; ++k)
    if (k != 1) CHECK(std::abs(hat[k]) < 1e-11);
}

TEST_CASE("gaussian transform matches the analytic pair") {
  // f = exp(-x^2/2) has f_hat(xi) = sqrt(2 pi) exp(-xi^2/2)
  Grid g = make_grid(256, 64.0);
  std::vector<cd> f(g.n());
  for (int j = 0; j < g.n(); ++j) f[j] = std::exp(-0.5 * g.x(j) * g.x(j));
  auto hat = forward_transform(g, f);
  for (int k = 0; k < g.n(); ++k) {
    const double xi = g.frequencies()[k];
    const double want = std::sqrt(2 * M_PI) * std::exp(-0.5 * xi * xi);
    CHECK(std::abs(hat[k] - cd(want, 0)) < 1e-10);
  }
}

TEST_CASE("inverse transform round trip") {
  Grid g = make_grid(128, 17.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<cd> f(g.n());
  double scale = 0;
  for (auto& v : f) {
    v = cd(nd(rng), nd(rng));
    scale = std::max(scale, std::abs(v));
  }
  auto back = inverse_transform(g, forward_transform(g, f));
  for (int j = 0; j < g.n(); ++j) CHECK(std::abs(back[j] - f[j]) < 1e-12 * scale);

  std::vector<cd> zero(g.n(), 0.0);
  for (auto v : inverse_transform(g, zero)) CHECK(std::abs(v) == 0.0);

  std::vector<cd> delta(g.n(), 0.0);
  delta[0] = g.length();
  for (auto v : inverse_transform(g, delta)) CHECK(std::abs(v - cd(1, 0)) < 1e-13);
}

TEST_CASE("transform size mismatch is rejected") {
  Grid g = make_grid(32, 8.0);
  std::vector<cd> f(31);
  CHECK_THROWS_AS(forward_transform(g, f), std::invalid_argument);
}

TEST_CASE("parseval identity") {
  Grid g = make_grid(512, 100.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<cd> f(g.n());
  for (auto& v : f) v = cd(nd(rng), nd(rng));
  auto hat = forward_transform(g, f);
  double lhs = 0, rhs = 0;
  for (auto v : f) lhs += std::norm(v);
  lhs *= g.spacing();
  for (auto v : hat) rhs += std::norm(v);
  rhs *= (2 * M_PI / g.length()) / (2 * M_PI);
  CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("convolution with the identity symbol") {
  Grid g = make_grid(64, 20.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  std::vector<double> f(g.n());
  for (auto& v : f) v = nd(rng);
  auto r = convolve_with_symbol(g, f, InteractionKernel::dirac());
  for (int j = 0; j < g.n(); ++j) CHECK(r[j] == Catch::Approx(f[j]).margin(1e-13));

  std::vector<double> z(g.n(), 0.0);
  auto rz = convolve_with_symbol(g, z, InteractionKernel::exp_pair(0.05, 0.15));
  for (double v : rz) CHECK(v == 0.0);
}

TEST_CASE("exp_pair convolution matches real-space quadrature") {
  // W_{a,b} * f = b/(b-2a) (f(x) - a int e^{-b|x-y|} f(y) dy)
  const double alpha = 0.05, beta = 0.15;
  Grid g = make_grid(2048, 256.0);
  std::vector<double> f(g.n());
  for (int j = 0; j < g.n(); ++j) f[j] = std::exp(-g.x(j) * g.x(j) / 4.0);
  auto spectral = convolve_with_symbol(g, f, InteractionKernel::exp_pair(alpha, beta));

  const double pref = beta / (beta - 2 * alpha);
  for (int j = 0; j < g.n(); j += 97) {
    double integral = 0;
    for (int i = 0; i < g.n(); ++i)
      integral += std::exp(-beta * std::abs(g.x(j) - g.x(i))) * f[i];
    integral *= g.spacing();
    const double direct = pref * (f[j] - alpha * integral);
    CHECK(spectral[j] == Catch::Approx(direct).margin(1e-8));
  }
}

TEST_CASE("convolution is linear and commutes with grid translations") {
  Grid g = make_grid(128, 64.0);
  auto kernel = InteractionKernel::exp_pair(0.05, 0.15);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> f(g.n()), h(g.n());
  for (int j = 0; j < g.n(); ++j) {
    f[j] = nd(rng);
    h[j] = nd(rng);
  }
  auto cf = convolve_with_symbol(g, f, kernel);
  auto ch = convolve_with_symbol(g, h, kernel);
  std::vector<double> lin(g.n());
  for (int j = 0; j < g.n(); ++j) lin[j] = 2.0 * f[j] - 3.0 * h[j];
  auto clin = convolve_with_symbol(g, lin, kernel);
  for (int j = 0; j < g.n(); ++j)
    CHECK(clin[j] == Catch::Approx(2.0 * cf[j] - 3.0 * ch[j]).margin(1e-11));

  const int s = 17;
  std::vector<double> shifted(g.n());
  for (int j = 0; j < g.n(); ++j) shifted[j] = f[((j - s) % g.n() + g.n()) % g.n()];
  auto cshift = convolve_with_symbol(g, shifted, kernel);
  for (int j = 0; j < g.n(); ++j)
    CHECK(cshift[j] == Catch::Approx(cf[((j - s) % g.n() + g.n()) % g.n()]).margin(1e-11));
}

TEST_CASE("spectral differentiation") {
  Grid g = make_grid(256, 64.0);
  const double xi1 = 2 * M_PI / g.length();
  std::vector<double> f(g.n()), c1(g.n(), 5.0);
  for (int j = 0; j < g.n(); ++j) f[j] = std::sin(xi1 * g.x(j));
  auto d1 = differentiate(g, f, 1);
  for (int j = 0; j < g.n(); ++j)
    CHECK(d1[j] == Catch::Approx(xi1 * std::cos(xi1 * g.x(j))).margin(1e-10));

  for (int order : {1, 2, 3}) {
    auto dc = differentiate(g, c1, order);
    for (double v : dc) CHECK(std::abs(v) < 1e-12);
  }
  CHECK_THROWS_AS(differentiate(g, f, 4), std::invalid_argument);
  CHECK_THROWS_AS(differentiate(g, f, 0), std::invalid_argument);
}

TEST_CASE("second derivative of sech^2 matches the analytic formula") {
  // f = sech^2(x/2): f'' = s^2 t^2 - s^4/2 with s = sech(x/2), t = tanh(x/2)
  Grid g = make_grid(2048, 256.0);
  std::vector<double> f(g.n());
  for (int j = 0; j < g.n(); ++j) {
    const double s = 1.0 / std::cosh(g.x(j) / 2);
    f[j] = s * s;
  }
  auto d2 = differentiate(g, f, 2);
  for (int j = 0; j < g.n(); ++j) {
    const double s = 1.0 / std::cosh(g.x(j) / 2), t = std::tanh(g.x(j) / 2);
    CHECK(d2[j] == Catch::Approx(s * s * t * t - 0.5 * s * s * s * s).margin(1e-8));
  }
}

TEST_CASE("quadrature") {
  Grid g = make_grid(2048, 256.0);
  std::vector<double> ones(g.n(), 1.0), sech2(g.n()), odd(g.n());
  for (int j = 0; j < g.n(); ++j) {
    const double s = 1.0 / std::cosh(g.x(j) / 2);
    sech2[j] = s * s;
    odd[j] = g.x(j) * std::exp(-g.x(j) * g.x(j));
  }
  CHECK(quadrature(g, ones) == Catch::Approx(g.length()).epsilon(1e-14));
  // int sech^2(x/2) dx = [2 tanh(x/2)] = 4
  CHECK(quadrature(g, sech2) == Catch::Approx(4.0).margin(1e-10));
  CHECK(std::abs(quadrature(g, odd)) < 1e-12);
}
