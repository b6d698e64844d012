#include <doctest.h>

#include <numbers>
#include <random>

#include "helpers.hpp"
#include "nlkg/errors.hpp"
#include "nlkg/grid.hpp"

using namespace nlkg;
using testing::sech;

TEST_SUITE("grid_field") {
  TEST_CASE("derivative of a constant vanishes") {
    const Grid g(10.0, 64);
    const ComplexVector f(64, Complex(3.0, -1.0));
    for (const auto& z : spectral_derivative(f, g)) CHECK(std::abs(z) < 1e-13);
  }

  TEST_CASE("Fourier mode is an eigenfunction of the derivative") {
    const double L = 7.0;
    const Grid g(L, 32);
    ComplexVector f(32);
    for (std::size_t i = 0; i < 32; ++i) f[i] = std::polar(1.0, 2.0 * std::numbers::pi * g.x(i) / L);
    const auto df = spectral_derivative(f, g);
    const Complex factor(0.0, 2.0 * std::numbers::pi / L);
    for (std::size_t i = 0; i < 32; ++i) CHECK(std::abs(df[i] - factor * f[i]) < 1e-12);
  }

  TEST_CASE("sech derivative matches the analytic -sech tanh") {
    const Grid g(80.0, 1024);
    ComplexVector f(1024);
    for (std::size_t i = 0; i < 1024; ++i) f[i] = sech(g.x(i));
    const auto df = spectral_derivative(f, g);
    double err = 0.0;
    for (std::size_t i = 0; i < 1024; ++i) {
      const double x = g.x(i);
      err = std::max(err, std::abs(df[i] - Complex(-sech(x) * std::tanh(x), 0.0)));
    }
    CHECK(err < 1e-10);
  }

  TEST_CASE("integral of sech squared is 2 and <f, if> vanishes") {
    const Grid g(80.0, 1024);
    ComplexVector f(1024), fi(1024);
    for (std::size_t i = 0; i < 1024; ++i) {
      f[i] = sech(g.x(i));
      fi[i] = Complex(0.0, 1.0) * f[i];
    }
    CHECK(inner_product_L2(f, f, g) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(inner_product_L2(f, fi, g)) < 1e-15);
  }

  TEST_CASE("H1xL2 norm of (sqrt2 sech, 0) is sqrt(16/3)") {
    const Grid g(80.0, 1024);
    Field w(g);
    CHECK(norm_H1L2(w) == 0.0);
    for (std::size_t i = 0; i < 1024; ++i) w.u1[i] = std::sqrt(2.0) * sech(g.x(i));
    CHECK(norm_H1L2(w) == doctest::Approx(std::sqrt(16.0 / 3.0)).epsilon(1e-10));
  }

  TEST_CASE("Parseval") {
    std::mt19937 rng(7);
    const Grid g(20.0, 128);
    const Field w = testing::random_field(g, rng);
    const double a = norm_L2(w.u1, g), b = fourier_norm_L2(w.u1, g);
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }

  TEST_CASE("second derivative is the multiplier -k^2 (direct DFT oracle)") {
    const std::size_t n = 48;
    const double L = 9.0;
    const Grid g(L, n);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // band-limited data: modes |k| < n/2, no Nyquist
    std::vector<Complex> coef(n);
    for (int k = -20; k <= 20; ++k) coef[static_cast<std::size_t>((k + static_cast<int>(n)) % n)] = {u(rng), u(rng)};
    ComplexVector f(n, 0.0), oracle(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = -20; k <= 20; ++k) {
        const double kk = 2.0 * std::numbers::pi * k / L;
        const Complex c = coef[static_cast<std::size_t>((k + static_cast<int>(n)) % n)];
        f[i] += c * std::polar(1.0, kk * g.x(i));
        oracle[i] += -kk * kk * c * std::polar(1.0, kk * g.x(i));
      }
    }
    const auto d2 = spectral_second_derivative(f, g);
    const auto dd = spectral_derivative(spectral_derivative(f, g), g);
    double scale = 0.0;
    for (const auto& z : oracle) scale = std::max(scale, std::abs(z));
    CHECK(testing::max_abs_diff(d2, oracle) < 1e-10 * scale);
    CHECK(testing::max_abs_diff(dd, oracle) < 1e-10 * scale);
  }

  TEST_CASE("integration by parts") {
    std::mt19937 rng(11);
    const Grid g(20.0, 256);
    for (int trial = 0; trial < 5; ++trial) {
      const Field a = testing::random_field(g, rng), b = testing::random_field(g, rng);
      const double lhs = inner_product_L2(spectral_derivative(a.u1, g), b.u1, g);
      const double rhs = -inner_product_L2(a.u1, spectral_derivative(b.u1, g), g);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }

  TEST_CASE("translation by a Fourier phase shift") {
    const Grid g(80.0, 512);
    ComplexVector f(512);
    for (std::size_t i = 0; i < 512; ++i) f[i] = sech(g.x(i));
    const auto t = translate(f, 1.5, g);
    for (std::size_t i = 0; i < 512; ++i) CHECK(std::abs(t[i] - sech(g.x(i) - 1.5)) < 1e-10);
  }

  TEST_CASE("wrap into the fundamental cell and mismatched grids") {
    const Grid g(10.0, 16);
    CHECK(g.wrap(6.0) == doctest::Approx(-4.0));
    CHECK(g.wrap(-5.0) == doctest::Approx(-5.0));
    CHECK(g.wrap(5.0) == doctest::Approx(-5.0));
    Field a(g), b(Grid(10.0, 32));
    CHECK_THROWS_AS(a += b, Error);
  }
}
