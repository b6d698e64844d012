#include <doctest.h>

#include <cmath>

#include "nlkg/errors.hpp"
#include "nlkg/functionals.hpp"
#include "nlkg/profiles.hpp"
#include "nlkg/spectrum.hpp"

using namespace nlkg;

namespace {

const ModelParams kCubic{1.0, 3.0, 1};

// Independent oracle: (1/gamma) d/domega (omega |phi_omega|^2) with
// |phi_omega|^2 = 4 sqrt(1 - omega^2) for p = 3, d = 1, m = 1.
double cubic_slope(double omega) {
  return 4.0 * (1.0 - 2.0 * omega * omega) / std::sqrt(1.0 - omega * omega);
}

}  // namespace

TEST_SUITE("linearized_spectrum") {
  TEST_CASE("symmetry directions are in the kernel") {
    const Grid g(160.0, 2048);
    for (double v : {0.0, 0.5}) {
      const SolitonParams sp{kCubic, 0.8, 0.0, v, 0.0};
      const ActionParams ap = ActionParams::for_soliton(sp);
      const Field phi = soliton_field(kCubic, 0.8, v, 0.0, 0.0, g);
      CHECK(norm_L2L2(apply_second_variation(phi, times_i(phi), ap)) < 1e-7);
      CHECK(norm_L2L2(apply_second_variation(phi, gradient(phi), ap)) < 1e-7);
    }
  }

  TEST_CASE("second variation matches differences of the gradient") {
    const Grid g(60.0, 256);
    const SolitonParams sp{kCubic, 0.8, 0.0, 0.3, 0.0};
    const ActionParams ap = ActionParams::for_soliton(sp);
    const Field phi = soliton_field(kCubic, 0.8, 0.3, 0.0, 0.0, g);
    Field z(g);
    for (std::size_t i = 0; i < g.points(); ++i) {
      const double x = g.x(i);
      z.u1[i] = Complex(std::exp(-x * x / 4.0), 0.3 * x * std::exp(-x * x / 3.0));
      z.u2[i] = Complex(0.2, -0.5) * std::exp(-(x - 1.0) * (x - 1.0));
    }
    const double h = 1e-5;
    Field plus = phi, minus = phi;
    axpy(h, z, plus);
    axpy(-h, z, minus);
    Field fd = action_gradient(plus, ap) - action_gradient(minus, ap);
    fd *= 1.0 / (2.0 * h);
    CHECK(norm_L2L2(fd - apply_second_variation(phi, z, ap)) < 1e-7);
  }

  TEST_CASE("Morse index 1 and kernel dimension 2 across the window") {
    for (double omega : {0.75, 0.8, 0.9, 0.95}) {
      for (double v : {0.0, 0.3, 0.6}) {
        CAPTURE(omega);
        CAPTURE(v);
        const Grid g(recommended_length(kCubic, omega), 256);
        const SolitonParams sp{kCubic, omega, 0.0, v, 0.0};
        const ActionParams ap = ActionParams::for_soliton(sp);
        const Field phi = soliton_field(kCubic, omega, v, 0.0, 0.0, g);
        const RealizedOperator op = assemble_second_variation(phi, ap);
        CHECK(op.asymmetry < 1e-9 * op.matrix.cwiseAbs().maxCoeff());
        const SpectrumReport rep = spectrum_report(op, phi, ap);
        CHECK(rep.negative_count == 1);
        CHECK(rep.kernel_dimension == 2);
        CHECK(std::abs(rep.kernel_rayleigh_phase) < 1e-6 * rep.spectral_radius);
        CHECK(std::abs(rep.kernel_rayleigh_translation) < 1e-6 * rep.spectral_radius);
        CHECK(rep.coercivity_delta > 0.0);
      }
    }
  }

  TEST_CASE("coercivity regression value") {
    // recorded from the first converged run (m=1, p=3, omega=0.8, v=0, L=80, N=512)
    const Grid g(80.0, 512);
    const SolitonParams sp{kCubic, 0.8, 0.0, 0.0, 0.0};
    const ActionParams ap = ActionParams::for_soliton(sp);
    const Field phi = soliton_field(kCubic, 0.8, 0.0, 0.0, 0.0, g);
    const SpectrumReport rep = spectrum_report(assemble_second_variation(phi, ap), phi, ap);
    CHECK(rep.coercivity_delta == doctest::Approx(0.09055896).epsilon(1e-6));
    CHECK(rep.negative_eigenvalue == doctest::Approx(-0.79629).epsilon(1e-4));
  }

  TEST_CASE("free operator is positive") {
    const Grid g(40.0, 128);
    for (double v : {0.0, 0.6}) {
      const SolitonParams sp{kCubic, 0.8, 0.0, v, 0.0};
      const ActionParams ap = ActionParams::for_soliton(sp);
      CHECK(smallest_eigenvalue(assemble_free_operator(g, ap)) > 0.0);
    }
  }

  TEST_CASE("slope quantity and the omega-derivative identity") {
    const Grid g(120.0, 1024);
    for (double omega : {0.6, std::sqrt(0.5), 0.8}) {
      CAPTURE(omega);
      const SolitonParams sp{kCubic, omega, 0.0, 0.0, 0.0};
      const ActionParams ap = ActionParams::for_soliton(sp);
      const auto family = [&](double w) { return soliton_field(kCubic, w, 0.0, 0.0, 0.0, g); };
      const SlopeResult s = slope_test(family, ap, omega, 1.0);
      CHECK(s.slope == doctest::Approx(cubic_slope(omega)).epsilon(1e-4).scale(1.0));
      CHECK(analytic_slope(kCubic, omega, 1.0) == doctest::Approx(cubic_slope(omega)).scale(1.0));
      CHECK(s.miracle_residual < 1e-5);
    }
    CHECK(cubic_slope(0.8) == doctest::Approx(-28.0 / 15.0));
    const auto family = [&](double w) { return soliton_field(kCubic, w, 0.0, 0.0, 0.0, g); };
    CHECK_THROWS_AS(slope_test(family, ActionParams{0.99995, 0.0, kCubic}, 0.99995, 1.0), Error);
  }

  TEST_CASE("flatten round trip") {
    const Grid g(10.0, 16);
    Field w(g);
    for (std::size_t i = 0; i < 16; ++i) {
      w.u1[i] = Complex(i, -2.0 * i);
      w.u2[i] = Complex(0.5 * i, 3.0);
    }
    const Field back = unflatten(flatten(w), g);
    CHECK(back.u1 == w.u1);
    CHECK(back.u2 == w.u2);
  }
}
