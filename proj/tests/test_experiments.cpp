#include <doctest.h>

#include <cmath>

#include "nlkg/errors.hpp"
#include "nlkg/experiments.hpp"
#include "nlkg/integrator.hpp"

using namespace nlkg;

namespace {

const ModelParams kCubic{1.0, 3.0, 1};

MultiSolitonConfig pair_config() {
  MultiSolitonConfig c;
  c.model = kCubic;
  c.solitons = {{kCubic, 0.8, 0.0, -0.4, 0.0}, {kCubic, 0.8, 0.0, 0.4, 0.0}};
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("log-linear fit recovers an exact exponential") {
    RealVector t, y;
    for (int k = 0; k < 10; ++k) {
      t.push_back(k * 0.5);
      y.push_back(3.0 * std::exp(-0.7 * k * 0.5));
    }
    const LogFit f = fit_log_linear(t, y);
    CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.slope_error < 1e-12);
    CHECK(f.samples == 10);
    const RealVector few{1.0, 2.0}, vals{1.0, 0.5};
    CHECK_THROWS_AS(fit_log_linear(few, vals), Error);
  }

  TEST_CASE("rate constants of the symmetric pair") {
    const MultiSolitonConfig c = pair_config();
    CHECK(c.v_star() == doctest::Approx(0.8));
    CHECK(c.omega_star() == doctest::Approx(0.8));
    CHECK(c.alpha_tilde() == 1.0);
    CHECK(c.reference_rate() == doctest::Approx(0.6 * 0.8 / 24.0));
    CHECK(c.rate_ceiling() == doctest::Approx(0.6 * 0.8 / 24.0));
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("validation collects every problem") {
    MultiSolitonConfig c = pair_config();
    c.solitons[1].v = -0.4;
    c.solitons[0].omega = 0.6;
    c.T0 = 50.0;
    try {
      c.validate();
      FAIL("expected a configuration error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
      const std::string what = e.what();
      CHECK(what.find("distinct") != std::string::npos);
      CHECK(what.find("stab") != std::string::npos);
      CHECK(what.find("T0") != std::string::npos);
    }
  }

  TEST_CASE("single soliton: the backward construction is exact") {
    MultiSolitonConfig c;
    c.model = kCubic;
    c.solitons = {{kCubic, 0.8, 0.0, 0.3, 0.0}};
    c.Tn = 14.0;
    c.T0 = 10.0;
    c.length = 100.0;
    c.points = 512;
    const DecayReport rep = run_backward_construction(c);
    REQUIRE(rep.trajectory.track.has_value());
    CHECK(rep.errors.back() < 1e-13);
    for (double e : rep.errors) CHECK(e < 1e-7);
    CHECK(std::isnan(rep.trajectory.tube_exit_time));
  }

  TEST_CASE("backward then forward returns to the final data") {
    MultiSolitonConfig c = pair_config();
    c.Tn = 14.0;
    c.T0 = 10.0;
    c.track_modulation = false;
    const DecayReport rep = run_backward_construction(c);
    REQUIRE(rep.final_field.has_value());
    const Field again = evolve(*rep.final_field, c.T0, c.Tn, c.integrator(), c.model);
    const Field target = sample_solitons(c.solitons, c.Tn, c.grid());
    CHECK(norm_H1L2(again - target) < 1e-9 * norm_H1L2(target));
  }

  TEST_CASE("forward stability with zero perturbation") {
    MultiSolitonConfig c = pair_config();
    c.solitons[0].x0 = -15.0;
    c.solitons[1].x0 = 15.0;
    c.T0 = 10.0;
    c.Tn = 14.0;
    c.track_modulation = false;
    const Field bump = bump_perturbation(c.grid(), 0.0, 3);
    CHECK(norm_H1L2(bump) == doctest::Approx(1.0).epsilon(1e-12));
    const Field bump2 = bump_perturbation(c.grid(), 0.0, 3);
    CHECK(bump.u1 == bump2.u1);
    const DecayReport rep = run_forward_stability(c, bump, 0.0);
    CHECK(rep.errors.front() < 1e-13);
    // the pair interacts only through exponentially small tails
    for (double e : rep.errors) CHECK(e < 1e-4);
  }

  TEST_CASE("interaction integrals") {
    const MultiSolitonConfig c = pair_config();
    const RealVector early{0.5};
    CHECK_THROWS_AS(measure_interactions(c, early), Error);
    MultiSolitonConfig lone = c;
    lone.solitons.pop_back();
    const RealVector ok{16.0, 18.0};
    CHECK_THROWS_AS(measure_interactions(lone, ok), Error);

    MultiSolitonConfig three = c;
    three.solitons.push_back({kCubic, 0.85, 0.0, 0.0, 0.0});
    three.solitons[0].v = -0.5;
    three.solitons[1].v = 0.5;
    RealVector times;
    for (int k = 0; k <= 10; ++k) times.push_back(16.0 + 2.0 * k);
    const InteractionReport rep = measure_interactions(three, times);
    REQUIRE(rep.pairs.size() == 3);
    for (const auto& pair : rep.pairs) {
      CHECK(pair.product_fit.slope < 0.0);
      CHECK(pair.cutoff_fit.slope < 0.0);
    }

    // symmetric in (j, k): swapping the solitons leaves the products unchanged
    MultiSolitonConfig swapped = c;
    std::swap(swapped.solitons[0], swapped.solitons[1]);
    const RealVector t{16.0};
    const auto a = measure_interactions(c, t), b = measure_interactions(swapped, t);
    CHECK(a.pairs[0].product[0] == doctest::Approx(b.pairs[0].product[0]).epsilon(1e-13));
    CHECK(a.pairs[0].grad_grad[0] == doctest::Approx(b.pairs[0].grad_grad[0]).epsilon(1e-13));
  }

  TEST_CASE("single-soliton coercivity matches the spectrum module") {
    CHECK(single_soliton_coercivity(kCubic, 0.8, 0.0, 80.0, 256) > 0.05);
  }
}
