#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bsrd/clamp_window.hpp"
#include "bsrd/diffusion_law.hpp"
#include "bsrd/equilibrium.hpp"
#include "bsrd/kinetics.hpp"
#include "bsrd/log_mean.hpp"
#include "oracles.hpp"

using namespace bsrd;
using Catch::Approx;

TEST_CASE("log_mean special values", "[model][log_mean]") {
  CHECK(log_mean(4.0, 4.0) == 4.0);
  CHECK(log_mean(1.0, 0.0) == 0.0);
  CHECK(log_mean(0.0, 3.0) == 0.0);
  CHECK(log_mean(2.718281828459045, 1.0) == Approx(1.718281828459045).epsilon(1e-15));
  CHECK(log_mean(2.0, 1.0) == Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(log_mean(-1.0, 1.0), std::domain_error);
}

TEST_CASE("log_mean bounds, symmetry and homogeneity", "[model][log_mean][property]") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 20000; ++n) {
    const double a = oracle::log_uniform(rng, 1e-8, 1e8);
    const double b = oracle::log_uniform(rng, 1e-8, 1e8);
    const double t = oracle::log_uniform(rng, 1e-3, 1e3);
    const double lm = log_mean(a, b);
    CHECK(std::sqrt(a * b) <= lm);
    CHECK(lm <= 0.5 * (a + b));
    CHECK(log_mean(b, a) == lm);
    CHECK(log_mean(t * a, t * b) == Approx(t * lm).epsilon(1e-12));
  }
}

TEST_CASE("log_mean is continuous across the diagonal", "[model][log_mean]") {
  for (double a : {1e-6, 0.3, 1.0, 7.5, 1e9}) {
    for (double rel : {1e-14, 1e-12, 1e-10, 1e-9, 0.999e-8, 1.001e-8, 1e-7, 1e-5}) {
      for (double sign : {-1.0, 1.0}) {
        const double b = a * (1.0 + sign * rel);
        // Λ(a, a(1+e)) = a (1 + e/2 - e²/12 + ...)
        const double expected = a * (1.0 + sign * rel / 2.0 - rel * rel / 12.0);
        CHECK(log_mean(a, b) == Approx(expected).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("rate evaluations", "[model][kinetics]") {
  const Kinetics unit{1.0, 1.0, 1.0, 1.0};
  CHECK(rate(2.0, 1.0, unit) == 1.0);
  const Kinetics kin{2.0, 0.5, 2.0, 3.0};
  CHECK(rate(1.5, 0.7, kin) == Approx(4.157).epsilon(1e-14));
  CHECK(rate(-0.5, 1.0, kin) == 0.0);

  CHECK(safe_rate(-0.1, 1.0, kin) == 0.0);
  CHECK(safe_rate(1.0, 0.0, kin) == 0.0);
  CHECK(safe_rate(2.0, 1.0, unit) == 1.0);

  const Equilibrium eq = solve_equilibrium(kin, 3.0, 1.0, 1.0);
  CHECK(std::abs(rate(eq.u_star, eq.v_star, kin)) < 1e-14);
}

TEST_CASE("potential form of the rate", "[model][kinetics]") {
  const Kinetics unit{1.0, 1.0, 1.0, 1.0};
  const Equilibrium eq{1.0, 1.0, 2.0};
  CHECK(rate_potential_form(1.0, 1.0, unit, eq) == 0.0);
  CHECK(rate_potential_form(2.0, 1.0, unit, eq) == Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(rate_potential_form(0.0, 1.0, unit, eq), std::domain_error);

  const Kinetics kin{2.0, 0.5, 2.0, 3.0};
  const Equilibrium e2 = solve_equilibrium(kin, 4.0, 1.0, 2.0);
  CHECK(std::abs(rate_potential_form(e2.u_star, e2.v_star, kin, e2)) < 1e-14);
  CHECK(rate_potential_form(1.5, 0.7, kin, e2) == Approx(4.157).epsilon(1e-13));
}

TEST_CASE("rate identity holds for random positive data", "[model][kinetics][property]") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 20000; ++n) {
    const Kinetics kin{oracle::uniform(rng, 0.1, 2.0), oracle::log_uniform(rng, 0.1, 10.0),
                       oracle::uniform(rng, 1.0, 4.0), oracle::uniform(rng, 1.0, 4.0)};
    const Equilibrium eq = solve_equilibrium(kin, oracle::uniform(rng, 0.1, 100.0), oracle::uniform(rng, 0.1, 10.0),
                                             oracle::uniform(rng, 0.1, 10.0));
    const double u = oracle::log_uniform(rng, 1e-3, 2.0);
    const double v = oracle::log_uniform(rng, 1e-3, 2.0);
    const double r = rate(u, v, kin);
    CHECK(std::abs(r - rate_potential_form(u, v, kin, eq)) <= 1e-12 * std::max(1.0, std::abs(r)));
  }
}

TEST_CASE("clamp window from initial data", "[model][clamp]") {
  const Kinetics kin{1.0, 0.5, 2.0, 1.0};
  const Equilibrium eq{2.0, 8.0, 0.0};
  const std::vector<double> u0{1.0, 2.0, 3.0};
  const std::vector<double> v0{4.0, 8.0};
  const auto w = window_from_initial_data(u0, v0, kin, eq);
  // c_u = 0.5, C_u = 1.5, c_v = 0.5, C_v = 1
  CHECK(w.l == Approx(std::min(0.25, 0.5 * 0.5)));
  CHECK(w.L == Approx(2.25));
  CHECK_THROWS_AS(window_from_initial_data(std::vector<double>{0.0}, v0, kin, eq), std::invalid_argument);
}

TEST_CASE("clamp_state caps", "[model][clamp]") {
  const Kinetics kin{1.0, 1.0, 2.0, 3.0};
  const Equilibrium eq{1.5, 0.8, 0.0};
  const auto w = make_window(0.2, 3.0, kin, eq);

  const double inside = eq.u_star * std::pow(w.L, 1.0 / kin.alpha);  // (u/u*)^alpha = L
  CHECK(clamp_state(inside, eq.v_star, w).first == inside);
  CHECK(clamp_state(0.0, eq.v_star, w).first == Approx(eq.u_star * std::pow(0.1, 0.5)));
  const double big = eq.u_star * std::pow(4.0 * w.L, 1.0 / kin.alpha);
  CHECK(clamp_state(big, eq.v_star, w).first == Approx(eq.u_star * std::pow(6.0, 0.5)));
  CHECK(clamp_state(-3.0, -1.0, w).first == Approx(w.u_floor()));

  // Printed surface clamp uses alpha, the alternative beta.
  CHECK(clamp_state(1.0, 0.0, w).second == Approx(eq.v_star * std::pow(0.1, 1.0 / 2.0)));
  auto wb = w;
  wb.surface_exponent = SurfaceClampExponent::beta;
  CHECK(clamp_state(1.0, 0.0, wb).second == Approx(eq.v_star * std::pow(0.1, 1.0 / 3.0)));
  CHECK(clamp_state(1.0, 100.0, wb).second == Approx(eq.v_star * std::pow(6.0, 1.0 / 3.0)));
}

TEST_CASE("diffusion law evaluation", "[model][diffusion]") {
  const Kinetics unit{1.0, 1.0, 1.0, 1.0};
  const Equilibrium eq{1.0, 1.0, 2.0};
  const auto w = make_window(1e-3, 1e3, unit, eq);
  CHECK(eval_diffusion(DiffusionLaw::power(0.0), 0.7, std::nullopt, w) == 1.0);
  CHECK(eval_diffusion(DiffusionLaw::power(2.0), 3.0, std::nullopt, w) == 9.0);
  CHECK(eval_diffusion(DiffusionLaw::exponential(0.5), 2.0, std::nullopt, w) == Approx(std::exp(1.0)));
  CHECK(eval_diffusion(DiffusionLaw::constant(2.5), 2.0, std::nullopt, w) == 2.5);
  CHECK(eval_diffusion(DiffusionLaw::surface_cross(1.0, 1.0), 1.0, 1.0, w) == 0.5);
  CHECK_THROWS_AS(DiffusionLaw::constant(0.0), std::invalid_argument);
  // Outside the window the argument is capped: u = 1e6 evaluates at 2L.
  CHECK(eval_diffusion(DiffusionLaw::power(1.0), 1e6, std::nullopt, w) == Approx(2e3));
}

TEST_CASE("law partials agree with finite differences", "[model][diffusion]") {
  const Kinetics kin{1.0, 0.7, 2.0, 1.5};
  const Equilibrium eq{1.2, 0.9, 0.0};
  const auto w = make_window(0.1, 5.0, kin, eq);
  for (const auto& law : {DiffusionLaw::power(1.5), DiffusionLaw::power(-0.5), DiffusionLaw::exponential(0.8),
                          DiffusionLaw::surface_cross(kin.alpha, kin.beta)}) {
    const double u = 1.1, v = 1.3, h = 1e-6;
    const auto p = surface_diffusion_partials(law, u, v, w);
    const double dv = (eval_surface_diffusion(law, u, v + h, w) - eval_surface_diffusion(law, u, v - h, w)) / (2 * h);
    const double du = (eval_surface_diffusion(law, u + h, v, w) - eval_surface_diffusion(law, u - h, v, w)) / (2 * h);
    CHECK(p.d_species == Approx(dv).epsilon(1e-7).margin(1e-10));
    CHECK(p.d_trace == Approx(du).epsilon(1e-7).margin(1e-10));
  }
}

TEST_CASE("clamped coefficients stay inside precomputed bounds", "[model][diffusion][property]") {
  std::mt19937_64 rng(5);
  const Kinetics kin{1.0, 0.5, 2.0, 1.0};
  const Equilibrium eq{2.0, 8.0, 0.0};
  const auto w = make_window(0.3, 2.5, kin, eq);
  for (const auto& law : {DiffusionLaw::power(1.0), DiffusionLaw::power(-2.0), DiffusionLaw::exponential(3.0),
                          DiffusionLaw::exponential(-1.0), DiffusionLaw::constant(0.4)}) {
    const auto bounds = bulk_coefficient_bounds(law, w);
    REQUIRE(bounds.lower > 0.0);
    for (int n = 0; n < 20000; ++n) {
      const double u = oracle::uniform(rng, -10.0, 50.0);
      const double mu = eval_bulk_diffusion(law, u, w);
      CHECK((bounds.lower <= mu && mu <= bounds.upper));
    }
  }
  const auto cross = DiffusionLaw::surface_cross(kin.alpha, kin.beta);
  const auto sb = surface_coefficient_bounds(cross, w);
  REQUIRE(sb.lower > 0.0);
  for (int n = 0; n < 20000; ++n) {
    const double mu = eval_surface_diffusion(cross, oracle::uniform(rng, -5.0, 20.0), oracle::uniform(rng, -5.0, 40.0), w);
    CHECK((sb.lower <= mu && mu <= sb.upper));
  }
}

TEST_CASE("equilibrium closed-form cases", "[model][equilibrium]") {
  const auto e1 = solve_equilibrium({1.0, 1.0, 1.0, 1.0}, 2.0, 1.0, 1.0);
  CHECK(e1.u_star == Approx(1.0).epsilon(1e-14));
  CHECK(e1.v_star == Approx(1.0).epsilon(1e-14));
  const auto e2 = solve_equilibrium({1.0, 1.0, 2.0, 1.0}, 3.0, 1.0, 1.0);
  CHECK(e2.u_star == Approx(1.0).epsilon(1e-14));
  CHECK(e2.v_star == Approx(1.0).epsilon(1e-14));
  CHECK(e2.mass == 3.0);
}

TEST_CASE("equilibrium errors", "[model][equilibrium]") {
  const Kinetics kin{};
  CHECK_THROWS_AS(solve_equilibrium(kin, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_equilibrium(kin, -1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_equilibrium(kin, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_equilibrium({1.0, 1.0, 0.5, 1.0}, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("equilibrium matches the bisection oracle and is bracket independent", "[model][equilibrium][property]") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 300; ++n) {
    const Kinetics kin{1.0, oracle::uniform(rng, 0.1, 10.0), oracle::uniform(rng, 1.0, 4.0), oracle::uniform(rng, 1.0, 4.0)};
    const double m = oracle::uniform(rng, 1e-3, 100.0);
    const double om = oracle::uniform(rng, 0.1, 10.0), ga = oracle::uniform(rng, 0.1, 10.0);
    const auto eq = solve_equilibrium(kin, m, om, ga);
    const auto ref = oracle::bisect_equilibrium(kin.alpha, kin.beta, kin.kappa, m, om, ga);
    CHECK(eq.u_star == Approx(ref.u).epsilon(1e-10));
    CHECK(eq.v_star == Approx(ref.v).epsilon(1e-10));
    CHECK(std::abs(kin.beta * om * eq.u_star + kin.alpha * ga * eq.v_star - m) <= 1e-12 * m);
    const double a = std::pow(eq.u_star, kin.alpha), b = kin.kappa * std::pow(eq.v_star, kin.beta);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(a, b));

    const double vmax = m / (kin.alpha * ga);
    const auto alt = solve_equilibrium_bracketed(kin, m, om, ga, 0.5 * eq.v_star * 1e-3, 3.0 * vmax);
    CHECK(std::abs(alt.v_star - eq.v_star) <= 1e-10 * eq.v_star);
  }
}
