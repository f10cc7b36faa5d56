#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "emforms/em_forms.hpp"
#include "emforms/errors.hpp"
#include "emforms/geometry.hpp"
#include "emforms/scenarios.hpp"
#include "oracles.hpp"

using namespace emforms;

TEST_SUITE("geometry") {
  TEST_CASE("interior product contracts the first slot") {
    // V = time direction against omega_f(E = x_hat): picks out the E row.
    const TwoFormMatrix w = omega_f({{1, 0, 0}, {0, 0, 0}});
    const OneForm a = interior_product({1.0, {0, 0, 0}}, w);
    CHECK(a.a[0] == 0.0);
    CHECK(a.a[1] == 1.0);
    CHECK(a.a[2] == 0.0);
    CHECK(a.a[3] == 0.0);
  }

  TEST_CASE("interior product annihilates a null wave along its ray") {
    // E = x, B = y is null; V = (1, z) is its characteristic direction.
    const TwoFormMatrix w = omega_f({{1, 0, 0}, {0, 1, 0}});
    const OneForm a = interior_product({1.0, {0, 0, 1}}, w);
    for (int mu = 0; mu < 4; ++mu) CHECK(std::abs(a.a[mu]) < 1e-15);
  }

  TEST_CASE("interior product with the zero vector vanishes") {
    std::mt19937_64 rng(11);
    const OneForm a = interior_product({0.0, {0, 0, 0}}, oracles::random_two_form(rng));
    for (int mu = 0; mu < 4; ++mu) CHECK(a.a[mu] == 0.0);
  }

  TEST_CASE("V . i_V omega = 0 and bilinearity hold on random inputs") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
      const TwoFormMatrix w = oracles::random_two_form(rng);
      const FourVector v{oracles::urand_pm(rng), oracles::random_vec(rng)};
      const FourVector u{oracles::urand_pm(rng), oracles::random_vec(rng)};
      const OneForm av = interior_product(v, w);

      double vav = 0.0;
      for (int mu = 0; mu < 4; ++mu) vav += v[mu] * av.a[mu];
      CHECK(std::abs(vav) < 1e-14);

      // i_{u+v} = i_u + i_v, entrywise.
      FourVector uv{u.v0 + v.v0, u.v + v.v};
      const OneForm auv = interior_product(uv, w);
      const OneForm au = interior_product(u, w);
      for (int mu = 0; mu < 4; ++mu)
        CHECK(auv.a[mu] == doctest::Approx(au.a[mu] + av.a[mu]).epsilon(1e-12));
    }
  }

  TEST_CASE("wedge pairing against frozen field values") {
    const Medium vac;            // eta = 1
    const Medium dense(2.0, 1.0);  // eta = 2

    // Null field: the pairing vanishes identically.
    const EMFieldSample null_wave{{1, 0, 0}, {0, 1, 0}};
    CHECK(std::abs(wedge_22(omega_f_star(null_wave, vac), omega_f(null_wave))) < 1e-15);

    // Pure E: wedge = eta E^2 - B^2 = 2.
    const EMFieldSample pure_e{{1, 0, 0}, {0, 0, 0}};
    CHECK(wedge_22(omega_f_star(pure_e, dense), omega_f(pure_e)) == doctest::Approx(2.0));

    // omega_f ^ omega_f = 2 Pf dq0..dq3 = -2 E.B for parallel unit fields.
    const EMFieldSample parallel{{1, 0, 0}, {1, 0, 0}};
    const TwoFormMatrix w = omega_f(parallel);
    CHECK(wedge_22(w, w) == doctest::Approx(-2.0));
    CHECK(wedge_22(w, w) == doctest::Approx(2.0 * pfaffian_2form(w)));
  }

  TEST_CASE("wedge pairing matches the epsilon-sum oracle and is symmetric") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 1000; ++trial) {
      const TwoFormMatrix a = oracles::random_two_form(rng);
      const TwoFormMatrix b = oracles::random_two_form(rng);
      const double w = wedge_22(a, b);
      CHECK(w == doctest::Approx(oracles::wedge_brute(a, b)).epsilon(1e-12));
      CHECK(w == doctest::Approx(wedge_22(b, a)).epsilon(1e-12));
    }
  }

  TEST_CASE("determinant and Pfaffian frozen values") {
    // Parallel E, B with |E| = 1, |B| = 2: E.B = 2, det = (E.B)^2 = 4.
    const EMFieldSample f{{1, 0, 0}, {2, 0, 0}};
    CHECK(det_2form(omega_f(f)) == doctest::Approx(4.0));
    CHECK(pfaffian_2form(omega_f(f)) == doctest::Approx(-2.0));

    // Null field: degenerate, det = 0.
    CHECK(std::abs(det_2form(omega_f({{1, 0, 0}, {0, 1, 0}}))) < 1e-15);

    // Dual form at eta = 3 with E = B = x: Pf(omega_f*) = eta E.B = 3, so
    // det = (eta E.B)^2 = 9. Cross-checked against the Leibniz oracle because
    // the square is easy to get wrong by one factor of eta.
    const Medium m(3.0, 1.0);
    const TwoFormMatrix ws = omega_f_star({{1, 0, 0}, {1, 0, 0}}, m);
    CHECK(det_2form(ws) == doctest::Approx(9.0));
    CHECK(oracles::det_brute(ws) == doctest::Approx(9.0));
    CHECK(oracles::pfaffian_brute(ws) == doctest::Approx(3.0));
  }

  TEST_CASE("det = Pf^2 against brute-force oracles on random forms") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 1000; ++trial) {
      const TwoFormMatrix w = oracles::random_two_form(rng);
      const double pf = pfaffian_2form(w);
      const double det = det_2form(w);
      CHECK(pf == doctest::Approx(oracles::pfaffian_brute(w)).epsilon(1e-12));
      CHECK(det == doctest::Approx(oracles::det_brute(w)).epsilon(1e-11));
      CHECK(det == doctest::Approx(pf * pf).epsilon(1e-11));
    }
  }

  TEST_CASE("exterior derivative of a constant 2-form vanishes exactly") {
    const TwoFormSampler f = [](const SpacetimeEvent&) {
      return omega_f({{0.3, -0.7, 0.2}, {0.1, 0.9, -0.4}});
    };
    const ThreeForm d = exterior_derivative_2form(f, {0.2, {0.1, -0.3, 0.5}}, {1e-3});
    CHECK(d.max_abs() == 0.0);
  }

  TEST_CASE("closed plane wave has vanishing derivative") {
    // For fields of (q3 - q0) alone the two stencil legs reuse the same
    // samples, so the residual cancels bitwise, not just to O(h^2).
    const TwoFormSampler f = [](const SpacetimeEvent& x) {
      const double ph = x.q.z - x.q0;
      return omega_f({{std::cos(ph), 0, 0}, {0, std::cos(ph), 0}});
    };
    const double r = exterior_derivative_2form(f, {0.4, {0.0, 0.0, 0.3}}, {1e-2}).max_abs();
    CHECK(r < 1e-13);
  }

  TEST_CASE("exterior derivative converges at order 2 to a known value") {
    // Manufactured non-closed form: m01 = sin(q2), m23 = cos(q0) gives
    // exactly d = (0, t) with t = (-sin(q0), 0, cos(q2)).
    const TwoFormSampler f = [](const SpacetimeEvent& x) {
      TwoFormMatrix w;
      w.set(0, 1, std::sin(x.q.y));
      w.set(2, 3, std::cos(x.q0));
      return w;
    };
    const SpacetimeEvent x{0.4, {0.1, -0.3, 0.2}};
    const ThreeForm exact{0.0, {-std::sin(x.q0), 0.0, std::cos(x.q.y)}};
    const double r1 = (exterior_derivative_2form(f, x, {1e-2}) - exact).max_abs();
    const double r2 = (exterior_derivative_2form(f, x, {5e-3}) - exact).max_abs();
    CHECK(oracles::order_from(r1, r2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(r2 < 1e-5);
  }

  TEST_CASE("d o d = 0: quartic potentials give a clean order-2 residual") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 3; ++trial) {
      const oracles::PolyPotential pot = oracles::random_poly_potential(rng, 4);
      const EMField field = oracles::field_of(pot);
      const TwoFormSampler w = [&field](const SpacetimeEvent& x) {
        return omega_f(field.sample(x));
      };
      const SpacetimeEvent x{0.3, {0.2, -0.4, 0.6}};
      const double r1 = exterior_derivative_2form(w, x, {2e-2}).max_abs();
      const double r2 = exterior_derivative_2form(w, x, {1e-2}).max_abs();
      CHECK(oracles::order_from(r1, r2) == doctest::Approx(2.0).epsilon(0.1));
    }
  }

  TEST_CASE("d o d = 0 holds at order 2 through the catalog potentials") {
    ScenarioSpec sp;
    sp.field.kind = FieldKind::FromPotentials;
    sp.seed = 7;
    const BuiltScenario built = build(sp);
    const TwoFormSampler w = [&built](const SpacetimeEvent& x) {
      return omega_f(built.field.sample(x));
    };
    const SpacetimeEvent x{0.1, {0.2, 0.3, -0.1}};
    const double r1 = exterior_derivative_2form(w, x, {2e-2}).max_abs();
    const double r2 = exterior_derivative_2form(w, x, {1e-2}).max_abs();
    CHECK(oracles::order_from(r1, r2) == doctest::Approx(2.0).epsilon(0.1));
    // and the residual is already tiny at practical step sizes
    CHECK(exterior_derivative_2form(w, x, {1e-3}).max_abs() < 1e-4);
  }

  TEST_CASE("3-form derivative: frozen values and the continuity pair") {
    // s = q0 linear: d/dq0 is differenced exactly.
    const ThreeFormSampler lin = [](const SpacetimeEvent& x) { return ThreeForm{x.q0, {}}; };
    CHECK(exterior_derivative_3form(lin, {0.7, {1, 2, 3}}, {1e-4}) == doctest::Approx(1.0));

    // Static charge, no current: conserved trivially.
    const ThreeFormSampler stat = [](const SpacetimeEvent& x) {
      return current_3form({std::sin(x.q.x), {}}, 1.0);
    };
    CHECK(std::abs(exterior_derivative_3form(stat, {0.0, {0.4, 0, 0}}, {1e-4})) < 1e-12);

    // rho = cos(q1 - q0), j = (c cos(q1 - q0), 0, 0) satisfies the continuity
    // equation, so the dq0 ^ dV coefficient of dJ vanishes.
    const double c = 2.0;
    const ThreeFormSampler wave = [c](const SpacetimeEvent& x) {
      const double u = std::cos(x.q.x - x.q0);
      return current_3form({u, {c * u, 0, 0}}, c);
    };
    CHECK(std::abs(exterior_derivative_3form(wave, {0.3, {0.9, 0, 0}}, {1e-4})) < 1e-7);
  }

  TEST_CASE("current 3-form slot layout") {
    const ThreeForm a = current_3form({2.0, {0, 0, 0}}, 3.0);
    CHECK(a.s == 2.0);
    CHECK(norm(a.t) == 0.0);

    const ThreeForm b = current_3form({0.0, {0, 0, 5}}, 2.0);
    CHECK(b.s == 0.0);
    CHECK(b.t.x == 0.0);
    CHECK(b.t.y == 0.0);
    CHECK(b.t.z == doctest::Approx(-2.5));
  }

  TEST_CASE("non-finite samples are rejected") {
    const TwoFormSampler bad = [](const SpacetimeEvent&) {
      TwoFormMatrix w;
      w.set(0, 1, std::numeric_limits<double>::quiet_NaN());
      return w;
    };
    CHECK_THROWS_AS(exterior_derivative_2form(bad, {}, {1e-4}), NonFinite);
  }
}
