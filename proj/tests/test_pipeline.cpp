#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "wsp/common.hpp"
#include "wsp/manifold.hpp"
#include "wsp/pipeline.hpp"
#include "wsp/seminorm.hpp"

using namespace wsp;

namespace {

GridField vortex_field(int n) {
  Grid g{2, n, 1.0};
  GridField u(g, 2);
  double x[2];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_position(i, x);
    const double r = std::hypot(x[0], x[1]);
    u.at(i)[0] = x[0] / r;
    u.at(i)[1] = x[1] / r;
  }
  return u;
}

// smooth circle-valued field with winding number zero
GridField phase_field(int n) {
  Grid g{2, n, 1.0};
  GridField u(g, 2);
  double x[2];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_position(i, x);
    const double psi = 0.8 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
    u.at(i)[0] = std::cos(psi);
    u.at(i)[1] = std::sin(psi);
  }
  return u;
}

GridField constant_circle(int n, double c0, double c1) {
  Grid g{2, n, 1.0};
  GridField u(g, 2);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    u.at(i)[0] = c0;
    u.at(i)[1] = c1;
  }
  return u;
}

}  // namespace

TEST_CASE("resolve_config fills defaults and enforces the exponent window") {
  const SobolevParams half(0.5, 2.0);  // sp = 1
  HighRegimeConfig cfg;
  const HighRegimeConfig r = resolve_config(cfg, half);
  CHECK(r.q == 1.5);
  CHECK(r.r == doctest::Approx(3.0).epsilon(1e-12));

  const SobolevParams sixty(0.6, 2.0);  // sp = 1.2
  const HighRegimeConfig r2 = resolve_config(cfg, sixty);
  CHECK(r2.q == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(r2.r == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(std::abs(1.0 / 2.0 - (1.0 - 0.6) / r2.r - 0.6 / r2.q) < 1e-12);

  HighRegimeConfig manual = cfg;
  manual.q = 1.5;
  manual.r = 3.0;
  CHECK_NOTHROW(resolve_config(manual, half));
  manual.r = 3.1;  // violates the relation
  CHECK_THROWS_AS(resolve_config(manual, half), Error);
  manual.q = 1.0;  // q == sp leaves r infinite
  manual.r = 0.0;
  CHECK_THROWS_AS(resolve_config(manual, half), Error);
  manual.q = 2.5;  // outside [sp, floor(sp)+1)
  CHECK_THROWS_AS(resolve_config(manual, half), Error);

  HighRegimeConfig bad = cfg;
  bad.n_shifts = 8;
  CHECK_THROWS_AS(resolve_config(bad, half), Error);
  bad = cfg;
  bad.gamma = 0.1;  // < t
  CHECK_THROWS_AS(resolve_config(bad, half), Error);
  bad = cfg;
  bad.t = 0.0;
  CHECK_THROWS_AS(resolve_config(bad, half), Error);

  CHECK_THROWS_AS(resolve_config(cfg, SobolevParams(0.4, 2.0)), RegimeError);
}

TEST_CASE("approximate_high on a constant field returns it unchanged") {
  const GridField u = constant_circle(16, 0.6, -0.8);
  const SobolevParams params(0.5, 2.0);
  HighRegimeConfig cfg;
  cfg.n_shifts = 16;
  const HighResult res = approximate_high(u, ManifoldTarget::circle(), cfg, params);
  CHECK(res.field.values == u.values);  // the zero shift is admissible and least
  CHECK(res.report.d == 0.0);
  CHECK(res.report.t1 == 0.0);
  CHECK(res.report.t2 == 0.0);
  CHECK(res.report.t3 == 0.0);
  REQUIRE(res.report.xi.size() == 2);
  CHECK(res.report.xi[0] == 0.0);
  CHECK(res.report.xi[1] == 0.0);
  CHECK(res.report.score_min == 0.0);
  CHECK(res.report.shifts_sampled == 17);
}

TEST_CASE("approximate_high vortex: triangle bound, unit output, winding") {
  const GridField u = vortex_field(32);
  const SobolevParams params(0.6, 2.0);
  HighRegimeConfig cfg;
  cfg.t = 0.125;
  cfg.gamma = 0.125;
  cfg.n_shifts = 16;
  cfg.seed = 7;
  const HighResult res = approximate_high(u, ManifoldTarget::circle(), cfg, params);
  CHECK(res.report.shifts_accepted >= 1);
  CHECK(res.report.d > 0.0);
  CHECK(res.report.d <= res.report.t1 + res.report.t2 + res.report.t3 + 1e-9);
  CHECK(res.report.unit_defect <= 1e-12);
  REQUIRE(res.report.winding_in.has_value());
  REQUIRE(res.report.winding_out.has_value());
  CHECK(*res.report.winding_in == 1);
  CHECK(*res.report.winding_out == 1);
  CHECK(res.report.score_min <= res.report.score_max);
  CHECK(res.report.t1 >= res.report.score_min);  // t1 is the chosen shift's score
  CHECK(res.report.t1 <= res.report.score_max);
  REQUIRE(res.report.xi.size() == 2);  // zero clears the circle by alpha margin
  CHECK(res.report.xi[0] == 0.0);
  CHECK(res.report.xi[1] == 0.0);
  CHECK(res.report.t3 <= 1e-12);  // kappa_0 is the identity on circle values

  SUBCASE("bitwise reproducible, worker count irrelevant") {
    const HighResult again = approximate_high(u, ManifoldTarget::circle(), cfg, params);
    CHECK(again.field.values == res.field.values);
    CHECK(again.report.d == res.report.d);
    CHECK(again.report.xi == res.report.xi);
    const HighResult wide = approximate_high(u, ManifoldTarget::circle(), cfg, params, 4);
    CHECK(wide.field.values == res.field.values);
    CHECK(wide.report.d == res.report.d);
    CHECK(wide.report.t2 == res.report.t2);
  }
}

TEST_CASE("the retraction term shrinks as the shift shrinks") {
  const GridField u = vortex_field(32);
  const SobolevParams params(0.6, 2.0);
  const ManifoldTarget target = ManifoldTarget::circle();
  double xi[2] = {0.08, 0.05};  // inside B_alpha, alpha = 1/8
  double prev = 1e300;
  for (int k = 0; k < 3; ++k) {
    Retraction kappa(target, xi);
    const GridField ku = compose_field(
        u, [&](const double* in, double* o) { kappa.apply(in, o); }, 1);
    const double t3 = wsp_norm_parts(subtract(ku, u), params, 1).full();
    CHECK(t3 > 0.0);
    CHECK(t3 < prev);
    prev = t3;
    xi[0] *= 0.5;
    xi[1] *= 0.5;
  }
}

TEST_CASE("the plateau mismatch term decays along the mollification sweep") {
  const GridField u = vortex_field(32);
  const SobolevParams params(0.6, 2.0);
  HighRegimeConfig cfg;
  cfg.n_shifts = 16;
  cfg.seed = 7;
  double prev = 1e300;
  for (const double t : {0.5, 0.25, 0.125}) {
    cfg.t = t;
    cfg.gamma = t;
    const HighResult res = approximate_high(u, ManifoldTarget::circle(), cfg, params);
    CHECK(res.report.t2 < prev);
    prev = res.report.t2;
  }
}

TEST_CASE("approximate_high rejects every shift when clearance swallows the ball") {
  const GridField u = vortex_field(16);
  const SobolevParams params(0.6, 2.0);
  HighRegimeConfig cfg;
  cfg.t = 0.25;
  cfg.gamma = 0.25;
  cfg.n_shifts = 16;
  cfg.eps_sing = 3.0;  // larger than any value-to-shift distance
  CHECK_THROWS_AS(approximate_high(u, ManifoldTarget::circle(), cfg, params),
                  SingularityError);
}

TEST_CASE("approximate_high gates regime, arity, and manifold membership") {
  const SobolevParams low(0.4, 2.0);
  HighRegimeConfig cfg;
  CHECK_THROWS_AS(approximate_high(vortex_field(16), ManifoldTarget::circle(), cfg, low),
                  RegimeError);

  const SobolevParams params(0.5, 2.0);
  CHECK_THROWS_AS(approximate_high(vortex_field(16), ManifoldTarget::sphere2(), cfg, params),
                  DimensionError);

  GridField off = constant_circle(16, 0.5, 0.0);  // |u| = 1/2 off the circle
  CHECK_THROWS_AS(approximate_high(off, ManifoldTarget::circle(), cfg, params), Error);
}

TEST_CASE("audit_claim8 balances shift statistics against the exceptional set") {
  const GridField u = vortex_field(32);
  const SobolevParams params(0.6, 2.0);
  HighRegimeConfig cfg;
  cfg.t = 0.25;  // stencil must straddle the core for the scores to light up
  cfg.gamma = 0.25;
  cfg.n_shifts = 32;
  cfg.seed = 3;
  const Claim8Report rep = audit_claim8(u, ManifoldTarget::circle(), cfg, params);
  constexpr double pi = std::numbers::pi;
  CHECK(rep.ball_measure == doctest::Approx(pi / 64.0).epsilon(1e-14));
  CHECK(rep.shifts_accepted >= 1);
  CHECK(rep.shifts_accepted <= 32);
  CHECK(rep.lhs_mc > 0.0);       // the vortex forces nonzero scores
  CHECK(rep.exceptional_nodes > 0);  // mollification flattens the core
  CHECK(rep.rhs > 0.0);
  CHECK(std::isfinite(rep.lhs_mc / rep.rhs));

  SUBCASE("constant field has empty exceptional set and zero statistics") {
    const GridField c = constant_circle(16, 1.0, 0.0);
    HighRegimeConfig ccfg;
    ccfg.n_shifts = 16;
    const Claim8Report crep = audit_claim8(c, ManifoldTarget::circle(), ccfg, params);
    CHECK(crep.lhs_mc == 0.0);
    CHECK(crep.rhs == 0.0);
    CHECK(crep.exceptional_nodes == 0);
    CHECK(crep.shifts_accepted == 16);
  }

  SUBCASE("larger t inflates the exceptional set") {
    HighRegimeConfig big = cfg;
    big.t = 0.5;
    big.gamma = 0.5;
    const Claim8Report wide = audit_claim8(u, ManifoldTarget::circle(), big, params);
    CHECK(wide.exceptional_nodes > rep.exceptional_nodes);
  }
}

TEST_CASE("approximate_low on a constant field is a near-identity") {
  const GridField u = constant_circle(16, 0.6, -0.8);
  const SobolevParams params(0.4, 2.0);
  const std::vector<double> b{1.0, 0.0};
  const LowResult res = approximate_low(u, ManifoldTarget::circle(), 2, b, 0.0, params);
  CHECK(res.report.d <= 1e-9);
  CHECK(res.report.clamp_count == 0);
  CHECK(res.report.unit_defect <= 1e-9);
  CHECK(res.report.level == 2);
  CHECK(res.report.t_chart == 0.25);
  REQUIRE(res.report.stages.size() == 5);
  CHECK(res.report.stages[0].first == "haar");
  CHECK(res.report.stages[4].first == "smooth");
}

TEST_CASE("approximate_low sharpens with the level on a smooth phase field") {
  const GridField u = phase_field(64);
  const SobolevParams params(0.4, 2.0);
  const std::vector<double> b{1.0, 0.0};
  double prev = 0.0;
  for (int j = 2; j <= 4; ++j) {
    const LowResult res = approximate_low(u, ManifoldTarget::circle(), j, b, 0.0, params);
    CHECK(res.report.unit_defect <= 1e-9);
    REQUIRE(res.report.winding_in.has_value());
    CHECK(*res.report.winding_in == 0);
    REQUIRE(res.report.winding_out.has_value());
    CHECK(*res.report.winding_out == 0);
    if (j > 2) CHECK(res.report.d < prev);
    prev = res.report.d;
    if (j == 4) CHECK(res.report.clamp_count == 0);
  }

  SUBCASE("worker count does not change the output") {
    const LowResult a = approximate_low(u, ManifoldTarget::circle(), 3, b, 0.0, params, 1);
    const LowResult c = approximate_low(u, ManifoldTarget::circle(), 3, b, 0.0, params, 4);
    CHECK(a.field.values == c.field.values);
    CHECK(a.report.d == c.report.d);
  }
}

TEST_CASE("approximate_low gates regime and divisibility") {
  const std::vector<double> b{1.0, 0.0};
  CHECK_THROWS_AS(approximate_low(phase_field(32), ManifoldTarget::circle(), 2, b, 0.0,
                                  SobolevParams(0.6, 2.0)),
                  RegimeError);
  // N = 24 is not divisible by 2^4 (explicit t_chart keeps the 2h guard quiet)
  Grid g{2, 24, 1.0};
  GridField u(g, 2);
  for (std::size_t i = 0; i < g.node_count(); ++i) u.at(i)[0] = 1.0;
  CHECK_THROWS_AS(
      approximate_low(u, ManifoldTarget::circle(), 4, b, 0.5, SobolevParams(0.4, 2.0)),
      Error);
  // wrong base-point arity
  CHECK_THROWS_AS(approximate_low(phase_field(16), ManifoldTarget::circle(), 2,
                                  std::vector<double>{1.0, 0.0, 0.0}, 0.0,
                                  SobolevParams(0.4, 2.0)),
                  DimensionError);
}
