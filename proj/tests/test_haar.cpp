#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wsp/common.hpp"
#include "wsp/grid.hpp"
#include "wsp/haar.hpp"
#include "wsp/manifold.hpp"
#include "wsp/params.hpp"
#include "wsp/seminorm.hpp"

using wsp::DyadicCubication;
using wsp::Grid;
using wsp::GridField;
using wsp::SobolevParams;

namespace {

GridField random_field(const Grid& g, int nu, unsigned seed) {
  GridField u(g, nu);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : u.values) v = dist(rng);
  return u;
}

GridField smooth_bump(const Grid& g) {
  GridField u(g, 1);
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    double x[8];
    g.node_position(i, x);
    double r2 = 0.0;
    for (int a = 0; a < g.m; ++a) r2 += x[a] * x[a];
    u.values[i] = std::exp(-4.0 * r2);
  }
  return u;
}

// circle-valued step with the jump at x = 0.1, off every cube boundary
GridField circle_jump(int n) {
  Grid g(1, n, 1.0);
  GridField u(g, 2);
  for (int i = 0; i < n; ++i) {
    const bool left = g.axis_coord(i) < 0.1;
    u.at(static_cast<std::size_t>(i))[0] = left ? 1.0 : -1.0;
    u.at(static_cast<std::size_t>(i))[1] = 0.0;
  }
  return u;
}

}  // namespace

TEST_CASE("cubication geometry") {
  Grid g(2, 16, 1.0);
  DyadicCubication cub(g, 2);
  CHECK(cub.per_side == 4);
  CHECK(cub.cells == 4);
  CHECK(cub.cube_count() == 16);
  CHECK(cub.side() == 0.5);
  CHECK(cub.measure() == 0.25);
  CHECK(cub.diameter() == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(cub.measure() * static_cast<double>(cub.cube_count()) ==
        doctest::Approx(4.0).epsilon(1e-15));

  // delta of a cube with itself is its diameter; delta is symmetric
  for (std::int64_t c = 0; c < cub.cube_count(); ++c) {
    CHECK(cub.delta(c, c) == doctest::Approx(cub.diameter()).epsilon(1e-15));
  }
  CHECK(cub.delta(0, 15) == cub.delta(15, 0));

  // m=1 adjacent half-cubes: corners at -1,0 and 0,1, so delta = 2
  DyadicCubication halves(Grid(1, 8, 1.0), 1);
  CHECK(halves.delta(0, 1) == 2.0);

  CHECK_THROWS_AS(DyadicCubication(Grid(1, 12, 1.0), 3), wsp::Error);
  CHECK_THROWS_AS(DyadicCubication(g, 0), wsp::Error);
  CHECK_THROWS_AS(cub.delta(-1, 0), wsp::Error);
}

TEST_CASE("cube nodes partition the grid in node order") {
  Grid g(2, 4, 1.0);
  DyadicCubication cub(g, 1);
  CHECK(cub.cube_nodes(0) == std::vector<std::size_t>{0, 1, 4, 5});
  CHECK(cub.cube_nodes(1) == std::vector<std::size_t>{2, 3, 6, 7});
  CHECK(cub.cube_nodes(2) == std::vector<std::size_t>{8, 9, 12, 13});
  CHECK(cub.cube_nodes(3) == std::vector<std::size_t>{10, 11, 14, 15});

  std::vector<int> hits(g.node_count(), 0);
  for (std::int64_t c = 0; c < cub.cube_count(); ++c) {
    for (const std::size_t id : cub.cube_nodes(c)) {
      ++hits[id];
      CHECK(cub.cube_of_node(id) == c);
    }
  }
  for (const int hit : hits) CHECK(hit == 1);
}

TEST_CASE("haar projection averages per cube") {
  Grid g(1, 4, 1.0);
  GridField v(g, 1);
  for (int i = 0; i < 4; ++i) v.values[static_cast<std::size_t>(i)] = g.axis_coord(i);
  const auto e = wsp::haar_project(v, 1);
  CHECK(e.at(0)[0] == -0.5);
  CHECK(e.at(1)[0] == 0.5);

  GridField c(g, 1, 3.25);
  const auto ec = wsp::haar_project(c, 1);
  CHECK(ec.at(0)[0] == 3.25);
  CHECK(ec.at(1)[0] == 3.25);
  CHECK(ec.to_field().values == c.values);
}

TEST_CASE("haar projection is idempotent bitwise") {
  Grid g(2, 24, 1.0);
  const GridField v = random_field(g, 2, 17);
  for (int j = 1; j <= 3; ++j) {
    const GridField once = wsp::haar_project(v, j).to_field();
    const GridField twice = wsp::haar_project(once, j).to_field();
    CHECK(once.values == twice.values);
  }
}

TEST_CASE("haar projection commutes with constants and workers") {
  Grid g(2, 16, 1.0);
  const GridField v = random_field(g, 1, 19);
  GridField shifted = v;
  for (auto& x : shifted.values) x += 0.5;
  const auto ev = wsp::haar_project(v, 2);
  const auto es = wsp::haar_project(shifted, 2);
  for (std::int64_t c = 0; c < ev.cubication.cube_count(); ++c) {
    CHECK(es.at(c)[0] == doctest::Approx(ev.at(c)[0] + 0.5).epsilon(1e-13));
  }

  const auto w1 = wsp::haar_project(v, 2, 1);
  const auto w8 = wsp::haar_project(v, 2, 8);
  CHECK(w1.cube_values == w8.cube_values);
}

TEST_CASE("Lp contraction: Jensen holds exactly") {
  Grid g(2, 24, 1.0);
  for (unsigned seed = 0; seed < 50; ++seed) {
    const GridField v = random_field(g, 1, 100 + seed);
    for (int j = 1; j <= 3; ++j) {
      const auto r = wsp::audit_lp_contraction(v, j, 2.0);
      CHECK(r.lhs <= r.rhs + 1e-12);
    }
  }

  // equality on constants and on level-j steps
  GridField c(g, 1, -0.75);
  const auto rc = wsp::audit_lp_contraction(c, 2, 2.0);
  CHECK(rc.lhs == rc.rhs);
  const GridField step = wsp::haar_project(random_field(g, 1, 7), 2).to_field();
  const auto rs = wsp::audit_lp_contraction(step, 2, 1.5);
  CHECK(rs.lhs == rs.rhs);
}

TEST_CASE("Lp convergence of E_j on a smooth field") {
  Grid g(2, 32, 1.0);
  const GridField v = smooth_bump(g);
  const double vnorm = wsp::lp_norm(v, 2.0);
  double prev = -1.0;
  for (int j = 1; j <= 5; ++j) {
    const GridField e = wsp::haar_project(v, j).to_field();
    const double err = wsp::lp_norm(wsp::subtract(e, v), 2.0);
    if (j > 1) CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.1 * vnorm);
}

TEST_CASE("seminorm bound ratio: gates and level-j fixed point") {
  Grid g(1, 32, 1.0);
  const GridField v = random_field(g, 1, 23);
  const SobolevParams low(0.4, 2.0);  // sp = 0.8

  const GridField step = wsp::haar_project(v, 2).to_field();
  CHECK(wsp::audit_seminorm_bound(step, 2, low) == 1.0);

  const double ratio = wsp::audit_seminorm_bound(v, 3, low);
  CHECK(std::isfinite(ratio));
  CHECK(ratio > 0.0);

  CHECK_THROWS_AS(wsp::audit_seminorm_bound(v, 2, SobolevParams(0.6, 2.0)), wsp::RegimeError);
  GridField c(g, 1, 1.0);
  CHECK_THROWS_AS(wsp::audit_seminorm_bound(c, 2, low), wsp::Error);
}

TEST_CASE("cube-pair kernel: adjacent half-cubes against the closed form") {
  // int_{-1}^{0} int_{0}^{1} (y-x)^{-3/2} dy dx = 8 - 4 sqrt(2)
  Grid g(1, 1024, 1.0);
  DyadicCubication cub(g, 1);
  const SobolevParams params(0.5, 1.0);  // sp = 1/2, m + sp = 3/2
  const auto chk = wsp::cube_pair_kernel_check(cub, 0, 1, params);
  const double exact = 8.0 - 4.0 * std::sqrt(2.0);
  CHECK(std::abs(chk.lhs - exact) / exact < 0.03);
  CHECK(chk.delta == 2.0);
  CHECK(chk.rhs_unit == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
  CHECK(chk.lhs / chk.rhs_unit == doctest::Approx(6.63).epsilon(0.03));

  // same cube: finite because sp < 1
  const auto same = wsp::cube_pair_kernel_check(cub, 0, 0, params);
  CHECK(std::isfinite(same.lhs));
  CHECK(same.lhs > 0.0);

  CHECK_THROWS_AS(wsp::cube_pair_kernel_check(cub, 0, 1, SobolevParams(0.75, 2.0)),
                  wsp::RegimeError);
}

TEST_CASE("cube-pair kernel: far cubes obey the two-sided interval") {
  Grid g(1, 256, 1.0);
  DyadicCubication cub(g, 3);
  const SobolevParams params(0.25, 2.0);  // sp = 0.5
  const double diam = cub.diameter();
  int far_pairs = 0;
  for (std::int64_t c1 = 0; c1 < cub.cube_count(); ++c1) {
    for (std::int64_t c2 = 0; c2 < cub.cube_count(); ++c2) {
      const double delta = cub.delta(c1, c2);
      if (delta < 8.0 * diam) continue;
      ++far_pairs;
      const auto chk = wsp::cube_pair_kernel_check(cub, c1, c2, params);
      const double mean = chk.lhs / (cub.measure() * cub.measure());
      const double ex = g.m + params.sp();
      CHECK(mean >= std::pow(delta, -ex));
      CHECK(mean <= std::pow(delta / 2.0, -ex));
    }
  }
  CHECK(far_pairs > 0);
}

TEST_CASE("step-field seminorm decomposes over cube pairs") {
  Grid g(2, 16, 1.0);
  DyadicCubication cub(g, 1);
  const SobolevParams params(0.3, 2.0);  // sp = 0.6
  const GridField step = wsp::haar_project(random_field(g, 1, 29), 1).to_field();
  const auto e = wsp::haar_project(step, 1);

  double total = 0.0;
  for (std::int64_t c1 = 0; c1 < cub.cube_count(); ++c1) {
    for (std::int64_t c2 = 0; c2 < cub.cube_count(); ++c2) {
      const double dw = std::abs(e.at(c1)[0] - e.at(c2)[0]);
      if (dw == 0.0) continue;
      total += std::pow(dw, params.p) * wsp::cube_pair_kernel_check(cub, c1, c2, params).lhs;
    }
  }
  const double direct = wsp::gagliardo(step, params).seminorm_p;
  CHECK(total == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("clamp keeps tube values and replaces the rest by b") {
  Grid g(1, 8, 1.0);
  const auto circle = wsp::ManifoldTarget::circle();
  DyadicCubication cub(g, 2);
  wsp::StepField e(cub, 2);
  // cubes: on N, inside tube, outside tube, far outside
  const double vals[4][2] = {{1.0, 0.0}, {0.0, 1.1}, {0.8, 0.0}, {0.0, 0.0}};
  for (std::int64_t c = 0; c < 4; ++c) {
    e.at(c)[0] = vals[c][0];
    e.at(c)[1] = vals[c][1];
  }
  const std::vector<double> b = {0.0, -1.0};
  const auto r = wsp::clamp_to_tube(e, circle, b);
  CHECK(r.clamp_count == 2);
  CHECK(r.field.at(0)[0] == 1.0);
  CHECK(r.field.at(1)[1] == 1.1);
  CHECK(r.field.at(2)[1] == -1.0);
  CHECK(r.field.at(3)[1] == -1.0);
  CHECK(std::vector<char>(r.clamped.begin(), r.clamped.end()) ==
        std::vector<char>{0, 0, 1, 1});
  for (std::int64_t c = 0; c < 4; ++c) {
    CHECK(circle.dist(r.field.at(c).data()) <= circle.iota + 1e-12);
  }

  const std::vector<double> off = {0.5, 0.5};
  CHECK_THROWS_AS(wsp::clamp_to_tube(e, circle, off), wsp::Error);
  const std::vector<double> short_b = {1.0};
  CHECK_THROWS_AS(wsp::clamp_to_tube(e, circle, short_b), wsp::DimensionError);

  // all-clamped input collapses to the constant b
  wsp::StepField zeros(cub, 2);
  const auto rz = wsp::clamp_to_tube(zeros, circle, b);
  CHECK(rz.clamp_count == 4);
  for (std::int64_t c = 0; c < 4; ++c) {
    CHECK(rz.field.at(c)[0] == 0.0);
    CHECK(rz.field.at(c)[1] == -1.0);
  }
}

TEST_CASE("A_j audit: constant manifold field never clamps") {
  Grid g(1, 32, 1.0);
  GridField u(g, 2);
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    u.at(i)[0] = 1.0;
    u.at(i)[1] = 0.0;
  }
  const SobolevParams low(0.4, 2.0);
  const std::vector<double> b = {1.0, 0.0};
  for (int j = 1; j <= 3; ++j) {
    const auto rep = wsp::audit_aj_claim(u, j, low, wsp::ManifoldTarget::circle(), b);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.aj_nodes == 0);
    CHECK(rep.aj_measure == 0.0);
    CHECK(rep.rhs_local == 0.0);
  }
}

TEST_CASE("A_j audit: a single jump clamps one cube per level") {
  const GridField u = circle_jump(64);
  const SobolevParams low(0.4, 2.0);
  const std::vector<double> b = {1.0, 0.0};
  const auto circle = wsp::ManifoldTarget::circle();

  std::int64_t prev_nodes = 1 << 30;
  for (int j = 1; j <= 5; ++j) {
    const auto rep = wsp::audit_aj_claim(u, j, low, circle, b, 0);
    // exactly the cube straddling the jump clamps
    CHECK(rep.aj_nodes == 64 / (1 << j));
    CHECK(rep.aj_nodes < prev_nodes);
    prev_nodes = rep.aj_nodes;
    CHECK(rep.aj_measure == doctest::Approx(2.0 / (1 << j)).epsilon(1e-13));
    CHECK(rep.lhs > 0.0);
    CHECK(std::isfinite(rep.lhs));
    CHECK(rep.rhs_diff > 0.0);
    CHECK(rep.rhs_local > 0.0);
  }

  CHECK_THROWS_AS(wsp::audit_aj_claim(u, 1, SobolevParams(0.6, 2.0), circle, b),
                  wsp::RegimeError);
  GridField bad = u;
  bad.at(0)[0] = 0.5;  // off the circle
  CHECK_THROWS_AS(wsp::audit_aj_claim(bad, 1, low, circle, b), wsp::Error);
}
