#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wsp/common.hpp"
#include "wsp/seminorm.hpp"

using wsp::Grid;
using wsp::GridField;
using wsp::SobolevParams;

namespace {

GridField random_field(const Grid& g, int nu, std::uint64_t seed, double lo = -1.0,
                       double hi = 1.0) {
  GridField u(g, nu);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : u.values) v = dist(rng);
  return u;
}

GridField coordinate_field(const Grid& g) {
  GridField u(g, g.m);
  std::vector<double> x(static_cast<std::size_t>(g.m));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_position(i, x.data());
    auto v = u.at(i);
    for (int a = 0; a < g.m; ++a) v[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)];
  }
  return u;
}

}  // namespace

TEST_CASE("constant fields have zero seminorm and exact L^p mass") {
  Grid g(1, 64, 1.0);
  GridField u(g, 1, 3.0);
  SobolevParams prm(0.5, 2.0);

  auto rep = wsp::gagliardo(u, prm);
  CHECK(rep.seminorm_p == 0.0);
  CHECK(rep.seminorm == 0.0);
  CHECK(rep.pair_count == 64u * 63u);
  CHECK(rep.region_size == 64);

  // integral of 3^2 over (-1,1) is 18, midpoint-exact for constants
  CHECK(wsp::lp_norm(u, 2.0) == doctest::Approx(std::sqrt(18.0)).epsilon(1e-15));
}

// For the coordinate field u(x) = x the integrand |u(x)-u(y)|^p / |x-y|^{m+sp}
// collapses to 1 whenever p(1-s) = m, so the pair quadrature counts measure:
// [u]^p = h^{2m} N^m (N^m - 1) = |Q|^2 (1 - N^-m).
TEST_CASE("coordinate field hits the closed-form pair count (m=1)") {
  Grid g(1, 256, 1.0);
  SobolevParams prm(0.5, 2.0);  // p(1-s) = 1 = m
  auto rep = wsp::gagliardo(coordinate_field(g), prm);
  CHECK(rep.seminorm_p == doctest::Approx(4.0 * (1.0 - 1.0 / 256.0)).epsilon(1e-12));
}

TEST_CASE("coordinate field hits the closed-form pair count (m=2)") {
  Grid g(2, 16, 1.0);
  SobolevParams prm(0.5, 4.0);  // p(1-s) = 2 = m
  auto rep = wsp::gagliardo(coordinate_field(g), prm);
  CHECK(rep.seminorm_p == doctest::Approx(16.0 * (1.0 - 1.0 / 256.0)).epsilon(1e-12));
}

TEST_CASE("dsp power field reproduces the seminorm bit-exactly") {
  auto check_identity = [](const Grid& g, int nu, double s, double p, std::uint64_t seed) {
    GridField u = random_field(g, nu, seed);
    SobolevParams prm(s, p);
    wsp::SeminormEngine engine(g, prm);

    GridField dsp_p = engine.dsp_power(u);
    const double h = g.cell_size();
    double hm = 1.0;
    for (int a = 0; a < g.m; ++a) hm *= h;

    wsp::NeumaierSum total;
    for (double v : dsp_p.values) total.add(v * hm);
    CHECK(total.value() == engine.seminorm(u).seminorm_p);
  };

  check_identity(Grid(1, 48, 1.0), 2, 0.6, 1.5, 11);
  check_identity(Grid(2, 12, 1.0), 3, 0.4, 2.0, 22);
  check_identity(Grid(2, 10, 1.0), 1, 0.5, 3.0, 33);
}

TEST_CASE("scaling by powers of two is exact for p = 2") {
  Grid g(1, 40, 1.0);
  GridField u = random_field(g, 2, 7);
  GridField u2 = u;
  for (double& v : u2.values) v *= 2.0;
  SobolevParams prm(0.5, 2.0);

  CHECK(wsp::gagliardo(u2, prm).seminorm_p == 4.0 * wsp::gagliardo(u, prm).seminorm_p);
}

TEST_CASE("negation and general scaling") {
  Grid g(1, 40, 1.0);
  GridField u = random_field(g, 1, 8);
  GridField nu = u;
  for (double& v : nu.values) v = -v;
  SobolevParams prm(0.3, 1.7);

  const double base = wsp::gagliardo(u, prm).seminorm_p;
  CHECK(wsp::gagliardo(nu, prm).seminorm_p == base);

  GridField u3 = u;
  for (double& v : u3.values) v *= 3.0;
  CHECK(wsp::gagliardo(u3, prm).seminorm_p ==
        doctest::Approx(std::pow(3.0, 1.7) * base).epsilon(1e-12));
}

TEST_CASE("translation invariance and seminorm subadditivity") {
  Grid g(1, 32, 1.0);
  GridField u = random_field(g, 2, 9);
  GridField v = random_field(g, 2, 10);
  SobolevParams prm(0.5, 2.0);

  GridField shifted = u;
  for (std::size_t i = 0; i < shifted.node_count(); ++i) {
    shifted.at(i)[0] += 0.375;
    shifted.at(i)[1] -= 1.25;
  }
  CHECK(wsp::gagliardo(shifted, prm).seminorm ==
        doctest::Approx(wsp::gagliardo(u, prm).seminorm).epsilon(1e-12));

  GridField sum(g, 2);
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] = u.values[i] + v.values[i];
  const double lhs = wsp::gagliardo(sum, prm).seminorm;
  const double rhs = wsp::gagliardo(u, prm).seminorm + wsp::gagliardo(v, prm).seminorm;
  CHECK(lhs <= rhs * (1.0 + 1e-12));
}

TEST_CASE("1-Lipschitz composition does not increase the seminorm") {
  Grid g(1, 32, 1.0);
  GridField u = random_field(g, 1, 13, -2.0, 2.0);
  SobolevParams prm(0.4, 2.5);
  const double base = wsp::gagliardo(u, prm).seminorm_p;

  GridField a = u;
  for (double& v : a.values) v = std::abs(v);
  CHECK(wsp::gagliardo(a, prm).seminorm_p <= base * (1.0 + 1e-12));

  GridField c = u;
  for (double& v : c.values) v = std::clamp(v, -0.5, 0.5);
  CHECK(wsp::gagliardo(c, prm).seminorm_p <= base * (1.0 + 1e-12));
}

TEST_CASE("worker count never changes a bit") {
  Grid g(2, 16, 1.0);
  GridField u = random_field(g, 2, 17);
  SobolevParams prm(0.5, 2.0);

  wsp::SeminormEngine e1(g, prm, 1);
  wsp::SeminormEngine e2(g, prm, 2);
  wsp::SeminormEngine e8(g, prm, 8);

  const double r1 = e1.seminorm(u).seminorm_p;
  CHECK(e2.seminorm(u).seminorm_p == r1);
  CHECK(e8.seminorm(u).seminorm_p == r1);

  GridField d1 = e1.dsp_power(u);
  GridField d8 = e8.dsp_power(u);
  CHECK(d1.values == d8.values);
}

TEST_CASE("regions: all-ones equals full bitwise, halves are monotone") {
  Grid g(2, 10, 1.0);
  GridField u = random_field(g, 1, 19);
  SobolevParams prm(0.6, 2.0);
  wsp::SeminormEngine engine(g, prm);

  std::vector<std::uint8_t> all(g.node_count(), 1);
  CHECK(engine.seminorm(u, &all).seminorm_p == engine.seminorm(u).seminorm_p);

  std::vector<std::uint8_t> half(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count() / 2; ++i) half[i] = 1;
  auto rep = engine.seminorm(u, &half);
  CHECK(rep.seminorm_p <= engine.seminorm(u).seminorm_p);
  CHECK(rep.region_size == g.node_count() / 2);

  std::vector<std::uint8_t> wrong(3, 1);
  CHECK_THROWS_AS(engine.seminorm(u, &wrong), wsp::DimensionError);
  std::vector<std::uint8_t> empty(g.node_count(), 0);
  CHECK_THROWS_AS(engine.seminorm(u, &empty), wsp::Error);
}

TEST_CASE("sparse norm of a compactly supported field matches the dense norm") {
  Grid g(1, 64, 1.0);
  SobolevParams prm(0.5, 2.0);

  for (double p : {2.0, 1.7}) {
    SobolevParams prm_p(0.5, p);
    wsp::SeminormEngine engine(g, prm_p);
    engine.kernel_row_sums();

    GridField w(g, 2);
    for (int i = 20; i < 30; ++i) {
      w.at(static_cast<std::size_t>(i))[0] = std::sin(0.3 * i);
      w.at(static_cast<std::size_t>(i))[1] = 0.25 * i;
    }
    auto sparse = engine.sparse_norm_parts(w);
    auto dense = engine.norm_parts(w);
    CHECK(sparse.lp == dense.lp);
    CHECK(sparse.seminorm == doctest::Approx(dense.seminorm).epsilon(1e-12));
  }

  wsp::SeminormEngine engine(g, prm);
  GridField zero(g, 2);
  auto parts = engine.sparse_norm_parts(zero);
  CHECK(parts.lp == 0.0);
  CHECK(parts.seminorm == 0.0);
}

TEST_CASE("W^{1,q} norm of the coordinate field") {
  Grid g(1, 64, 1.0);
  GridField u = coordinate_field(g);
  // difference quotients of a linear map are exactly 1 everywhere
  const double expect = std::sqrt(2.0 / 3.0 * (1.0 - 1.0 / 4096.0)) + std::sqrt(2.0);
  CHECK(wsp::w1q_norm(u, 2.0) == doctest::Approx(expect).epsilon(1e-13));

  CHECK_THROWS_AS(wsp::w1q_norm(GridField(Grid(1, 2, 1.0), 1), 2.0), wsp::Error);
  CHECK_THROWS_AS(wsp::w1q_norm(u, 0.5), wsp::Error);
}

TEST_CASE("Gagliardo-Nirenberg ratio guards its exponent relation") {
  Grid g(1, 32, 1.0);
  GridField w = random_field(g, 1, 23);
  SobolevParams prm(0.5, 2.0);

  // 1/2 = (1-s)/4 + s/(4/3) holds exactly for s = 1/2
  const double ratio = wsp::gn_ratio(w, prm, 4.0 / 3.0, 4.0);
  CHECK(ratio > 0.0);
  CHECK(std::isfinite(ratio));

  CHECK_THROWS_AS(wsp::gn_ratio(w, prm, 1.5, 4.0), wsp::Error);      // relation broken
  CHECK_THROWS_AS(wsp::gn_ratio(w, prm, 2.5, 4.0), wsp::Error);      // q >= p
  CHECK_THROWS_AS(wsp::gn_ratio(GridField(g, 1), prm, 4.0 / 3.0, 4.0), wsp::Error);
}

TEST_CASE("distance of a field to itself is zero; engines check grids") {
  Grid g(1, 24, 1.0);
  GridField u = random_field(g, 2, 29);
  SobolevParams prm(0.5, 2.0);
  CHECK(wsp::wsp_distance(u, u, prm) == 0.0);

  wsp::SeminormEngine engine(Grid(1, 32, 1.0), prm);
  CHECK_THROWS_AS(engine.seminorm(u), wsp::DimensionError);
}

TEST_CASE("single-node grid has no pairs") {
  Grid g(1, 1, 1.0);
  GridField u(g, 1, 5.0);
  auto rep = wsp::gagliardo(u, SobolevParams(0.5, 2.0));
  CHECK(rep.seminorm_p == 0.0);
  CHECK(rep.pair_count == 0);
}
