#include "wsp/fixtures.hpp"

#include <cmath>
#include <cstddef>
#include <random>

#include "wsp/common.hpp"
#include "wsp/counterexample.hpp"
#include "wsp/haar.hpp"

namespace wsp {

namespace {

double radial_bump(double r) {
  if (r >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

GridField bump_fixture(const Grid& grid) {
  // Multiscale stack: widths halve from 1/2 down to the resolution floor 2h,
  // amplitudes sqrt(w) so every layer carries the same s = 1/2 roughness at
  // its own scale; the base layer is boosted to hold the bulk of the L^p
  // mass.  Layers sit at separated centers with disjoint supports (m >= 2),
  // so the local seminorm density near a layer stays at that layer's scale;
  // no center lies on a dyadic hyperplane.
  static constexpr double kCenters[8][2] = {
      {0.35, 0.30},  {-0.52, 0.36}, {0.42, -0.45}, {-0.38, -0.44},
      {0.02, -0.65}, {-0.05, 0.62}, {0.65, 0.02},  {-0.66, -0.03},
  };
  GridField f(grid, 1);
  const double h = grid.cell_size();
  double x[8];
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node_position(i, x);
    double acc = 0.0;
    int k = 0;
    for (double w = 0.5; w >= 2.0 * h && k < 8; w *= 0.5, ++k) {
      double r2 = 0.0;
      for (int a = 0; a < grid.m; ++a) {
        const double d = x[a] - (a < 2 ? kCenters[k][a] : 0.0);
        r2 += d * d;
      }
      const double amp = (k == 0 ? 2.5 : 1.0) * std::sqrt(w);
      acc += amp * radial_bump(std::sqrt(r2) / w);
    }
    f.values[i] = acc;
  }
  return f;
}

GridField vortex_fixture(const Grid& grid, bool equator) {
  if (grid.m != 2) throw DimensionError("vortex fixtures need m = 2");
  GridField f(grid, equator ? 3 : 2);
  double x[2];
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node_position(i, x);
    const double r = std::hypot(x[0], x[1]);
    f.at(i)[0] = x[0] / r;
    f.at(i)[1] = x[1] / r;
  }
  return f;
}

GridField step_random_fixture(const Grid& grid, std::uint64_t seed) {
  StepField sf(DyadicCubication(grid, 2), 1);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (double& v : sf.cube_values) v = box(rng);
  return sf.to_field();
}

}  // namespace

GridField generate_fixture(const std::string& name, const Grid& grid,
                           std::uint64_t seed) {
  if (grid.m > 8) throw DimensionError("fixtures support m <= 8");
  if (name == "constant") {
    GridField f(grid, 2);
    for (std::size_t i = 0; i < grid.node_count(); ++i) f.at(i)[0] = 1.0;
    return f;
  }
  if (name == "linear") {
    GridField f(grid, 1);
    double x[8];
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      grid.node_position(i, x);
      f.values[i] = x[0];
    }
    return f;
  }
  if (name == "bump") return bump_fixture(grid);
  if (name == "vortex") return vortex_fixture(grid, false);
  if (name == "equator-vortex") return vortex_fixture(grid, true);
  if (name == "step-random") return step_random_fixture(grid, seed);
  // the fundamental family member: half a period per dyadic half-cube, so
  // its dyadic averages stay away from zero
  if (name == "oscillation") return build_family(grid, 1, 0.0).v;
  throw Error("unknown fixture: " + name);
}

}  // namespace wsp
