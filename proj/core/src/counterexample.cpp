#include "wsp/counterexample.hpp"

#include <cmath>
#include <cstddef>

#include "wsp/common.hpp"
#include "wsp/seminorm.hpp"

namespace wsp {

namespace {

// smoothstep: 0 for t <= 0, 1 for t >= 1, C-infinity in between
double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// plateau profile: exactly -1/2 on [-0.7,-0.3], exactly +1/2 on [0.3,0.7],
// zero outside (-0.8, 0.8), smooth ramps between
double profile(double x) {
  if (x <= -0.8 || x >= 0.8) return 0.0;
  if (x < -0.7) return -0.5 * smoothstep((x + 0.8) / 0.1);
  if (x <= -0.3) return -0.5;
  if (x < 0.3) return -0.5 + smoothstep((x + 0.3) / 0.6);
  if (x <= 0.7) return 0.5;
  return 0.5 * smoothstep((0.8 - x) / 0.1);
}

// tensor window: exactly 1 on [-0.7,0.7], zero outside (-0.8, 0.8)
double window(double x) {
  return smoothstep((x + 0.8) / 0.1) * smoothstep((0.8 - x) / 0.1);
}

// periodic wrap of R onto [-1, 1)
double wrap(double y) { return y - 2.0 * std::floor((y + 1.0) / 2.0); }

}  // namespace

OscillationFamily build_family(const Grid& grid, int j, double xi) {
  if (j < 1) throw Error("frequency must be >= 1");
  if (grid.m > 8) throw DimensionError("oscillation family supports m <= 8");
  if (grid.n < 32 * j) {
    throw ResolutionError("grid does not resolve the oscillation: need n >= 32 j");
  }
  OscillationFamily fam;
  fam.j = j;
  fam.xi = xi;
  fam.v = GridField(grid, 1);
  fam.u = GridField(grid, 1);
  double x[8];
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.node_position(i, x);
    double val = profile(wrap(j * x[0]));
    for (int a = 1; a < grid.m; ++a) val *= window(wrap(j * x[a]));
    fam.v.values[i] = val;
    fam.u.values[i] = val + xi;
    if (val == fam.sigma_pl) {
      ++fam.sigma_nodes;
    } else if (val == fam.tau_pl) {
      ++fam.tau_nodes;
    }
  }
  const double floor_nodes = 0.05 * static_cast<double>(grid.node_count());
  if (static_cast<double>(fam.sigma_nodes) < floor_nodes ||
      static_cast<double>(fam.tau_nodes) < floor_nodes) {
    throw Error("plateau sets cover fewer than 5% of nodes");
  }
  return fam;
}

GridField apply_map(const GridField& u, const ScalarMap& kappa) {
  GridField out = u;
  for (double& v : out.values) v = kappa(v);
  return out;
}

NonuniformReport nonuniform_demo(const Grid& grid, const std::vector<int>& js, double xi,
                                 const ScalarMap& kappa, const SobolevParams& params,
                                 int workers) {
  if (js.size() < 2) throw Error("need at least two frequencies");
  NonuniformReport rep;
  const double sigma = -0.5;
  const double tau = 0.5;
  rep.witness_gap = kappa(tau + xi) - kappa(tau) - (kappa(sigma + xi) - kappa(sigma));
  if (std::abs(rep.witness_gap) <= 1e-12) {
    throw WitnessError("map has no plateau witness: composition gap is shift-invariant");
  }
  for (const int j : js) {
    const OscillationFamily fam = build_family(grid, j, xi);
    NonuniformRow row;
    row.j = j;
    row.kappa_gap =
        gagliardo(subtract(apply_map(fam.u, kappa), apply_map(fam.v, kappa)), params,
                  nullptr, workers)
            .seminorm;
    row.input_norm = wsp_norm_parts(subtract(fam.u, fam.v), params, workers).full();
    rep.rows.push_back(row);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const NonuniformRow& row : rep.rows) {
    if (!(row.kappa_gap > 0.0)) throw Error("degenerate composition gap");
    const double lx = std::log(static_cast<double>(row.j));
    const double ly = std::log(row.kappa_gap);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(rep.rows.size());
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw Error("frequencies must not all coincide");
  rep.slope = (n * sxy - sx * sy) / denom;
  return rep;
}

std::vector<ContinuityRow> continuity_demo(const GridField& u,
                                           const std::vector<GridField>& perturbed,
                                           const ScalarMap& kappa,
                                           const SobolevParams& params, int workers) {
  const GridField ku = apply_map(u, kappa);
  std::vector<ContinuityRow> rows;
  rows.reserve(perturbed.size());
  for (const GridField& vk : perturbed) {
    ContinuityRow row;
    row.kappa_gap =
        gagliardo(subtract(ku, apply_map(vk, kappa)), params, nullptr, workers).seminorm;
    row.input_dist = wsp_norm_parts(subtract(u, vk), params, workers).full();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wsp
