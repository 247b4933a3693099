#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wsp/grid.hpp"
#include "wsp/params.hpp"

namespace wsp {

/// Coordinatewise Lipschitz map R -> R used as the composition kappa.
using ScalarMap = std::function<double(double)>;

/// Oscillation pair v_j(x) = phibar(j x) and u_j = v_j + xi, phibar the
/// periodic extension of a smooth plateau bump taking the exact values
/// sigma_pl and tau_pl on sets of positive measure.
struct OscillationFamily {
  GridField v;
  GridField u;
  int j = 1;
  double xi = 0.0;
  double sigma_pl = -0.5;
  double tau_pl = 0.5;
  std::size_t sigma_nodes = 0;  ///< nodes where v equals sigma_pl exactly
  std::size_t tau_nodes = 0;    ///< nodes where v equals tau_pl exactly
};

/// Samples the family on the grid.  Requires n >= 32 j so the oscillation is
/// resolved; each plateau must cover at least 5% of the nodes (the tensor
/// window thins with m, so very deep grids are rejected).
OscillationFamily build_family(const Grid& grid, int j, double xi);

/// kappa applied to every component of every node value.
GridField apply_map(const GridField& u, const ScalarMap& kappa);

struct NonuniformRow {
  int j = 0;
  double kappa_gap = 0.0;   ///< [kappa o u_j - kappa o v_j]_{W^{s,p}}
  double input_norm = 0.0;  ///< ||u_j - v_j||_{W^{s,p}}, constant in j
};

struct NonuniformReport {
  std::vector<NonuniformRow> rows;
  double slope = 0.0;        ///< log-log fit of kappa_gap against j
  double witness_gap = 0.0;  ///< kappa(tau+xi)-kappa(tau)-kappa(sigma+xi)+kappa(sigma)
};

/// Sweeps the family over the frequencies in js.  The input norm stays fixed
/// while the composition gap grows like j^s; a kappa whose plateau witness
/// vanishes (affine maps in particular) is rejected with WitnessError.
NonuniformReport nonuniform_demo(const Grid& grid, const std::vector<int>& js, double xi,
                                 const ScalarMap& kappa, const SobolevParams& params,
                                 int workers = 0);

struct ContinuityRow {
  double kappa_gap = 0.0;   ///< [kappa o u - kappa o v_k]_{W^{s,p}}
  double input_dist = 0.0;  ///< ||u - v_k||_{W^{s,p}}
};

/// Evaluates the composition gap along a perturbation sweep on u's grid;
/// the gap vanishes with the input distance (continuity, in contrast to the
/// nonuniform sweep above).
std::vector<ContinuityRow> continuity_demo(const GridField& u,
                                           const std::vector<GridField>& perturbed,
                                           const ScalarMap& kappa,
                                           const SobolevParams& params, int workers = 0);

}  // namespace wsp
