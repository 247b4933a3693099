#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsp/grid.hpp"
#include "wsp/haar.hpp"
#include "wsp/manifold.hpp"
#include "wsp/params.hpp"

namespace wsp {

// Configuration of the high-regime (sp >= 1) approximation.  q and r are the
// interpolation exponents tied by 1/p = (1-s)/r + s/q; q must satisfy
// sp <= q < floor(sp) + 1.  Zeros resolve to defaults: q to the midpoint of
// its admissible window (3/2 when sp = 1) and r from the relation.
struct HighRegimeConfig {
  double t = 0.25;        // mollification scale
  double gamma = 0.25;    // extension margin, >= t
  int n_shifts = 64;      // sampled shifts, >= 16
  std::uint64_t seed = 0;
  double eps_sing = 1e-6;  // clearance between a shift and the value set
  double q = 0.0;
  double r = 0.0;
};

// Validates the config against (s, p) and fills defaulted exponents.
HighRegimeConfig resolve_config(HighRegimeConfig cfg, const SobolevParams& params);

struct ApproximationReport {
  double d = 0.0;  // d_{s,p}(output, u)
  // triangle terms (high regime): |kappa_under o phi_t*u|, the kappa_bar
  // difference, and |kappa o u - u|; d <= t1 + t2 + t3 up to quadrature slack
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  std::vector<double> xi;  // chosen shift
  int shifts_sampled = 0;
  int shifts_accepted = 0;
  double score_min = 0.0;
  double score_max = 0.0;
  std::optional<int> winding_in;
  std::optional<int> winding_out;
  // low regime
  int level = 0;
  double t_chart = 0.0;
  std::int64_t clamp_count = 0;
  double unit_defect = 0.0;  // max | |v| - 1 | over output nodes
  std::vector<std::pair<std::string, double>> stages;
};

struct HighResult {
  GridField field;
  ApproximationReport report;
};

// Extend by gamma, mollify at t on the original cube, score every sampled
// shift (plus the zero shift) by |kappa_under_xi o (phi_t*u)|_{W^{s,p}},
// pick the clearance-passing shift of least norm (coordinates break ties),
// and return kappa_xi o (phi_t*u).
HighResult approximate_high(const GridField& u, const ManifoldTarget& target,
                            const HighRegimeConfig& cfg, const SobolevParams& params,
                            int workers = 0);

struct Claim8Report {
  double lhs_mc = 0.0;  // mean of score^p over shifts, times |B_alpha^nu|
  double rhs = 0.0;     // integral of (D^{s,p}u)^p over {|phi_t*u - u| >= alpha}
  std::int64_t exceptional_nodes = 0;
  int shifts_accepted = 0;
  double ball_measure = 0.0;
};

Claim8Report audit_claim8(const GridField& u, const ManifoldTarget& target,
                          const HighRegimeConfig& cfg, const SobolevParams& params,
                          int workers = 0);

struct LowResult {
  GridField field;
  ApproximationReport report;
};

// E_j, clamp to the tube, project onto N, smooth in a stereographic chart at
// scale t_chart (<= 0 resolves to 2^-j), and map back; requires sp < 1.
LowResult approximate_low(const GridField& u, const ManifoldTarget& target, int j,
                          const std::vector<double>& b, double t_chart,
                          const SobolevParams& params, int workers = 0);

}  // namespace wsp
