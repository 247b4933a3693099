#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsp/grid.hpp"
#include "wsp/manifold.hpp"
#include "wsp/params.hpp"

namespace wsp {

// Dyadic cubication of the cube into 2^{jm} congruent subcubes aligned with
// the grid; requires N divisible by 2^j.  Cubes are enumerated in
// lexicographic multi-index order (first axis slowest), matching nodes.
struct DyadicCubication {
  Grid grid;
  int level = 1;     // j
  int per_side = 2;  // 2^j
  int cells = 1;     // grid cells per cube side, N / 2^j

  DyadicCubication(const Grid& g, int j);

  std::int64_t cube_count() const noexcept;
  double side() const noexcept;      // 2R / 2^j
  double measure() const noexcept;   // side^m
  double diameter() const noexcept;  // side * sqrt(m)

  std::int64_t cube_of_node(std::size_t flat) const noexcept;
  void cube_to_multi(std::int64_t cube, int* idx) const noexcept;
  double lower(int axis_index) const noexcept;  // lower corner coordinate

  // sup of |x - y| over corner pairs of the two cubes (corner coordinates,
  // not sampled nodes); delta(c, c) equals the diameter.
  double delta(std::int64_t c1, std::int64_t c2) const;

  // flat node ids of a cube in increasing node order
  std::vector<std::size_t> cube_nodes(std::int64_t cube) const;
};

// A field constant on each cube of a cubication.
struct StepField {
  DyadicCubication cubication;
  int nu = 1;
  std::vector<double> cube_values;  // cube_count * nu, cube-major

  StepField(DyadicCubication c, int nu_);

  std::span<double> at(std::int64_t cube) noexcept {
    return {cube_values.data() + static_cast<std::size_t>(cube) * static_cast<std::size_t>(nu),
            static_cast<std::size_t>(nu)};
  }
  std::span<const double> at(std::int64_t cube) const noexcept {
    return {cube_values.data() + static_cast<std::size_t>(cube) * static_cast<std::size_t>(nu),
            static_cast<std::size_t>(nu)};
  }

  // Expansion onto the grid; per-cube constancy is exact (values copied).
  GridField to_field() const;
};

// E_j: per-cube arithmetic mean of v.  Idempotent: projecting a field that is
// already constant per cube reproduces it bitwise.
StepField haar_project(const GridField& v, int j, int workers = 0);

struct LpContraction {
  double lhs = 0.0;  // ||E_j v||_p
  double rhs = 0.0;  // ||v||_p
};

// Discrete Jensen: lhs <= rhs up to round-off.
LpContraction audit_lp_contraction(const GridField& v, int j, double p);

// [E_j v] / [v]; requires sp < 1 (RegimeError otherwise) and [v] > 0.
double audit_seminorm_bound(const GridField& v, int j, const SobolevParams& params,
                            int workers = 0);

struct CubePairCheck {
  double lhs = 0.0;       // pair quadrature of int_sigma int_rho |x-y|^-(m+sp)
  double rhs_unit = 0.0;  // |sigma| |rho| / delta^(m+sp)
  double delta = 0.0;
};

// Same-cube pairs exclude identical nodes only, matching the seminorm
// engine's diagonal rule.  Requires sp < 1.
CubePairCheck cube_pair_kernel_check(const DyadicCubication& cub, std::int64_t c1,
                                     std::int64_t c2, const SobolevParams& params);

struct ClampResult {
  StepField field;            // u_j
  std::vector<char> clamped;  // per cube
  std::int64_t clamp_count = 0;
};

// u_j: keep a cube value whose distance to N is < iota, replace by b
// otherwise; b must lie on N.  Outputs stay within the closed tube.
ClampResult clamp_to_tube(const StepField& e, const ManifoldTarget& target,
                          const std::vector<double>& b);

struct AjClaimReport {
  double lhs = 0.0;         // [E_j u - u_j]
  double rhs_diff = 0.0;    // [E_j u - u]
  double rhs_local = 0.0;   // [u] restricted to A_j
  double aj_measure = 0.0;  // |A_j|
  std::int64_t aj_nodes = 0;
};

// A_j = nodes whose containing cube gets clamped; empty A_j forces lhs = 0.
AjClaimReport audit_aj_claim(const GridField& u, int j, const SobolevParams& params,
                             const ManifoldTarget& target, const std::vector<double>& b,
                             int workers = 0);

}  // namespace wsp
