#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wsp/common.hpp"

namespace wsp {

/// Uniform cell-centered grid on the open cube (-R, R)^m.
///
/// Each axis is split into `n` cells of size h = 2R/n; node i sits at the
/// cell center -R + (i + 1/2)h, so no node ever lies on the boundary or at
/// the origin for even n.  Nodes are enumerated in lexicographic multi-index
/// order (first axis slowest).
struct Grid {
  int m = 1;             ///< domain dimension
  int n = 1;             ///< cells per axis
  double half_width = 1.0;

  Grid() = default;
  Grid(int m_, int n_, double half_width_ = 1.0);

  double cell_size() const noexcept { return 2.0 * half_width / n; }
  std::size_t node_count() const noexcept;

  /// Cell-center coordinate of index i on one axis.
  double axis_coord(int i) const noexcept {
    return -half_width + (i + 0.5) * cell_size();
  }

  /// Index of the cell containing coordinate x on one axis (the nearest
  /// node for cell-centered grids).  Exact cell-boundary ties resolve to the
  /// upper cell; the result is clamped into [0, n).
  int containing_cell(double x) const noexcept;

  void flat_to_multi(std::size_t flat, int* idx) const noexcept;
  std::size_t multi_to_flat(const int* idx) const noexcept;
  void node_position(std::size_t flat, double* x) const noexcept;

  bool operator==(const Grid& other) const noexcept = default;

  /// Grids agree up to floating-point tolerance on the half-width.
  bool compatible(const Grid& other) const noexcept;
};

/// Discrete map u : grid nodes -> R^nu, stored node-major.
struct GridField {
  Grid grid;
  int nu = 1;                  ///< components per node
  std::vector<double> values;  ///< node_count * nu doubles

  GridField() = default;
  GridField(Grid g, int nu_, double fill = 0.0);

  std::span<double> at(std::size_t node) noexcept {
    return {values.data() + node * static_cast<std::size_t>(nu),
            static_cast<std::size_t>(nu)};
  }
  std::span<const double> at(std::size_t node) const noexcept {
    return {values.data() + node * static_cast<std::size_t>(nu),
            static_cast<std::size_t>(nu)};
  }

  std::size_t node_count() const noexcept { return grid.node_count(); }

  /// Throws DimensionError unless `other` lives on a compatible grid with the
  /// same component count.  `what` names the operation for the message.
  void require_same_shape(const GridField& other, const std::string& what) const;
};

/// u - v nodewise (same grid, same nu).
GridField subtract(const GridField& u, const GridField& v);

/// Extends u to a cube scaled by (1 + 2*gamma) by nearest-node resampling:
/// the new value at x is u at the node of u.grid nearest to x / (1 + 2*gamma).
/// Values are copied verbatim, so the value set never grows and
/// manifold-valued inputs stay manifold-valued.  Requires
/// new_grid.half_width == (1 + 2*gamma) * u.grid.half_width (rel. 1e-12) and
/// gamma > 0, except that gamma == 0 with an identical grid is the identity.
GridField resample_scaled(const GridField& u, double gamma, const Grid& new_grid);

/// Convenience wrapper for resample_scaled that extends by `cells` whole
/// cells per side (gamma = cells / n), keeping the cell size and node
/// alignment of the input grid.
GridField extend_by_cells(const GridField& u, int cells);

/// Extracts the centered sub-block of `u` living on `target` (same cell size
/// and node alignment, smaller extent).  Values are copied verbatim.
GridField crop_centered(const GridField& u, const Grid& target);

}  // namespace wsp
