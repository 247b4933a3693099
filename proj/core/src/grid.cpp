#include "wsp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace wsp {

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Grid::Grid(int m_, int n_, double half_width_) : m(m_), n(n_), half_width(half_width_) {
  if (m < 1) throw Error("Grid: dimension m must be >= 1, got " + std::to_string(m));
  if (n < 1) throw Error("Grid: cells per axis must be >= 1, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error("Grid: half-width must be positive and finite");
  }
  // Guard against index overflow; desk-scale grids stay far below this.
  double count = 1.0;
  for (int a = 0; a < m; ++a) count *= n;
  if (count > 1e15) throw Error("Grid: node count overflows addressable range");
}

std::size_t Grid::node_count() const noexcept {
  std::size_t c = 1;
  for (int a = 0; a < m; ++a) c *= static_cast<std::size_t>(n);
  return c;
}

int Grid::containing_cell(double x) const noexcept {
  const int i = static_cast<int>(std::floor((x + half_width) / cell_size()));
  return std::clamp(i, 0, n - 1);
}

void Grid::flat_to_multi(std::size_t flat, int* idx) const noexcept {
  for (int a = m - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
}

std::size_t Grid::multi_to_flat(const int* idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < m; ++a) {
    flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

void Grid::node_position(std::size_t flat, double* x) const noexcept {
  for (int a = m - 1; a >= 0; --a) {
    const int i = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
    x[a] = axis_coord(i);
  }
}

bool Grid::compatible(const Grid& other) const noexcept {
  return m == other.m && n == other.n &&
         close_rel(half_width, other.half_width, 1e-12);
}

GridField::GridField(Grid g, int nu_, double fill)
    : grid(g), nu(nu_), values(g.node_count() * static_cast<std::size_t>(nu_), fill) {
  if (nu < 1) throw Error("GridField: component count nu must be >= 1");
}

void GridField::require_same_shape(const GridField& other, const std::string& what) const {
  if (!grid.compatible(other.grid)) {
    throw DimensionError(what + ": operands live on different grids");
  }
  if (nu != other.nu) {
    throw DimensionError(what + ": operands have different component counts (" +
                         std::to_string(nu) + " vs " + std::to_string(other.nu) + ")");
  }
}

GridField subtract(const GridField& u, const GridField& v) {
  u.require_same_shape(v, "subtract");
  GridField d(u.grid, u.nu);
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = u.values[i] - v.values[i];
  return d;
}

GridField resample_scaled(const GridField& u, double gamma, const Grid& new_grid) {
  if (gamma < 0.0 || !std::isfinite(gamma)) {
    throw Error("resample_scaled: margin gamma must be >= 0");
  }
  if (new_grid.m != u.grid.m) {
    throw DimensionError("resample_scaled: dimension mismatch");
  }
  const double want = (1.0 + 2.0 * gamma) * u.grid.half_width;
  if (!close_rel(new_grid.half_width, want, 1e-12)) {
    throw Error("resample_scaled: new grid half-width must equal (1+2*gamma)*R");
  }
  if (gamma == 0.0) {
    if (!(new_grid == u.grid)) {
      throw Error("resample_scaled: gamma = 0 requires an identical grid");
    }
    return u;
  }

  const int m = u.grid.m;
  const double shrink = 1.0 / (1.0 + 2.0 * gamma);
  GridField out(new_grid, u.nu);
  std::vector<double> x(static_cast<std::size_t>(m));
  std::vector<int> src(static_cast<std::size_t>(m));
  const std::size_t count = new_grid.node_count();
  for (std::size_t node = 0; node < count; ++node) {
    new_grid.node_position(node, x.data());
    for (int a = 0; a < m; ++a) src[a] = u.grid.containing_cell(x[a] * shrink);
    const std::size_t from = u.grid.multi_to_flat(src.data());
    auto dst = out.at(node);
    auto val = u.at(from);
    std::copy(val.begin(), val.end(), dst.begin());
  }
  return out;
}

GridField extend_by_cells(const GridField& u, int cells) {
  if (cells < 0) throw Error("extend_by_cells: cell margin must be >= 0");
  if (cells == 0) return u;
  const double gamma = static_cast<double>(cells) / static_cast<double>(u.grid.n);
  Grid bigger(u.grid.m, u.grid.n + 2 * cells,
              (1.0 + 2.0 * gamma) * u.grid.half_width);
  return resample_scaled(u, gamma, bigger);
}

GridField crop_centered(const GridField& u, const Grid& target) {
  if (target.m != u.grid.m) throw DimensionError("crop_centered: dimension mismatch");
  const int diff = u.grid.n - target.n;
  if (diff < 0 || diff % 2 != 0) {
    throw Error("crop_centered: target does not embed as a centered sub-block");
  }
  const int c = diff / 2;
  if (!close_rel(target.cell_size(), u.grid.cell_size(), 1e-12) ||
      !close_rel(target.half_width, u.grid.half_width - c * u.grid.cell_size(), 1e-12)) {
    throw Error("crop_centered: target nodes do not align with source nodes");
  }
  if (c == 0) return u;

  const int m = u.grid.m;
  GridField out(target, u.nu);
  std::vector<int> idx(static_cast<std::size_t>(m));
  const std::size_t count = target.node_count();
  for (std::size_t node = 0; node < count; ++node) {
    target.flat_to_multi(node, idx.data());
    for (int a = 0; a < m; ++a) idx[a] += c;
    const std::size_t from = u.grid.multi_to_flat(idx.data());
    auto dst = out.at(node);
    auto val = u.at(from);
    std::copy(val.begin(), val.end(), dst.begin());
  }
  return out;
}

}  // namespace wsp
