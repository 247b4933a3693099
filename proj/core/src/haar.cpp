#include "wsp/haar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wsp/common.hpp"
#include "wsp/seminorm.hpp"

namespace wsp {

DyadicCubication::DyadicCubication(const Grid& g, int j) : grid(g), level(j) {
  if (j < 1 || j > 24) throw Error("cubication level must lie in [1, 24]");
  if (grid.m > 8) throw DimensionError("cubication supports m <= 8");
  per_side = 1 << j;
  if (grid.n % per_side != 0) {
    throw Error("grid size " + std::to_string(grid.n) + " is not divisible by 2^" +
                std::to_string(j));
  }
  cells = grid.n / per_side;
}

std::int64_t DyadicCubication::cube_count() const noexcept {
  std::int64_t c = 1;
  for (int a = 0; a < grid.m; ++a) c *= per_side;
  return c;
}

double DyadicCubication::side() const noexcept {
  return 2.0 * grid.half_width / per_side;
}

double DyadicCubication::measure() const noexcept {
  return std::pow(side(), grid.m);
}

double DyadicCubication::diameter() const noexcept {
  return side() * std::sqrt(static_cast<double>(grid.m));
}

std::int64_t DyadicCubication::cube_of_node(std::size_t flat) const noexcept {
  int idx[8];
  grid.flat_to_multi(flat, idx);
  std::int64_t cube = 0;
  for (int a = 0; a < grid.m; ++a) cube = cube * per_side + idx[a] / cells;
  return cube;
}

void DyadicCubication::cube_to_multi(std::int64_t cube, int* idx) const noexcept {
  for (int a = grid.m - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(cube % per_side);
    cube /= per_side;
  }
}

double DyadicCubication::lower(int axis_index) const noexcept {
  return -grid.half_width + axis_index * side();
}

double DyadicCubication::delta(std::int64_t c1, std::int64_t c2) const {
  if (c1 < 0 || c1 >= cube_count() || c2 < 0 || c2 >= cube_count()) {
    throw Error("cube index out of range");
  }
  int i1[8];
  int i2[8];
  cube_to_multi(c1, i1);
  cube_to_multi(c2, i2);
  const double w = side();
  double s = 0.0;
  for (int a = 0; a < grid.m; ++a) {
    const double gap = std::abs(lower(i1[a]) - lower(i2[a])) + w;
    s += gap * gap;
  }
  return std::sqrt(s);
}

std::vector<std::size_t> DyadicCubication::cube_nodes(std::int64_t cube) const {
  if (cube < 0 || cube >= cube_count()) throw Error("cube index out of range");
  const int m = grid.m;
  int base[8];
  cube_to_multi(cube, base);
  for (int a = 0; a < m; ++a) base[a] *= cells;

  std::size_t total = 1;
  for (int a = 0; a < m; ++a) total *= static_cast<std::size_t>(cells);
  std::vector<std::size_t> out;
  out.reserve(total);

  int loc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  int idx[8];
  for (;;) {
    for (int a = 0; a < m; ++a) idx[a] = base[a] + loc[a];
    out.push_back(grid.multi_to_flat(idx));
    int a = m - 1;
    for (; a >= 0; --a) {
      if (++loc[a] < cells) break;
      loc[a] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

StepField::StepField(DyadicCubication c, int nu_) : cubication(std::move(c)), nu(nu_) {
  if (nu < 1) throw DimensionError("step field needs at least one component");
  cube_values.assign(static_cast<std::size_t>(cubication.cube_count()) *
                         static_cast<std::size_t>(nu),
                     0.0);
}

GridField StepField::to_field() const {
  GridField out(cubication.grid, nu);
  const std::int64_t nc = cubication.cube_count();
  for (std::int64_t c = 0; c < nc; ++c) {
    const auto vals = at(c);
    for (const std::size_t id : cubication.cube_nodes(c)) {
      std::copy(vals.begin(), vals.end(), out.at(id).begin());
    }
  }
  return out;
}

StepField haar_project(const GridField& v, int j, int workers) {
  DyadicCubication cub(v.grid, j);
  StepField out(cub, v.nu);
  parallel_for_blocks(static_cast<std::size_t>(cub.cube_count()), workers,
                      [&](std::size_t c) {
                        const auto nodes = out.cubication.cube_nodes(static_cast<std::int64_t>(c));
                        const auto f0 = v.at(nodes[0]);
                        const auto dst = out.at(static_cast<std::int64_t>(c));
                        for (int comp = 0; comp < v.nu; ++comp) {
                          // mean as f0 + mean of differences: exact when the
                          // cube is already constant, hence idempotent
                          NeumaierSum acc;
                          for (const std::size_t id : nodes) acc.add(v.at(id)[comp] - f0[comp]);
                          dst[comp] = f0[comp] + acc.value() / static_cast<double>(nodes.size());
                        }
                      });
  return out;
}

LpContraction audit_lp_contraction(const GridField& v, int j, double p) {
  if (!(p >= 1.0)) throw Error("p must be >= 1");
  StepField e = haar_project(v, j);
  return {lp_norm(e.to_field(), p), lp_norm(v, p)};
}

double audit_seminorm_bound(const GridField& v, int j, const SobolevParams& params,
                            int workers) {
  params.validate();
  if (!params.low_regime()) throw RegimeError("E_j seminorm bound requires sp < 1");
  const double denom = gagliardo(v, params, nullptr, workers).seminorm;
  if (denom == 0.0) throw Error("seminorm of v vanishes");
  const double numer =
      gagliardo(haar_project(v, j, workers).to_field(), params, nullptr, workers).seminorm;
  return numer / denom;
}

CubePairCheck cube_pair_kernel_check(const DyadicCubication& cub, std::int64_t c1,
                                     std::int64_t c2, const SobolevParams& params) {
  params.validate();
  if (!params.low_regime()) throw RegimeError("cube-pair kernel bound requires sp < 1");
  const Grid& g = cub.grid;
  const int m = g.m;
  const double h = g.cell_size();
  const double h2 = h * h;
  double hm = 1.0;
  for (int a = 0; a < m; ++a) hm *= h;
  const double ex = -0.5 * (m + params.sp());

  const auto n1 = cub.cube_nodes(c1);
  const auto n2 = cub.cube_nodes(c2);
  std::vector<int> m1(n1.size() * static_cast<std::size_t>(m));
  std::vector<int> m2(n2.size() * static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < n1.size(); ++i) g.flat_to_multi(n1[i], &m1[i * m]);
  for (std::size_t k = 0; k < n2.size(); ++k) g.flat_to_multi(n2[k], &m2[k * m]);

  NeumaierSum rows;
  for (std::size_t i = 0; i < n1.size(); ++i) {
    double row = 0.0;  // plain left-to-right, matching the seminorm reduction
    const int* a = &m1[i * static_cast<std::size_t>(m)];
    for (std::size_t k = 0; k < n2.size(); ++k) {
      if (n1[i] == n2[k]) continue;
      const int* b = &m2[k * static_cast<std::size_t>(m)];
      std::int64_t r2 = 0;
      for (int c = 0; c < m; ++c) {
        const std::int64_t d = a[c] - b[c];
        r2 += d * d;
      }
      row += std::pow(h2 * static_cast<double>(r2), ex);
    }
    rows.add(row * hm);
  }

  CubePairCheck out;
  out.delta = cub.delta(c1, c2);
  out.lhs = rows.value() * hm;
  out.rhs_unit =
      cub.measure() * cub.measure() / std::pow(out.delta, m + params.sp());
  return out;
}

ClampResult clamp_to_tube(const StepField& e, const ManifoldTarget& target,
                          const std::vector<double>& b) {
  if (e.nu != target.nu) throw DimensionError("step field arity does not match the manifold");
  if (static_cast<int>(b.size()) != target.nu) {
    throw DimensionError("clamp fallback has the wrong arity");
  }
  if (target.dist(b.data()) > 1e-9) throw Error("clamp fallback does not lie on the manifold");

  ClampResult out{e, std::vector<char>(static_cast<std::size_t>(e.cubication.cube_count()), 0), 0};
  const std::int64_t nc = e.cubication.cube_count();
  for (std::int64_t c = 0; c < nc; ++c) {
    if (target.dist(e.at(c).data()) < target.iota) continue;
    const auto dst = out.field.at(c);
    std::copy(b.begin(), b.end(), dst.begin());
    out.clamped[static_cast<std::size_t>(c)] = 1;
    ++out.clamp_count;
  }
  return out;
}

AjClaimReport audit_aj_claim(const GridField& u, int j, const SobolevParams& params,
                             const ManifoldTarget& target, const std::vector<double>& b,
                             int workers) {
  params.validate();
  if (!params.low_regime()) throw RegimeError("A_j claim requires sp < 1");
  if (u.nu != target.nu) throw DimensionError("field arity does not match the manifold");
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (target.dist(u.at(i).data()) > 1e-9) throw Error("field is not manifold-valued");
  }

  StepField ej = haar_project(u, j, workers);
  ClampResult cr = clamp_to_tube(ej, target, b);
  GridField eu = ej.to_field();

  AjClaimReport rep;
  rep.lhs = gagliardo(subtract(eu, cr.field.to_field()), params, nullptr, workers).seminorm;
  rep.rhs_diff = gagliardo(subtract(eu, u), params, nullptr, workers).seminorm;

  std::vector<std::uint8_t> region(u.node_count(), 0);
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (cr.clamped[static_cast<std::size_t>(ej.cubication.cube_of_node(i))]) {
      region[i] = 1;
      ++rep.aj_nodes;
    }
  }
  double hm = 1.0;
  for (int a = 0; a < u.grid.m; ++a) hm *= u.grid.cell_size();
  rep.aj_measure = static_cast<double>(rep.aj_nodes) * hm;
  rep.rhs_local =
      rep.aj_nodes == 0 ? 0.0 : gagliardo(u, params, &region, workers).seminorm;
  return rep;
}

}  // namespace wsp
