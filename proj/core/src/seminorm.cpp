#include "wsp/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wsp/common.hpp"

namespace wsp {

namespace {

// Inner pair loop over the last axis, continuing the running row sum `acc`
// so the whole row stays one plain left-to-right sum.  `kcenter[d]` is the
// kernel value for index offset d on that axis given the accumulated prefix
// offset; the diagonal entry is zero, so same-node pairs vanish without a
// branch.  PM: 0 -> p == 2, 1 -> p == 1, 2 -> general p, 3 -> kernel mass.
template <int NU, int PM>
double row_pairs(double acc, const double* ui, const double* ubase, int n, int i_last,
                 const double* kcenter, double p_half) {
  for (int k = 0; k < n; ++k) {
    const double kern = kcenter[i_last - k];
    double t;
    if constexpr (PM == 3) {
      t = 1.0;
    } else {
      double d2;
      if constexpr (NU == 1) {
        const double d0 = ui[0] - ubase[k];
        d2 = d0 * d0;
      } else if constexpr (NU == 2) {
        const double* uk = ubase + 2 * static_cast<std::size_t>(k);
        const double d0 = ui[0] - uk[0];
        const double d1 = ui[1] - uk[1];
        d2 = d0 * d0 + d1 * d1;
      } else {
        const double* uk = ubase + 3 * static_cast<std::size_t>(k);
        const double d0 = ui[0] - uk[0];
        const double d1 = ui[1] - uk[1];
        const double d2c = ui[2] - uk[2];
        d2 = d0 * d0 + d1 * d1 + d2c * d2c;
      }
      if constexpr (PM == 0) {
        t = d2;
      } else if constexpr (PM == 1) {
        t = std::sqrt(d2);
      } else {
        t = std::pow(d2, p_half);
      }
    }
    acc += t * kern;
  }
  return acc;
}

using RowFn = double (*)(double, const double*, const double*, int, int, const double*, double);

template <int PM>
RowFn pick_nu(int nu) {
  switch (nu) {
    case 1: return &row_pairs<1, PM>;
    case 2: return &row_pairs<2, PM>;
    case 3: return &row_pairs<3, PM>;
    default: return nullptr;
  }
}

RowFn pick_row_fn(int nu, double p) {
  if (p == 2.0) return pick_nu<0>(nu);
  if (p == 1.0) return pick_nu<1>(nu);
  return pick_nu<2>(nu);
}

double abs_pow(double d2, double p, double p_half) {
  if (p == 2.0) return d2;
  if (p == 1.0) return std::sqrt(d2);
  return std::pow(d2, p_half);
}

}  // namespace

struct SeminormEngine::Impl {
  Grid grid;
  SobolevParams params;
  int workers;

  double h;        // cell size
  double h2;       // h*h, squared-offset scale
  double hm;       // h^m, node quadrature weight
  double exponent; // -(m+sp)/2, applied to squared distances
  double p_half;   // p/2 for |diff|^p = (d2)^{p/2}

  std::vector<double> r2_table;       // kernel by squared index offset; [0] = 0
  std::vector<double> slices;         // rows of kernel values along the last axis
  std::vector<std::int32_t> slice_row;  // prefix squared offset -> row, -1 if absent
  std::int64_t max_prefix_r2 = 0;

  mutable std::vector<double> row_sums;  // R_i, built on demand
  mutable bool row_sums_built = false;

  Impl(const Grid& g, const SobolevParams& prm, int wrk)
      : grid(g), params(prm), workers(resolve_workers(wrk)) {
    if (grid.m > 8) throw Error("SeminormEngine: dimension too large");
    params.validate();
    h = grid.cell_size();
    h2 = h * h;
    hm = 1.0;
    for (int a = 0; a < grid.m; ++a) hm *= h;
    exponent = -0.5 * (grid.m + params.sp());
    p_half = 0.5 * params.p;

    const std::int64_t dmax = grid.n - 1;
    const std::int64_t max_r2 = static_cast<std::int64_t>(grid.m) * dmax * dmax;
    r2_table.resize(static_cast<std::size_t>(max_r2) + 1);
    r2_table[0] = 0.0;
    for (std::int64_t r2 = 1; r2 <= max_r2; ++r2) {
      r2_table[static_cast<std::size_t>(r2)] = kernel_value(r2);
    }
    build_slices();
  }

  double kernel_value(std::int64_t r2) const {
    return r2 == 0 ? 0.0 : std::pow(h2 * static_cast<double>(r2), exponent);
  }

  void build_slices() {
    const std::int64_t dmax = grid.n - 1;
    max_prefix_r2 = static_cast<std::int64_t>(grid.m - 1) * dmax * dmax;
    slice_row.assign(static_cast<std::size_t>(max_prefix_r2) + 1, -1);

    // Reachable prefix offsets (sums of m-1 squared axis offsets) by
    // axis-at-a-time reachability over the value range.
    std::vector<char> seen(static_cast<std::size_t>(max_prefix_r2) + 1, 0);
    seen[0] = 1;
    for (int a = 0; a < grid.m - 1; ++a) {
      std::vector<char> next(seen.size(), 0);
      for (std::size_t v = 0; v < seen.size(); ++v) {
        if (!seen[v]) continue;
        for (std::int64_t d = 0; d <= dmax; ++d) {
          next[v + static_cast<std::size_t>(d * d)] = 1;
        }
      }
      seen.swap(next);
    }
    std::vector<std::int64_t> prefixes;
    for (std::size_t v = 0; v < seen.size(); ++v) {
      if (seen[v]) prefixes.push_back(static_cast<std::int64_t>(v));
    }

    const std::size_t width = 2 * static_cast<std::size_t>(grid.n) - 1;
    const std::size_t total = prefixes.size() * width;
    if (total > (std::size_t{1} << 26)) return;  // fall back to gather lookups

    slices.resize(total);
    for (std::size_t r = 0; r < prefixes.size(); ++r) {
      slice_row[static_cast<std::size_t>(prefixes[r])] = static_cast<std::int32_t>(r);
      double* row = slices.data() + r * width;
      const std::int64_t pre = prefixes[r];
      for (std::int64_t d = -dmax; d <= dmax; ++d) {
        row[static_cast<std::size_t>(d + dmax)] = kernel_value(pre + d * d);
      }
    }
  }

  const double* slice_center(std::int64_t prefix_r2) const {
    if (slices.empty()) return nullptr;
    const std::int32_t r = slice_row[static_cast<std::size_t>(prefix_r2)];
    const std::size_t width = 2 * static_cast<std::size_t>(grid.n) - 1;
    return slices.data() + static_cast<std::size_t>(r) * width +
           static_cast<std::size_t>(grid.n - 1);
  }

  // Generic row: gathers kernel values from the squared-offset table and
  // supports an optional 0/1 node mask restricting both pair endpoints.
  double row_generic(const GridField& u, std::size_t i, const int* I,
                     const std::uint8_t* mask, bool mass_only) const {
    const int m = grid.m;
    const int nu = u.nu;
    const double* ui = u.values.data() + i * static_cast<std::size_t>(nu);
    const double p = params.p;

    std::vector<int> K(static_cast<std::size_t>(m), 0);
    double acc = 0.0;
    const std::size_t count = grid.node_count();
    for (std::size_t k = 0; k < count; ++k) {
      grid.flat_to_multi(k, K.data());
      if (mask && !mask[k]) continue;
      std::int64_t r2 = 0;
      for (int a = 0; a < m; ++a) {
        const std::int64_t d = I[a] - K[a];
        r2 += d * d;
      }
      const double kern = r2_table[static_cast<std::size_t>(r2)];
      double t = 1.0;
      if (!mass_only) {
        const double* uk = u.values.data() + k * static_cast<std::size_t>(nu);
        double d2 = 0.0;
        for (int c = 0; c < nu; ++c) {
          const double d = ui[c] - uk[c];
          d2 += d * d;
        }
        t = abs_pow(d2, p, p_half);
      }
      acc += t * kern;
    }
    return acc;
  }

  // Fast row: streams kernel slices along the last axis.
  double row_fast(const GridField& u, const int* I, RowFn fn) const {
    const int m = grid.m;
    const int n = grid.n;
    const int nu = u.nu;
    const double* uvals = u.values.data();
    const double* ui =
        uvals + grid.multi_to_flat(I) * static_cast<std::size_t>(nu);

    double acc = 0.0;
    if (m == 1) {
      return fn(acc, ui, uvals, n, I[0], slice_center(0), p_half);
    }

    std::vector<int> K(static_cast<std::size_t>(m - 1), 0);
    while (true) {
      std::int64_t prefix_r2 = 0;
      std::size_t base = 0;
      for (int a = 0; a < m - 1; ++a) {
        const std::int64_t d = I[a] - K[a];
        prefix_r2 += d * d;
        base = base * static_cast<std::size_t>(n) + static_cast<std::size_t>(K[a]);
      }
      base *= static_cast<std::size_t>(n);
      acc = fn(acc, ui, uvals + base * static_cast<std::size_t>(nu), n, I[m - 1],
               slice_center(prefix_r2), p_half);

      int a = m - 2;
      while (a >= 0 && ++K[a] == n) K[a--] = 0;
      if (a < 0) break;
    }
    return acc;
  }

  std::vector<double> compute_rows(const GridField& u, const std::uint8_t* mask,
                                   bool mass_only) const {
    const std::size_t count = grid.node_count();
    std::vector<double> rows(count, 0.0);
    const RowFn fn = (!mask && !slices.empty() && !mass_only)
                         ? pick_row_fn(u.nu, params.p)
                         : (!mask && !slices.empty() && mass_only ? pick_nu<3>(1)
                                                                  : nullptr);
    parallel_for_blocks(count, workers, [&](std::size_t i) {
      if (mask && !mask[i]) return;
      int I[8];
      grid.flat_to_multi(i, I);
      if (fn) {
        rows[i] = row_fast(u, I, fn);
      } else {
        rows[i] = row_generic(u, i, I, mask, mass_only);
      }
    });
    return rows;
  }
};

SeminormEngine::SeminormEngine(const Grid& grid, const SobolevParams& params, int workers)
    : impl_(std::make_unique<Impl>(grid, params, workers)) {}

SeminormEngine::~SeminormEngine() = default;
SeminormEngine::SeminormEngine(SeminormEngine&&) noexcept = default;
SeminormEngine& SeminormEngine::operator=(SeminormEngine&&) noexcept = default;

const Grid& SeminormEngine::grid() const noexcept { return impl_->grid; }
const SobolevParams& SeminormEngine::params() const noexcept { return impl_->params; }

namespace {

void check_region(const GridField& u, const std::vector<std::uint8_t>* region,
                  std::size_t* region_count) {
  if (!region) {
    *region_count = u.node_count();
    return;
  }
  if (region->size() != u.node_count()) {
    throw DimensionError("region mask size does not match the grid");
  }
  std::size_t c = 0;
  for (auto b : *region) c += (b != 0);
  if (c == 0) throw Error("region is empty");
  *region_count = c;
}

}  // namespace

std::vector<double> SeminormEngine::power_rows(
    const GridField& u, const std::vector<std::uint8_t>* region) const {
  if (!u.grid.compatible(impl_->grid)) {
    throw DimensionError("seminorm: field grid does not match engine grid");
  }
  std::size_t region_count = 0;
  check_region(u, region, &region_count);
  return impl_->compute_rows(u, region ? region->data() : nullptr, false);
}

GridField SeminormEngine::dsp_power(const GridField& u) const {
  const auto rows = power_rows(u);
  GridField out(u.grid, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) out.values[i] = rows[i] * impl_->hm;
  return out;
}

SeminormReport SeminormEngine::seminorm(const GridField& u,
                                        const std::vector<std::uint8_t>* region) const {
  std::size_t region_count = 0;
  check_region(u, region, &region_count);
  const auto rows = power_rows(u, region);

  // Same term set and order as summing dsp_power * h^m over nodes.
  NeumaierSum total;
  for (double r : rows) {
    const double dsp_p = r * impl_->hm;
    total.add(dsp_p * impl_->hm);
  }
  SeminormReport rep;
  rep.seminorm_p = std::max(0.0, total.value());
  rep.seminorm = std::pow(rep.seminorm_p, 1.0 / impl_->params.p);
  rep.region_size = region_count;
  rep.pair_count = static_cast<std::uint64_t>(region_count) *
                   static_cast<std::uint64_t>(region_count - 1);
  return rep;
}

double SeminormEngine::lp_norm(const GridField& u) const {
  return wsp::lp_norm(u, impl_->params.p);
}

NormParts SeminormEngine::norm_parts(const GridField& u) const {
  NormParts parts;
  parts.lp = lp_norm(u);
  parts.seminorm = seminorm(u).seminorm;
  return parts;
}

const std::vector<double>& SeminormEngine::kernel_row_sums() const {
  if (!impl_->row_sums_built) {
    GridField dummy(impl_->grid, 1);  // values unused in mass-only rows
    impl_->row_sums = impl_->compute_rows(dummy, nullptr, true);
    impl_->row_sums_built = true;
  }
  return impl_->row_sums;
}

NormParts SeminormEngine::sparse_norm_parts(const GridField& w) const {
  if (!w.grid.compatible(impl_->grid)) {
    throw DimensionError("sparse_norm_parts: field grid does not match engine grid");
  }
  const auto& R = kernel_row_sums();
  const int m = impl_->grid.m;
  const int nu = w.nu;
  const double p = impl_->params.p;
  const double hm = impl_->hm;

  // Support = nodes with any exactly nonzero component (node order).
  std::vector<std::size_t> support;
  const std::size_t count = w.node_count();
  for (std::size_t i = 0; i < count; ++i) {
    auto v = w.at(i);
    bool nz = false;
    for (double c : v) nz = nz || (c != 0.0);
    if (nz) support.push_back(i);
  }
  if (support.empty()) return {};

  std::vector<int> midx(support.size() * static_cast<std::size_t>(m));
  for (std::size_t si = 0; si < support.size(); ++si) {
    impl_->grid.flat_to_multi(support[si], midx.data() + si * static_cast<std::size_t>(m));
  }

  NeumaierSum sem_total;
  NeumaierSum lp_total;
  for (std::size_t si = 0; si < support.size(); ++si) {
    const std::size_t i = support[si];
    const double* wi = w.values.data() + i * static_cast<std::size_t>(nu);
    const int* Ii = midx.data() + si * static_cast<std::size_t>(m);

    double pair_part = 0.0;   // sum over support pairs
    double mass_in = 0.0;     // kernel mass toward support nodes
    for (std::size_t sk = 0; sk < support.size(); ++sk) {
      const int* Ik = midx.data() + sk * static_cast<std::size_t>(m);
      std::int64_t r2 = 0;
      for (int a = 0; a < m; ++a) {
        const std::int64_t d = Ii[a] - Ik[a];
        r2 += d * d;
      }
      const double kern = impl_->r2_table[static_cast<std::size_t>(r2)];
      mass_in += kern;
      const double* wk = w.values.data() + support[sk] * static_cast<std::size_t>(nu);
      double d2 = 0.0;
      for (int c = 0; c < nu; ++c) {
        const double d = wi[c] - wk[c];
        d2 += d * d;
      }
      pair_part += abs_pow(d2, p, impl_->p_half) * kern;
    }

    double wi2 = 0.0;
    for (int c = 0; c < nu; ++c) wi2 += wi[c] * wi[c];
    const double wi_p = abs_pow(wi2, p, impl_->p_half);

    // Pairs with one endpoint outside the support (both orientations).
    const double row = pair_part + 2.0 * wi_p * (R[i] - mass_in);
    sem_total.add((row * hm) * hm);
    lp_total.add(wi_p * hm);
  }

  NormParts parts;
  parts.lp = std::pow(std::max(0.0, lp_total.value()), 1.0 / p);
  parts.seminorm = std::pow(std::max(0.0, sem_total.value()), 1.0 / p);
  return parts;
}

SeminormReport gagliardo(const GridField& u, const SobolevParams& params,
                         const std::vector<std::uint8_t>* region, int workers) {
  SeminormEngine engine(u.grid, params, workers);
  return engine.seminorm(u, region);
}

GridField dsp_power_field(const GridField& u, const SobolevParams& params, int workers) {
  SeminormEngine engine(u.grid, params, workers);
  return engine.dsp_power(u);
}

GridField dsp_field(const GridField& u, const SobolevParams& params, int workers) {
  GridField out = dsp_power_field(u, params, workers);
  const double inv_p = 1.0 / params.p;
  for (double& v : out.values) v = std::pow(std::max(0.0, v), inv_p);
  return out;
}

double lp_norm(const GridField& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("lp_norm: require 1 <= p < inf");
  double hm = 1.0;
  for (int a = 0; a < u.grid.m; ++a) hm *= u.grid.cell_size();
  const double p_half = 0.5 * p;
  NeumaierSum total;
  const std::size_t count = u.node_count();
  for (std::size_t i = 0; i < count; ++i) {
    auto v = u.at(i);
    double d2 = 0.0;
    for (double c : v) d2 += c * c;
    total.add(abs_pow(d2, p, p_half) * hm);
  }
  return std::pow(std::max(0.0, total.value()), 1.0 / p);
}

double wsp_distance(const GridField& u, const GridField& v, const SobolevParams& params,
                    int workers) {
  u.require_same_shape(v, "wsp_distance");
  const GridField diff = subtract(u, v);
  const NormParts parts = wsp_norm_parts(diff, params, workers);
  return parts.full();
}

NormParts wsp_norm_parts(const GridField& u, const SobolevParams& params, int workers) {
  SeminormEngine engine(u.grid, params, workers);
  return engine.norm_parts(u);
}

double w1q_norm(const GridField& u, double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error("w1q_norm: require 1 <= q < inf");
  if (u.grid.n < 3) {
    throw Error("w1q_norm: need at least 3 cells per axis for difference quotients");
  }
  const int m = u.grid.m;
  const int n = u.grid.n;
  const int nu = u.nu;
  const double h = u.grid.cell_size();

  double hm = 1.0;
  for (int a = 0; a < m; ++a) hm *= h;
  const double q_half = 0.5 * q;

  NeumaierSum grad_total;
  std::vector<int> I(static_cast<std::size_t>(m));
  const std::size_t count = u.node_count();
  for (std::size_t i = 0; i < count; ++i) {
    u.grid.flat_to_multi(i, I.data());
    double fro2 = 0.0;  // squared Frobenius norm of the nu x m Jacobian
    for (int a = 0; a < m; ++a) {
      std::size_t fwd = i, bwd = i;
      double denom;
      std::size_t stride = 1;
      for (int b = m - 1; b > a; --b) stride *= static_cast<std::size_t>(n);
      if (I[a] == 0) {
        fwd = i + stride;
        denom = h;
      } else if (I[a] == n - 1) {
        bwd = i - stride;
        denom = h;
      } else {
        fwd = i + stride;
        bwd = i - stride;
        denom = 2.0 * h;
      }
      auto uf = u.at(fwd);
      auto ub = u.at(bwd);
      for (int c = 0; c < nu; ++c) {
        const double g = (uf[static_cast<std::size_t>(c)] - ub[static_cast<std::size_t>(c)]) / denom;
        fro2 += g * g;
      }
    }
    grad_total.add(abs_pow(fro2, q, q_half) * hm);
  }
  const double grad_norm = std::pow(std::max(0.0, grad_total.value()), 1.0 / q);
  return lp_norm(u, q) + grad_norm;
}

double gn_ratio(const GridField& w, const SobolevParams& params, double q, double r,
                int workers) {
  const double p = params.p;
  const double s = params.s;
  if (!(1.0 < q && q < p && p < r)) {
    throw Error("gn_ratio: require 1 < q < p < r");
  }
  const double relation = 1.0 / p - (1.0 - s) / r - s / q;
  if (std::abs(relation) > 1e-12) {
    throw Error("gn_ratio: exponent relation 1/p = (1-s)/r + s/q violated");
  }
  const double lr = lp_norm(w, r);
  if (lr == 0.0) throw Error("gn_ratio: field vanishes identically");

  const NormParts parts = wsp_norm_parts(w, params, workers);
  const double w1q = w1q_norm(w, q);
  return parts.full() / (std::pow(lr, 1.0 - s) * std::pow(w1q, s));
}

}  // namespace wsp
