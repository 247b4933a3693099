#include "wsp/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wsp/common.hpp"
#include "wsp/seminorm.hpp"

namespace wsp {

namespace {

// Adaptive Simpson on [a, b]; the radial profile is smooth and flat at both
// ends, so this converges quickly to full double precision.
template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double eps) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48);
}

// Discrete kernel at scale t on grid spacing h: offsets within the open ball
// of radius t, weights renormalized to unit mass.
struct Stencil {
  int margin = 0;                       // output shrink in cells per side
  std::vector<std::vector<int>> offs;   // multi-offsets, lexicographic
  std::vector<std::ptrdiff_t> deltas;   // flat strides of the offsets
  std::vector<double> w;                // value weights, sum exactly 1
  std::vector<double> gw;               // gradient weights, m per offset
  std::size_t center = 0;               // index of the zero offset
};

int shrink_margin(double t, double h) {
  // smallest c with (c + 1/2) h > t: nodes farther than t from the boundary
  int c = std::max(0, static_cast<int>(std::floor(t / h - 0.5)) + 1);
  while ((c + 0.5) * h <= t) ++c;
  while (c > 0 && (c - 0.5) * h > t) --c;
  return c;
}

Stencil build_stencil(const Mollifier& phi, const Grid& grid) {
  const int m = grid.m;
  const double h = grid.cell_size();
  const double t = phi.t;

  int omax = std::max(0, static_cast<int>(std::ceil(t / h)) - 1);
  while ((omax + 1) * h < t) ++omax;
  while (omax > 0 && omax * h >= t) --omax;

  Stencil st;
  st.margin = std::max(shrink_margin(t, h), omax);

  double hm = 1.0;
  for (int a = 0; a < m; ++a) hm *= h;

  // flat stride of +1 step along each axis
  std::vector<std::ptrdiff_t> stride(static_cast<std::size_t>(m), 1);
  for (int a = m - 2; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a + 1)] * grid.n;
  }

  std::vector<int> o(static_cast<std::size_t>(m), -omax);
  std::vector<double> x(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(m));
  while (true) {
    bool zero = true;
    for (int a = 0; a < m; ++a) {
      x[static_cast<std::size_t>(a)] = o[static_cast<std::size_t>(a)] * h;
      zero = zero && o[static_cast<std::size_t>(a)] == 0;
    }
    const double weight = phi.phi_t(x.data()) * hm;
    if (weight > 0.0 || zero) {
      if (zero) st.center = st.w.size();
      st.offs.push_back(o);
      std::ptrdiff_t d = 0;
      for (int a = 0; a < m; ++a) d += o[static_cast<std::size_t>(a)] * stride[static_cast<std::size_t>(a)];
      st.deltas.push_back(d);
      st.w.push_back(weight);
      // neighbor at x + o h contributes D(phi_t)(x - x_k) = D(phi_t)(-o h)
      phi.grad_phi_t(x.data(), g.data());
      for (int a = 0; a < m; ++a) st.gw.push_back(-g[static_cast<std::size_t>(a)] * hm);
    }
    int a = m - 1;
    while (a >= 0 && ++o[static_cast<std::size_t>(a)] > omax) {
      o[static_cast<std::size_t>(a)] = -omax;
      --a;
    }
    if (a < 0) break;
  }

  double mass = 0.0;
  for (double wv : st.w) mass += wv;
  for (double& wv : st.w) wv /= mass;
  for (double& gv : st.gw) gv /= mass;

  // Pin the discrete mass to exactly 1 by absorbing the residual into the
  // center weight; one or two rounds always suffice.
  for (int round = 0; round < 4; ++round) {
    NeumaierSum s;
    for (double wv : st.w) s.add(wv);
    const double defect = 1.0 - s.value();
    if (defect == 0.0) break;
    st.w[st.center] += defect;
  }
  return st;
}

void check_args(const GridField& u, double t) {
  if (u.grid.m > 8) throw Error("convolve: dimension too large");
  const double h = u.grid.cell_size();
  if (!(t >= 2.0 * h)) {
    throw Error("convolve: kernel under-resolved, need t >= 2h");
  }
  if (!(t <= u.grid.half_width)) {
    throw Error("convolve: scale t exceeds the domain half-width");
  }
}

Grid shrunk_grid(const Grid& g, int margin) {
  const int n_out = g.n - 2 * margin;
  if (n_out < 1) throw Error("convolve: no interior nodes left at this scale");
  return Grid(g.m, n_out, g.half_width - margin * g.cell_size());
}

}  // namespace

double Mollifier::profile(double r2) noexcept {
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

double Mollifier::phi_t(const double* x) const noexcept {
  double r2 = 0.0;
  for (int a = 0; a < m; ++a) r2 += (x[a] / t) * (x[a] / t);
  double tm = 1.0;
  for (int a = 0; a < m; ++a) tm *= t;
  return normalization / tm * profile(r2);
}

void Mollifier::grad_phi_t(const double* x, double* g) const noexcept {
  double r2 = 0.0;
  for (int a = 0; a < m; ++a) r2 += (x[a] / t) * (x[a] / t);
  if (r2 >= 1.0) {
    for (int a = 0; a < m; ++a) g[a] = 0.0;
    return;
  }
  double tm = 1.0;
  for (int a = 0; a < m; ++a) tm *= t;
  const double one = 1.0 - r2;
  const double rho = std::exp(-1.0 / one);
  const double factor = normalization / (tm * t) * rho * (-2.0 / (one * one));
  for (int a = 0; a < m; ++a) g[a] = factor * (x[a] / t);
}

Mollifier make_mollifier(int m, double t) {
  if (m < 1) throw Error("make_mollifier: dimension must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw Error("make_mollifier: scale t must be positive");

  const auto radial = [m](double r) {
    return Mollifier::profile(r * r) * std::pow(r, m - 1);
  };
  const double shell = adaptive_simpson(radial, 0.0, 1.0, 1e-16);
  const double surface =
      2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
  Mollifier phi;
  phi.m = m;
  phi.t = t;
  phi.normalization = 1.0 / (surface * shell);
  return phi;
}

GridField convolve(const GridField& u, double t, int workers) {
  check_args(u, t);
  const Mollifier phi = make_mollifier(u.grid.m, t);
  const Stencil st = build_stencil(phi, u.grid);
  const Grid out_grid = shrunk_grid(u.grid, st.margin);

  const int m = u.grid.m;
  const int nu = u.nu;
  GridField out(out_grid, nu);
  const std::size_t n_off = st.w.size();

  parallel_for_blocks(out_grid.node_count(), resolve_workers(workers), [&](std::size_t i) {
    int J[8];
    out_grid.flat_to_multi(i, J);
    for (int a = 0; a < m; ++a) J[a] += st.margin;
    const std::size_t base = u.grid.multi_to_flat(J);
    const double* ctr = u.values.data() + base * static_cast<std::size_t>(nu);
    double* dst = out.values.data() + i * static_cast<std::size_t>(nu);
    for (int c = 0; c < nu; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n_off; ++k) {
        const double* nbv =
            u.values.data() +
            static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + st.deltas[k]) *
                static_cast<std::size_t>(nu);
        acc += st.w[k] * (nbv[c] - ctr[c]);
      }
      dst[c] = ctr[c] + acc;
    }
  });
  return out;
}

GridField grad_convolve(const GridField& u, double t, int workers) {
  check_args(u, t);
  const Mollifier phi = make_mollifier(u.grid.m, t);
  const Stencil st = build_stencil(phi, u.grid);
  const Grid out_grid = shrunk_grid(u.grid, st.margin);

  const int m = u.grid.m;
  const int nu = u.nu;
  GridField out(out_grid, nu * m);
  const std::size_t n_off = st.w.size();

  parallel_for_blocks(out_grid.node_count(), resolve_workers(workers), [&](std::size_t i) {
    int J[8];
    out_grid.flat_to_multi(i, J);
    for (int a = 0; a < m; ++a) J[a] += st.margin;
    const std::size_t base = u.grid.multi_to_flat(J);
    const double* ctr = u.values.data() + base * static_cast<std::size_t>(nu);
    double* dst = out.values.data() + i * static_cast<std::size_t>(nu * m);
    for (int c = 0; c < nu; ++c) {
      for (int a = 0; a < m; ++a) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_off; ++k) {
          const double* nbv =
              u.values.data() +
              static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + st.deltas[k]) *
                  static_cast<std::size_t>(nu);
          acc += st.gw[k * static_cast<std::size_t>(m) + static_cast<std::size_t>(a)] *
                 (nbv[c] - ctr[c]);
        }
        dst[c * m + a] = acc;
      }
    }
  });
  return out;
}

Lemma4Report audit_lemma4(const GridField& u, const SobolevParams& params, double t,
                          int workers) {
  params.validate();
  GridField v = convolve(u, t, workers);
  GridField g = grad_convolve(u, t, workers);
  GridField dsp = dsp_field(u, params, workers);
  GridField dsp_c = crop_centered(dsp, v.grid);
  GridField u_c = crop_centered(u, v.grid);

  const int nu = u.nu;
  const int m = u.grid.m;
  const double ts = std::pow(t, params.s);
  const double ts1 = std::pow(t, params.s - 1.0);

  Lemma4Report rep;
  rep.ratio_i = GridField(v.grid, 1);
  rep.ratio_ii = GridField(v.grid, 1);

  std::vector<double> ri, rii;
  const std::size_t count = v.node_count();
  for (std::size_t i = 0; i < count; ++i) {
    const double d = dsp_c.values[i];
    if (d < 1e-14) {
      ++rep.masked;
      continue;
    }
    double num_i = 0.0;
    for (int c = 0; c < nu; ++c) {
      const double dv = v.at(i)[static_cast<std::size_t>(c)] - u_c.at(i)[static_cast<std::size_t>(c)];
      num_i += dv * dv;
    }
    num_i = std::sqrt(num_i);
    double num_ii = 0.0;
    for (int c = 0; c < nu * m; ++c) {
      const double gv = g.at(i)[static_cast<std::size_t>(c)];
      num_ii += gv * gv;
    }
    num_ii = std::sqrt(num_ii);

    const double r1 = num_i / (ts * d);
    const double r2 = num_ii / (ts1 * d);
    rep.ratio_i.values[i] = r1;
    rep.ratio_ii.values[i] = r2;
    ri.push_back(r1);
    rii.push_back(r2);
  }

  rep.degenerate = ri.empty();
  const auto stats = [](std::vector<double>& vals, double& mx, double& p99) {
    if (vals.empty()) {
      mx = 0.0;
      p99 = 0.0;
      return;
    }
    std::sort(vals.begin(), vals.end());
    mx = vals.back();
    const std::size_t idx =
        std::min(vals.size() - 1,
                 static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(vals.size()))) - 1);
    p99 = vals[idx];
  };
  stats(ri, rep.max_i, rep.p99_i);
  stats(rii, rep.max_ii, rep.p99_ii);
  return rep;
}

GridField mollify_on_cube(const GridField& u, double t, double gamma, int workers) {
  if (gamma < t) throw Error("extension margin below the mollification scale");
  const int cells = static_cast<int>(std::ceil(gamma * u.grid.n - 1e-9));
  GridField big = extend_by_cells(u, cells);
  // Overwrite the centered block with u verbatim: the dilation only has to
  // fill the margin ring.
  std::vector<int> idx(static_cast<std::size_t>(u.grid.m));
  for (std::size_t node = 0; node < u.grid.node_count(); ++node) {
    u.grid.flat_to_multi(node, idx.data());
    for (int a = 0; a < u.grid.m; ++a) idx[static_cast<std::size_t>(a)] += cells;
    const auto src = u.at(node);
    auto dst = big.at(big.grid.multi_to_flat(idx.data()));
    std::copy(src.begin(), src.end(), dst.begin());
  }
  const GridField conv = convolve(big, t, workers);
  return crop_centered(conv, u.grid);
}

}  // namespace wsp
