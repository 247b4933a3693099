#include "wsp/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

#include "wsp/common.hpp"

namespace wsp {

namespace {

double dot(const double* a, const double* b, int nu) {
  double s = 0.0;
  for (int c = 0; c < nu; ++c) s += a[c] * b[c];
  return s;
}

double norm(const double* y, int nu) { return std::sqrt(dot(y, y, nu)); }

bool lex_less(const double* a, const double* b, int nu) {
  for (int c = 0; c < nu; ++c) {
    if (a[c] < b[c]) return true;
    if (a[c] > b[c]) return false;
  }
  return false;
}

ManifoldTarget make_target(ManifoldKind kind, int nu) {
  ManifoldTarget t;
  t.kind = kind;
  t.nu = nu;
  if (1.0 - t.iota - t.alpha < 3.0 * t.alpha) {
    throw Error("manifold constants violate 1 - iota - alpha >= 3*alpha");
  }
  return t;
}

}  // namespace

ManifoldTarget ManifoldTarget::circle() { return make_target(ManifoldKind::circle, 2); }

ManifoldTarget ManifoldTarget::sphere2() { return make_target(ManifoldKind::sphere2, 3); }

ManifoldTarget ManifoldTarget::from_token(const std::string& token) {
  if (token == "circle") return circle();
  if (token == "sphere2") return sphere2();
  throw Error("unknown manifold \"" + token + "\" (expected circle or sphere2)");
}

double ManifoldTarget::dist(const double* y) const {
  return std::abs(norm(y, nu) - 1.0);
}

void ManifoldTarget::project(const double* y, double* out) const {
  const double r = norm(y, nu);
  if (r == 0.0) throw Error("nearest-point projection undefined at the origin");
  if (std::abs(r - 1.0) > iota + 1e-12) {
    throw Error("point outside the tubular neighborhood");
  }
  for (int c = 0; c < nu; ++c) out[c] = y[c] / r;
}

Retraction::Retraction(const ManifoldTarget& t, const double* shift)
    : target(t), xi(shift, shift + t.nu) {
  if (norm(shift, t.nu) > t.alpha) throw Error("retraction shift leaves B_alpha");
}

double Retraction::dist_to_singular(const double* y) const {
  double s = 0.0;
  for (int c = 0; c < target.nu; ++c) {
    const double d = y[c] - xi[c];
    s += d * d;
  }
  return std::sqrt(s);
}

void Retraction::apply(const double* y, double* out) const {
  const int nu = target.nu;
  double s = 0.0;
  for (int c = 0; c < nu; ++c) {
    const double d = y[c] - xi[c];
    out[c] = d;
    s += d * d;
  }
  const double r = std::sqrt(s);
  if (r < 1e-12) throw SingularityError("retraction evaluated at its singular point");
  for (int c = 0; c < nu; ++c) out[c] /= r;
}

double Cutoff::theta(const double* y) const {
  double s = 0.0;
  for (std::size_t c = 0; c < xi.size(); ++c) {
    const double d = y[c] - xi[c];
    s += d * d;
  }
  const double dist = std::sqrt(s);
  if (dist <= 2.0 * alpha) return 1.0;
  if (dist >= 3.0 * alpha) return 0.0;
  return (3.0 * alpha - dist) / alpha;
}

void kappa_bar(const Retraction& r, const Cutoff& c, const double* y, double* out) {
  const int nu = r.target.nu;
  const double th = c.theta(y);
  if (th == 1.0) {  // factor vanishes; skip the possibly singular retraction
    for (int k = 0; k < nu; ++k) out[k] = 0.0;
    return;
  }
  r.apply(y, out);
  for (int k = 0; k < nu; ++k) out[k] *= 1.0 - th;
}

void kappa_under(const Retraction& r, const Cutoff& c, const double* y, double* out) {
  const int nu = r.target.nu;
  const double th = c.theta(y);
  if (th == 0.0) {
    for (int k = 0; k < nu; ++k) out[k] = 0.0;
    return;
  }
  r.apply(y, out);
  for (int k = 0; k < nu; ++k) out[k] *= th;
}

GridField compose_field(const GridField& u, const PointMap& f, int workers) {
  return compose_field(u, u.nu, f, workers);
}

GridField compose_field(const GridField& u, int out_nu, const PointMap& f,
                        int workers) {
  if (out_nu < 1) throw DimensionError("compose_field needs a positive output arity");
  GridField out(u.grid, out_nu);
  parallel_for_blocks(u.node_count(), workers, [&](std::size_t i) {
    f(u.at(i).data(), out.at(i).data());
  });
  return out;
}

void StereographicChart::forward(const double* y, double* w) const {
  const double yp = dot(y, pole.data(), nu);
  const double denom = 1.0 - yp;
  if (denom < 1e-12) throw ChartError("value coincides with the chart pole");
  for (int c = 0; c < nu; ++c) w[c] = scale * (y[c] - yp * pole[c]) / denom;
}

void StereographicChart::inverse(const double* w, double* y) const {
  double r2 = 0.0;
  for (int c = 0; c < nu; ++c) {
    const double t = w[c] / scale;
    r2 += t * t;
  }
  const double denom = r2 + 1.0;
  for (int c = 0; c < nu; ++c) {
    y[c] = (2.0 * (w[c] / scale) + (r2 - 1.0) * pole[c]) / denom;
  }
}

StereographicChart stereographic_chart(const ManifoldTarget& target,
                                       const std::vector<double>& points) {
  const int nu = target.nu;
  const std::size_t unu = static_cast<std::size_t>(nu);
  if (points.empty() || points.size() % unu != 0) {
    throw DimensionError("chart value set must be nonempty flattened nu-tuples");
  }
  const std::size_t npts = points.size() / unu;
  for (std::size_t q = 0; q < npts; ++q) {
    if (std::abs(norm(points.data() + q * unu, nu) - 1.0) > 1e-9) {
      throw ChartError("chart value set must lie on the sphere");
    }
  }

  // candidate poles on a fixed angular lattice; snap rounding noise so the
  // cardinal candidates are exact
  constexpr double pi = std::numbers::pi;
  const auto snap = [](double c) { return std::abs(c) <= 1e-15 ? 0.0 : c; };
  std::vector<double> cands;
  if (target.kind == ManifoldKind::circle) {
    for (int k = 0; k < 720; ++k) {
      const double a = 2.0 * pi * k / 720.0;
      cands.push_back(snap(std::cos(a)));
      cands.push_back(snap(std::sin(a)));
    }
  } else {
    const double step = 2.5 * pi / 180.0;
    for (int la = 1; la < 72; ++la) {
      const double lat = -0.5 * pi + step * la;
      for (int lo = 0; lo < 144; ++lo) {
        const double lon = step * lo;
        cands.push_back(snap(std::cos(lat) * std::cos(lon)));
        cands.push_back(snap(std::cos(lat) * std::sin(lon)));
        cands.push_back(snap(std::sin(lat)));
      }
    }
    cands.insert(cands.end(), {0.0, 0.0, 1.0, 0.0, 0.0, -1.0});
  }

  const double* best = nullptr;
  double best_min = -1.0;
  for (std::size_t k = 0; k * unu < cands.size(); ++k) {
    const double* c = cands.data() + k * unu;
    double mn = pi;
    for (std::size_t q = 0; q < npts; ++q) {
      const double d = std::clamp(dot(c, points.data() + q * unu, nu), -1.0, 1.0);
      mn = std::min(mn, std::acos(d));
    }
    if (mn > best_min || (mn == best_min && best != nullptr && lex_less(c, best, nu))) {
      best = c;
      best_min = mn;
    }
  }
  if (best == nullptr || best_min < 5.0 * pi / 180.0) {
    throw ChartError("no spherical cap of angular radius 5 degrees is free");
  }

  StereographicChart chart;
  chart.nu = nu;
  chart.pole.assign(best, best + nu);
  chart.scale = 1.0;
  double maxr = 0.0;
  std::vector<double> w(unu);
  for (std::size_t q = 0; q < npts; ++q) {
    chart.forward(points.data() + q * unu, w.data());
    maxr = std::max(maxr, norm(w.data(), nu));
  }
  chart.scale = maxr > 1e-300 ? 0.9 / maxr : 1.0;
  return chart;
}

namespace {

double node_angle(const GridField& u, std::int64_t flat) {
  const auto v = u.at(static_cast<std::size_t>(flat));
  if (std::hypot(v[0], v[1]) < 1e-15) throw Error("zero value on the winding loop");
  return std::atan2(v[1], v[0]);
}

}  // namespace

int winding_number(const GridField& u, const std::array<int, 2>& lo,
                   const std::array<int, 2>& hi) {
  if (u.grid.m != 2) throw DimensionError("winding number needs a 2-d grid");
  if (u.nu != 2) throw DimensionError("winding number needs 2-component values");
  const int n = u.grid.n;
  for (int k = 0; k < 2; ++k) {
    if (lo[k] < 0 || hi[k] >= n || lo[k] >= hi[k]) {
      throw Error("degenerate winding loop rectangle");
    }
  }

  // counterclockwise in the (x0, x1) plane; flat index = i0*n + i1
  std::vector<std::int64_t> path;
  path.reserve(2 * static_cast<std::size_t>(hi[0] - lo[0] + hi[1] - lo[1]));
  for (int i = lo[0]; i < hi[0]; ++i) path.push_back(static_cast<std::int64_t>(i) * n + lo[1]);
  for (int j = lo[1]; j < hi[1]; ++j) path.push_back(static_cast<std::int64_t>(hi[0]) * n + j);
  for (int i = hi[0]; i > lo[0]; --i) path.push_back(static_cast<std::int64_t>(i) * n + hi[1]);
  for (int j = hi[1]; j > lo[1]; --j) path.push_back(static_cast<std::int64_t>(lo[0]) * n + j);

  constexpr double pi = std::numbers::pi;
  double total = 0.0;
  double prev = node_angle(u, path[0]);
  for (std::size_t k = 1; k <= path.size(); ++k) {
    const double a = node_angle(u, path[k % path.size()]);
    const double d = std::remainder(a - prev, 2.0 * pi);
    if (!(std::abs(d) < 0.5 * pi)) throw ResolutionError("under-resolved winding loop");
    total += d;
    prev = a;
  }
  const double turns = total / (2.0 * pi);
  const double rounded = std::nearbyint(turns);
  if (std::abs(turns - rounded) > 1e-6) {
    throw ResolutionError("winding increments do not close to an integer");
  }
  return static_cast<int>(rounded);
}

int winding_number(const GridField& u) {
  if (u.grid.m != 2) throw DimensionError("winding number needs a 2-d grid");
  return winding_number(u, {0, 0}, {u.grid.n - 1, u.grid.n - 1});
}

}  // namespace wsp
