#include "wsp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "wsp/common.hpp"
#include "wsp/mollify.hpp"
#include "wsp/seminorm.hpp"

namespace wsp {

namespace {

void require_manifold_valued(const GridField& u, const ManifoldTarget& target) {
  if (u.nu != target.nu) throw DimensionError("field arity does not match the manifold");
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (target.dist(u.at(i).data()) > 1e-9) throw Error("field is not manifold-valued");
  }
}

double unit_defect_of(const GridField& u, const ManifoldTarget& target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    worst = std::max(worst, target.dist(u.at(i).data()));
  }
  return worst;
}

std::optional<int> try_winding(const GridField& u) {
  if (u.grid.m != 2 || u.nu != 2) return std::nullopt;
  try {
    return winding_number(u);
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct ShiftScores {
  std::vector<std::vector<double>> shifts;  // accepted, in candidate order
  std::vector<double> scores;               // matching W^{s,p} norms
  int sampled = 0;
};

// Samples cfg.n_shifts shifts uniformly in B_alpha (optionally preceded by
// the zero shift), drops those within eps_sing of the value set of v, and
// scores the survivors by |kappa_under_xi o v|_{W^{s,p}}.  The candidate
// order is the sampling order, so selection over slots is deterministic.
ShiftScores score_shifts(const GridField& v, const ManifoldTarget& target,
                         const HighRegimeConfig& cfg, const SobolevParams& params,
                         bool include_zero, int workers) {
  const int nu = target.nu;
  std::vector<std::vector<double>> cands;
  if (include_zero) cands.emplace_back(static_cast<std::size_t>(nu), 0.0);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> box(-target.alpha, target.alpha);
  int drawn = 0;
  while (drawn < cfg.n_shifts) {
    std::vector<double> xi(static_cast<std::size_t>(nu));
    double r2 = 0.0;
    for (auto& c : xi) {
      c = box(rng);
      r2 += c * c;
    }
    if (r2 >= target.alpha * target.alpha) continue;
    cands.push_back(std::move(xi));
    ++drawn;
  }

  ShiftScores out;
  out.sampled = static_cast<int>(cands.size());
  for (auto& xi : cands) {
    double best = 1e300;
    for (std::size_t i = 0; i < v.node_count(); ++i) {
      const auto val = v.at(i);
      double d2 = 0.0;
      for (int c = 0; c < nu; ++c) {
        const double d = val[static_cast<std::size_t>(c)] - xi[static_cast<std::size_t>(c)];
        d2 += d * d;
      }
      best = std::min(best, d2);
    }
    if (best >= cfg.eps_sing * cfg.eps_sing) out.shifts.push_back(std::move(xi));
  }
  if (out.shifts.empty()) throw SingularityError("degenerate field near singular set");

  SeminormEngine engine(v.grid, params, workers);
  engine.kernel_row_sums();  // build the shared cache before the parallel loop
  out.scores.assign(out.shifts.size(), 0.0);
  parallel_for_blocks(out.shifts.size(), workers, [&](std::size_t slot) {
    Retraction kappa(target, out.shifts[slot].data());
    Cutoff theta(kappa);
    const GridField kv = compose_field(
        v, [&](const double* in, double* o) { kappa_under(kappa, theta, in, o); }, 1);
    out.scores[slot] = engine.sparse_norm_parts(kv).full();
  });
  return out;
}

}  // namespace

HighRegimeConfig resolve_config(HighRegimeConfig cfg, const SobolevParams& params) {
  params.validate();
  if (!params.high_regime()) throw RegimeError("high-regime config requires sp >= 1");
  if (!(cfg.t > 0.0)) throw Error("mollification scale must be positive");
  if (cfg.gamma < cfg.t) throw Error("extension margin gamma must be >= t");
  if (cfg.n_shifts < 16) throw Error("need at least 16 shifts");
  if (!(cfg.eps_sing > 0.0)) throw Error("clearance must be positive");

  const double sp = params.sp_snapped();
  const double hi = std::floor(sp) + 1.0;
  if (cfg.q == 0.0) cfg.q = 0.5 * (sp + hi);
  if (!(cfg.q >= sp - 1e-12 && cfg.q < hi)) {
    throw Error("q must satisfy sp <= q < floor(sp) + 1");
  }
  if (!(cfg.q > 1.0)) throw Error("q must exceed 1");
  if (cfg.r == 0.0) {
    const double inv = (1.0 / params.p - params.s / cfg.q) / (1.0 - params.s);
    if (!(inv > 0.0)) throw Error("q admits no finite r; choose q > sp");
    cfg.r = 1.0 / inv;
  }
  if (!(cfg.q < params.p && params.p < cfg.r)) {
    throw Error("exponents must satisfy q < p < r");
  }
  if (std::abs(1.0 / params.p - (1.0 - params.s) / cfg.r - params.s / cfg.q) > 1e-12) {
    throw Error("exponents violate the interpolation relation");
  }
  return cfg;
}

HighResult approximate_high(const GridField& u, const ManifoldTarget& target,
                            const HighRegimeConfig& cfg_in, const SobolevParams& params,
                            int workers) {
  const HighRegimeConfig cfg = resolve_config(cfg_in, params);
  require_manifold_valued(u, target);
  if (cfg.t < 2.0 * u.grid.cell_size()) throw Error("mollification scale below 2h");

  const GridField v = mollify_on_cube(u, cfg.t, cfg.gamma, workers);
  ShiftScores sc = score_shifts(v, target, cfg, params, /*include_zero=*/true, workers);

  // The retraction error grows linearly in |xi|, and any admissible shift
  // already clears the singular set, so take the clearance-passing shift of
  // least norm (coordinates break ties).  The shift sequence then tends to
  // zero with t instead of wandering across B_alpha.
  std::size_t best = 0;
  const auto norm2 = [](const std::vector<double>& z) {
    double r2 = 0.0;
    for (const double c : z) r2 += c * c;
    return r2;
  };
  for (std::size_t k = 1; k < sc.shifts.size(); ++k) {
    const double a = norm2(sc.shifts[k]);
    const double b = norm2(sc.shifts[best]);
    if (a < b || (a == b && sc.shifts[k] < sc.shifts[best])) best = k;
  }
  const std::vector<double>& xi = sc.shifts[best];

  Retraction kappa(target, xi.data());
  Cutoff theta(kappa);
  GridField out = compose_field(
      v, [&](const double* in, double* o) { kappa.apply(in, o); }, workers);

  ApproximationReport rep;
  rep.xi = xi;
  rep.shifts_sampled = sc.sampled;
  rep.shifts_accepted = static_cast<int>(sc.shifts.size());
  rep.score_min = *std::min_element(sc.scores.begin(), sc.scores.end());
  rep.score_max = *std::max_element(sc.scores.begin(), sc.scores.end());
  rep.t1 = sc.scores[best];

  const auto bar = [&](const double* in, double* o) { kappa_bar(kappa, theta, in, o); };
  rep.t2 = wsp_norm_parts(subtract(compose_field(v, bar, workers), compose_field(u, bar, workers)),
                          params, workers)
               .full();
  const GridField ku = compose_field(
      u, [&](const double* in, double* o) { kappa.apply(in, o); }, workers);
  rep.t3 = wsp_norm_parts(subtract(ku, u), params, workers).full();
  rep.d = wsp_distance(out, u, params, workers);
  rep.unit_defect = unit_defect_of(out, target);
  if (target.kind == ManifoldKind::circle) {
    rep.winding_in = try_winding(u);
    rep.winding_out = try_winding(out);
  }
  return {std::move(out), std::move(rep)};
}

Claim8Report audit_claim8(const GridField& u, const ManifoldTarget& target,
                          const HighRegimeConfig& cfg_in, const SobolevParams& params,
                          int workers) {
  const HighRegimeConfig cfg = resolve_config(cfg_in, params);
  require_manifold_valued(u, target);
  if (cfg.t < 2.0 * u.grid.cell_size()) throw Error("mollification scale below 2h");

  const GridField v = mollify_on_cube(u, cfg.t, cfg.gamma, workers);
  const ShiftScores sc =
      score_shifts(v, target, cfg, params, /*include_zero=*/false, workers);

  Claim8Report rep;
  rep.shifts_accepted = static_cast<int>(sc.shifts.size());
  constexpr double pi = std::numbers::pi;
  const double a = target.alpha;
  rep.ball_measure = target.nu == 2 ? pi * a * a : 4.0 / 3.0 * pi * a * a * a;

  NeumaierSum mean;
  for (const double s : sc.scores) mean.add(std::pow(s, params.p));
  rep.lhs_mc = mean.value() / static_cast<double>(sc.scores.size()) * rep.ball_measure;

  // restricted integral of (D^{s,p}u)^p over {|phi_t*u - u| >= alpha}
  const GridField power = dsp_power_field(u, params, workers);
  double hm = 1.0;
  for (int axis = 0; axis < u.grid.m; ++axis) hm *= u.grid.cell_size();
  NeumaierSum rhs;
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    double d2 = 0.0;
    for (int c = 0; c < u.nu; ++c) {
      const double d = v.at(i)[static_cast<std::size_t>(c)] - u.at(i)[static_cast<std::size_t>(c)];
      d2 += d * d;
    }
    if (std::sqrt(d2) >= a) {
      ++rep.exceptional_nodes;
      rhs.add(power.values[i] * hm);
    }
  }
  rep.rhs = rhs.value();
  return rep;
}

LowResult approximate_low(const GridField& u, const ManifoldTarget& target, int j,
                          const std::vector<double>& b, double t_chart,
                          const SobolevParams& params, int workers) {
  params.validate();
  if (!params.low_regime()) throw RegimeError("approximate_low requires sp < 1");
  require_manifold_valued(u, target);
  if (t_chart <= 0.0) t_chart = std::ldexp(1.0, -j);
  if (t_chart < 2.0 * u.grid.cell_size()) throw Error("chart mollification scale below 2h");

  StepField e = haar_project(u, j, workers);
  const ClampResult cr = clamp_to_tube(e, target, b);

  StepField w = cr.field;
  double proj[3];
  for (std::int64_t c = 0; c < w.cubication.cube_count(); ++c) {
    target.project(w.at(c).data(), proj);
    std::copy(proj, proj + target.nu, w.at(c).begin());
  }

  const StereographicChart chart = stereographic_chart(target, w.cube_values);

  const GridField wf = w.to_field();
  const GridField cf = compose_field(
      wf, [&](const double* in, double* o) { chart.forward(in, o); }, workers);
  const GridField smooth = mollify_on_cube(cf, t_chart, t_chart, workers);
  GridField out = compose_field(
      smooth, [&](const double* in, double* o) { chart.inverse(in, o); }, workers);

  ApproximationReport rep;
  rep.level = j;
  rep.t_chart = t_chart;
  rep.clamp_count = cr.clamp_count;
  rep.stages.emplace_back("haar", wsp_distance(e.to_field(), u, params, workers));
  rep.stages.emplace_back("clamp", wsp_distance(cr.field.to_field(), u, params, workers));
  rep.stages.emplace_back("project", wsp_distance(wf, u, params, workers));
  rep.stages.emplace_back("chart_scale", chart.scale);
  rep.d = wsp_distance(out, u, params, workers);
  rep.stages.emplace_back("smooth", rep.d);
  rep.unit_defect = unit_defect_of(out, target);
  if (target.kind == ManifoldKind::circle) {
    rep.winding_in = try_winding(u);
    rep.winding_out = try_winding(out);
  }
  return {std::move(out), std::move(rep)};
}

}  // namespace wsp
