// Acceptance criteria: each returns a pass/fail outcome with a detail line
// and an FNV-1a digest of its decisive doubles, so callers can check
// bit-identical behavior across worker counts.

#include "wsp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wsp/common.hpp"
#include "wsp/counterexample.hpp"
#include "wsp/fixtures.hpp"
#include "wsp/grid.hpp"
#include "wsp/haar.hpp"
#include "wsp/manifold.hpp"
#include "wsp/mollify.hpp"
#include "wsp/params.hpp"
#include "wsp/pipeline.hpp"
#include "wsp/seminorm.hpp"

namespace {

using namespace wsp;

struct Digest {
  std::uint64_t h = 1469598103934665603ULL;
  void add(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  }
  void add(const std::vector<double>& vs) {
    for (const double v : vs) add(v);
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
  std::uint64_t digest = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

GridField random_field(const Grid& g, int nu, std::uint64_t seed) {
  GridField u(g, nu);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (double& v : u.values) v = box(rng);
  return u;
}

// smooth circle-valued field with winding number zero
GridField phase_field(int n) {
  Grid g{2, n, 1.0};
  GridField u(g, 2);
  double x[2];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.node_position(i, x);
    const double psi =
        0.8 * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
    u.at(i)[0] = std::cos(psi);
    u.at(i)[1] = std::sin(psi);
  }
  return u;
}

// 1. Seminorm oracle: u(x) = x on (-1,1), s = 0.5, p = 2 makes the Gagliardo
// integrand identically 1, so [u]^2 -> |Q|^2 = 4; the midpoint rule with the
// diagonal excluded gives 4(1 - 1/N).  Tolerance 2%.
Outcome criterion1(int workers) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Grid g{1, 256, 1.0};
  const GridField u = generate_fixture("linear", g);
  const SeminormReport rep = gagliardo(u, SobolevParams(0.5, 2.0), nullptr, workers);
  const double target = 4.0;
  const double rel = std::abs(rep.seminorm_p - target) / target;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.pass = rel < 0.02 && secs < 1.0;
  out.detail = "[u]^2=" + fmt(rep.seminorm_p) + " target=4 rel=" + fmt(rel) +
               " secs=" + fmt(secs);
  Digest d;
  d.add(rep.seminorm_p);
  out.digest = d.h;
  return out;
}

// 2. Sum of (D^{s,p}u)^p h^m in node order reproduces [u]^p bit-exactly.
Outcome criterion2(int workers) {
  Outcome out;
  Grid g{2, 32, 1.0};
  const SobolevParams params(0.55, 1.7);
  double hm = 1.0;
  for (int a = 0; a < g.m; ++a) hm *= g.cell_size();
  int exact = 0;
  Digest dg;
  for (int k = 0; k < 10; ++k) {
    const GridField u = random_field(g, 1, 1000 + static_cast<std::uint64_t>(k));
    const GridField dsp_p = dsp_power_field(u, params, workers);
    NeumaierSum total;
    for (const double v : dsp_p.values) total.add(v * hm);
    const double direct = gagliardo(u, params, nullptr, workers).seminorm_p;
    if (total.value() == direct) ++exact;
    dg.add(direct);
  }
  out.pass = exact == 10;
  out.detail = "bit-exact " + std::to_string(exact) + "/10";
  out.digest = dg.h;
  return out;
}

// 3. [kappa o u] <= L [u] + 1e-12 for abs, clamp, and ball projection.
Outcome criterion3(int workers) {
  Outcome out;
  Grid g{1, 256, 1.0};
  const SobolevParams params(0.5, 2.0);
  int ok = 0;
  Digest dg;
  for (int k = 0; k < 20; ++k) {
    const GridField u = random_field(g, 1, 2000 + static_cast<std::uint64_t>(k));
    const double base = gagliardo(u, params, nullptr, workers).seminorm;
    const GridField au = apply_map(u, [](double x) { return std::abs(x); });
    const GridField cu = apply_map(u, [](double x) { return std::clamp(x, -0.5, 0.5); });
    const double sa = gagliardo(au, params, nullptr, workers).seminorm;
    const double sc = gagliardo(cu, params, nullptr, workers).seminorm;

    const GridField w = random_field(g, 2, 3000 + static_cast<std::uint64_t>(k));
    GridField bw = w;
    for (std::size_t i = 0; i < bw.node_count(); ++i) {
      const double r = std::hypot(bw.at(i)[0], bw.at(i)[1]);
      if (r > 0.7) {
        bw.at(i)[0] *= 0.7 / r;
        bw.at(i)[1] *= 0.7 / r;
      }
    }
    const double basew = gagliardo(w, params, nullptr, workers).seminorm;
    const double sb = gagliardo(bw, params, nullptr, workers).seminorm;
    if (sa <= base + 1e-12 && sc <= base + 1e-12 && sb <= basew + 1e-12) ++ok;
    dg.add(sa);
    dg.add(sc);
    dg.add(sb);
  }
  out.pass = ok == 20;
  out.detail = "contraction held " + std::to_string(ok) + "/20 fields";
  out.digest = dg.h;
  return out;
}

// 4. Lemma 4 ratios stay within a 2x band across t in {1/4..1/32}.
Outcome criterion4(int workers) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Grid g{2, 128, 1.0};
  const GridField u = generate_fixture("bump", g);
  const SobolevParams params(0.5, 2.0);
  double lo_i = 1e300, hi_i = 0.0, lo_ii = 1e300, hi_ii = 0.0;
  Digest dg;
  bool degenerate = false;
  for (const double t : {0.25, 0.125, 0.0625, 0.03125}) {
    const Lemma4Report rep = audit_lemma4(u, params, t, workers);
    degenerate = degenerate || rep.degenerate;
    lo_i = std::min(lo_i, rep.max_i);
    hi_i = std::max(hi_i, rep.max_i);
    lo_ii = std::min(lo_ii, rep.max_ii);
    hi_ii = std::max(hi_ii, rep.max_ii);
    dg.add(rep.max_i);
    dg.add(rep.max_ii);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double spread_i = hi_i / lo_i;
  const double spread_ii = hi_ii / lo_ii;
  out.pass = !degenerate && spread_i < 2.0 && spread_ii < 2.0 && secs < 30.0;
  out.detail = "spread_i=" + fmt(spread_i) + " spread_ii=" + fmt(spread_ii) +
               " secs=" + fmt(secs);
  out.digest = dg.h;
  return out;
}

// 5. Jensen contraction on 50 random fields, and L^p convergence of E_j on
// the smooth bump.
Outcome criterion5(int workers) {
  Outcome out;
  Grid g{2, 64, 1.0};
  int ok = 0;
  Digest dg;
  for (int k = 0; k < 50; ++k) {
    const GridField v = random_field(g, 1, 5000 + static_cast<std::uint64_t>(k));
    bool all = true;
    for (int j = 1; j <= 4; ++j) {
      const LpContraction c = audit_lp_contraction(v, j, 2.0);
      all = all && c.lhs <= c.rhs + 1e-12;
      dg.add(c.lhs);
    }
    if (all) ++ok;
  }
  const GridField bump = generate_fixture("bump", g);
  const double norm = lp_norm(bump, 2.0);
  double prev = 1e300;
  bool decreasing = true;
  double last = 0.0;
  for (int j = 1; j <= 5; ++j) {
    const double err = lp_norm(subtract(haar_project(bump, j, workers).to_field(), bump), 2.0);
    decreasing = decreasing && err < prev;
    prev = err;
    last = err;
    dg.add(err);
  }
  out.pass = ok == 50 && decreasing && last < 0.1 * norm;
  out.detail = "jensen " + std::to_string(ok) + "/50, E_j error at j=5 " + fmt(last) +
               " < " + fmt(0.1 * norm);
  out.digest = dg.h;
  return out;
}

// 6. [E_j v]/[v] uniform in j at s=0.5, p=1.5: the max ratio over the smooth
// fixture family, recorded per level, must stay within 1.5x of its j=1 value.
Outcome criterion6(int workers) {
  Outcome out;
  Grid g{2, 64, 1.0};
  const SobolevParams params(0.5, 1.5);
  Digest dg;
  double level_max[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
  for (const char* name : {"bump", "linear", "oscillation"}) {
    const GridField v = generate_fixture(name, g);
    for (int j = 1; j <= 4; ++j) {
      const double r = audit_seminorm_bound(v, j, params, workers);
      level_max[j] = std::max(level_max[j], r);
      dg.add(r);
    }
  }
  double hi = 0.0;
  for (int j = 1; j <= 4; ++j) hi = std::max(hi, level_max[j]);
  out.pass = std::isfinite(hi) && level_max[1] > 0.0 && hi <= 1.5 * level_max[1];
  out.detail = "family max by level: " + fmt(level_max[1]) + " " + fmt(level_max[2]) + " " +
               fmt(level_max[3]) + " " + fmt(level_max[4]);
  out.digest = dg.h;
  return out;
}

// 7. Adjacent half-cube quadrature vs the closed form 8 - 4 sqrt(2), plus the
// two-sided far-pair interval at j=3.
Outcome criterion7(int workers) {
  (void)workers;  // cube-pair quadrature is single-rowed by construction
  Outcome out;
  const SobolevParams params(0.25, 2.0);  // sp = 0.5
  Grid g1{1, 1024, 1.0};
  const DyadicCubication halves(g1, 1);
  const CubePairCheck adj = cube_pair_kernel_check(halves, 0, 1, params);
  const double target = 8.0 - 4.0 * std::sqrt(2.0);
  const double rel = std::abs(adj.lhs - target) / target;

  Grid g2{1, 256, 1.0};
  const DyadicCubication cub(g2, 3);
  const double msq = cub.measure() * cub.measure();
  int pairs = 0;
  bool interval = true;
  Digest dg;
  dg.add(adj.lhs);
  for (std::int64_t c1 = 0; c1 < cub.cube_count(); ++c1) {
    for (std::int64_t c2 = 0; c2 < cub.cube_count(); ++c2) {
      if (c1 == c2) continue;
      const double delta = cub.delta(c1, c2);
      if (delta < 8.0 * cub.diameter()) continue;
      ++pairs;
      const CubePairCheck far = cube_pair_kernel_check(cub, c1, c2, params);
      const double mean = far.lhs / msq;
      const double ex = -(1.0 + params.sp());
      interval = interval && mean >= std::pow(delta, ex) &&
                 mean <= std::pow(delta / 2.0, ex);
      dg.add(far.lhs);
    }
  }
  out.pass = rel < 0.03 && pairs > 0 && interval;
  out.detail = "adjacent rel=" + fmt(rel) + " far-pairs=" + std::to_string(pairs) +
               (interval ? " interval ok" : " interval violated");
  out.digest = dg.h;
  return out;
}

struct HighSweep {
  std::vector<HighResult> runs;
  double secs = 0.0;
};

HighSweep run_high_sweep(int workers) {
  HighSweep sweep;
  const auto t0 = std::chrono::steady_clock::now();
  Grid g{2, 128, 1.0};
  const GridField u = generate_fixture("vortex", g);
  const SobolevParams params(0.6, 2.0);
  for (const double t : {0.25, 0.125, 0.0625}) {
    HighRegimeConfig cfg;
    cfg.t = t;
    cfg.gamma = t;
    cfg.n_shifts = 64;
    cfg.seed = 42;
    sweep.runs.push_back(approximate_high(u, ManifoldTarget::circle(), cfg, params, workers));
  }
  sweep.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sweep;
}

// 8. High pipeline on the vortex: d decreasing in the t-sweep, triangle
// bound, winding preserved, bit-reproducible, under 2 minutes.
Outcome criterion8(int workers) {
  Outcome out;
  const HighSweep sweep = run_high_sweep(workers);
  bool triangle = true;
  bool winding = true;
  bool decreasing = true;
  double prev = 1e300;
  Digest dg;
  for (const HighResult& r : sweep.runs) {
    triangle = triangle &&
               r.report.d <= r.report.t1 + r.report.t2 + r.report.t3 + 1e-9;
    winding = winding && r.report.winding_out.has_value() && *r.report.winding_out == 1;
    decreasing = decreasing && r.report.d < prev;
    prev = r.report.d;
    dg.add(r.field.values);
    dg.add(r.report.d);
  }
  // reproducibility at fixed seed: repeat the middle run
  Grid g{2, 128, 1.0};
  const GridField u = generate_fixture("vortex", g);
  HighRegimeConfig cfg;
  cfg.t = 0.125;
  cfg.gamma = 0.125;
  cfg.n_shifts = 64;
  cfg.seed = 42;
  const HighResult again =
      approximate_high(u, ManifoldTarget::circle(), cfg, SobolevParams(0.6, 2.0), workers);
  const bool repro = again.field.values == sweep.runs[1].field.values &&
                     again.report.d == sweep.runs[1].report.d;
  out.pass = triangle && winding && decreasing && repro && sweep.secs < 120.0;
  out.detail = "d=" + fmt(sweep.runs[0].report.d) + "," + fmt(sweep.runs[1].report.d) +
               "," + fmt(sweep.runs[2].report.d) + (repro ? " repro" : " NOT-repro") +
               " secs=" + fmt(sweep.secs);
  out.digest = dg.h;
  return out;
}

// 9. Claim 8 audit across the same sweep: LHS/RHS ratio finite within 3x,
// exceptional node count strictly decreasing in t.
Outcome criterion9(int workers) {
  Outcome out;
  Grid g{2, 128, 1.0};
  const GridField u = generate_fixture("vortex", g);
  const SobolevParams params(0.6, 2.0);
  double lo = 1e300, hi = 0.0;
  std::int64_t prev_nodes = std::numeric_limits<std::int64_t>::max();
  bool finite = true;
  bool shrinking = true;
  Digest dg;
  std::string ratios;
  for (const double t : {0.25, 0.125, 0.0625}) {
    HighRegimeConfig cfg;
    cfg.t = t;
    cfg.gamma = t;
    cfg.n_shifts = 64;
    cfg.seed = 42;
    const Claim8Report rep = audit_claim8(u, ManifoldTarget::circle(), cfg, params, workers);
    const double ratio = rep.lhs_mc / rep.rhs;
    finite = finite && std::isfinite(ratio) && ratio > 0.0;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    shrinking = shrinking && rep.exceptional_nodes < prev_nodes;
    prev_nodes = rep.exceptional_nodes;
    ratios += fmt(ratio) + " ";
    dg.add(rep.lhs_mc);
    dg.add(rep.rhs);
    dg.add(static_cast<double>(rep.exceptional_nodes));
  }
  out.pass = finite && hi <= 3.0 * lo && shrinking;
  out.detail = "ratios " + ratios + (shrinking ? "exceptional shrinking" : "NOT shrinking");
  out.digest = dg.h;
  return out;
}

// 10. Low pipeline on a winding-0 phase field: d decreasing in j, unit
// output, no clamps at the final level.
Outcome criterion10(int workers) {
  Outcome out;
  const GridField u = phase_field(64);
  const SobolevParams params(0.4, 2.0);
  const std::vector<double> b{1.0, 0.0};
  double prev = 1e300;
  bool decreasing = true;
  bool unit = true;
  std::int64_t final_clamps = -1;
  Digest dg;
  std::string ds;
  for (int j = 2; j <= 4; ++j) {
    const LowResult r = approximate_low(u, ManifoldTarget::circle(), j, b, 0.0, params, workers);
    decreasing = decreasing && r.report.d < prev;
    prev = r.report.d;
    unit = unit && r.report.unit_defect <= 1e-9;
    final_clamps = r.report.clamp_count;
    ds += fmt(r.report.d) + " ";
    dg.add(r.field.values);
    dg.add(r.report.d);
  }
  out.pass = decreasing && unit && final_clamps == 0;
  out.detail = "d=" + ds + "final clamps=" + std::to_string(final_clamps);
  out.digest = dg.h;
  return out;
}

// 11. Counterexample: growing composition gap at constant input norm, and
// continuity along the perturbation sweep.
Outcome criterion11(int workers) {
  Outcome out;
  Grid g{1, 512, 1.0};
  const SobolevParams params(0.5, 2.0);
  const ScalarMap abs_map = [](double x) { return std::abs(x); };
  const NonuniformReport rep =
      nonuniform_demo(g, std::vector<int>{1, 2, 4, 8}, 0.3, abs_map, params, workers);
  bool increasing = true;
  bool constant_norm = true;
  Digest dg;
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    if (k > 0) increasing = increasing && rep.rows[k].kappa_gap > rep.rows[k - 1].kappa_gap;
    constant_norm =
        constant_norm && std::abs(rep.rows[k].input_norm - rep.rows[0].input_norm) <= 1e-12;
    dg.add(rep.rows[k].kappa_gap);
  }
  dg.add(rep.slope);

  Grid gc{1, 256, 1.0};
  GridField u(gc, 1);
  GridField w(gc, 1);
  for (int i = 0; i < gc.n; ++i) {
    u.values[static_cast<std::size_t>(i)] = std::sin(std::numbers::pi * gc.axis_coord(i));
    w.values[static_cast<std::size_t>(i)] =
        0.5 * std::cos(std::numbers::pi * gc.axis_coord(i));
  }
  std::vector<GridField> sweep;
  for (int k = 0; k <= 12; ++k) {
    GridField vk = u;
    const double scale = std::ldexp(1.0, -k);
    for (std::size_t i = 0; i < vk.values.size(); ++i) vk.values[i] += scale * w.values[i];
    sweep.push_back(std::move(vk));
  }
  const std::vector<ContinuityRow> rows = continuity_demo(u, sweep, abs_map, params, workers);
  const double base = gagliardo(u, params, nullptr, workers).seminorm;
  bool co_decrease = false;
  bool small_gap = true;
  for (const ContinuityRow& row : rows) {
    if (row.input_dist < 1e-3) {
      co_decrease = true;
      small_gap = small_gap && row.kappa_gap < 1e-3 * base;
    }
    dg.add(row.kappa_gap);
  }
  out.pass = increasing && constant_norm && rep.slope >= 0.4 && co_decrease && small_gap;
  out.detail = "slope=" + fmt(rep.slope) + (constant_norm ? " norm const" : " norm DRIFTS") +
               (co_decrease && small_gap ? " continuity ok" : " continuity violated");
  out.digest = dg.h;
  return out;
}

// 12. Regime gates reject the wrong-side parameters with RegimeError.
Outcome criterion12(int workers) {
  Outcome out;
  Grid g{2, 16, 1.0};
  const GridField u = generate_fixture("vortex", g);
  bool high_gate = false;
  bool low_gate = false;
  try {
    HighRegimeConfig cfg;
    approximate_high(u, ManifoldTarget::circle(), cfg, SobolevParams(0.4, 2.0), workers);
  } catch (const RegimeError&) {
    high_gate = true;
  } catch (...) {
  }
  try {
    approximate_low(u, ManifoldTarget::circle(), 2, std::vector<double>{1.0, 0.0}, 0.0,
                    SobolevParams(0.6, 2.0), workers);
  } catch (const RegimeError&) {
    low_gate = true;
  } catch (...) {
  }
  out.pass = high_gate && low_gate;
  out.detail = std::string("sp=0.8 high ") + (high_gate ? "rejected" : "ACCEPTED") +
               ", sp=1.2 low " + (low_gate ? "rejected" : "ACCEPTED");
  Digest dg;
  dg.add(high_gate ? 1.0 : 0.0);
  dg.add(low_gate ? 1.0 : 0.0);
  out.digest = dg.h;
  return out;
}

using CriterionFn = Outcome (*)(int);

}  // namespace

namespace wsp {

namespace {

constexpr const char* kNames[] = {
    "seminorm oracle",        "dsp identity",  "composition contraction",
    "lemma4 sweep",           "prop5 contraction", "prop7 uniformity",
    "cube-pair oracle",       "high pipeline", "claim8 audit",
    "low pipeline",           "counterexample", "regime gates"};

constexpr CriterionFn kCriteria[] = {criterion1, criterion2,  criterion3,  criterion4,
                                     criterion5, criterion6,  criterion7,  criterion8,
                                     criterion9, criterion10, criterion11, criterion12};

}  // namespace

int acceptance_criteria_count() { return 12; }

CriterionOutcome run_criterion(int index, int workers) {
  if (index < 1 || index > 12) throw Error("criterion index out of range");
  CriterionOutcome out;
  out.index = index;
  out.name = kNames[index - 1];
  Outcome o;
  try {
    o = kCriteria[index - 1](workers);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
    o.digest = 0;
  }
  out.pass = o.pass;
  out.detail = o.detail;
  out.digest = o.digest;
  return out;
}

CriterionOutcome run_determinism(const std::vector<CriterionOutcome>& base, int workers) {
  CriterionOutcome out;
  out.index = 13;
  out.name = "determinism";
  bool ok = true;
  std::string mismatches;
  for (const CriterionOutcome& b : base) {
    const CriterionOutcome again = run_criterion(b.index, workers);
    if (again.digest != b.digest) {
      ok = false;
      mismatches += std::to_string(b.index) + " ";
    }
  }
  out.pass = ok && !base.empty();
  out.detail = ok ? "digests identical at 1 vs " + std::to_string(workers) + " workers"
                  : "mismatched criteria: " + mismatches;
  out.digest = 0;
  return out;
}

std::vector<CriterionOutcome> run_acceptance(int workers, int check_workers) {
  std::vector<CriterionOutcome> outcomes;
  for (int k = 1; k <= acceptance_criteria_count(); ++k) {
    outcomes.push_back(run_criterion(k, workers));
  }
  outcomes.push_back(run_determinism(outcomes, check_workers));
  return outcomes;
}

}  // namespace wsp
