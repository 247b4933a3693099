#pragma once

#include <cstddef>

#include "wsp/grid.hpp"
#include "wsp/params.hpp"

namespace wsp {

/// Normalized radial bump phi(x) = c * exp(-1/(1-|x|^2)) on the unit ball,
/// rescaled to phi_t(x) = t^-m phi(x/t).  `normalization` is c, fixed so the
/// continuous integral of phi over R^m is 1 (computed once by adaptive
/// quadrature of the radial profile).
struct Mollifier {
  int m = 1;
  double t = 1.0;
  double normalization = 1.0;

  /// Unnormalized radial profile as a function of |x|^2 (zero outside).
  static double profile(double r2) noexcept;

  /// phi_t at x (length-m point).
  double phi_t(const double* x) const noexcept;

  /// Analytic gradient of phi_t at x, written to g (length m).
  void grad_phi_t(const double* x, double* g) const noexcept;
};

/// Builds the mollifier for dimension m at scale t > 0.
Mollifier make_mollifier(int m, double t);

/// Discrete convolution phi_t * u with explicit domain shrinkage: the output
/// lives on the subgrid of nodes at distance > t from the boundary.  Kernel
/// weights are phi_t at node offsets, renormalized to sum to 1 exactly, and
/// applied in difference form out = u_i + sum_o w_o (u_{i+o} - u_i); constant
/// fields therefore pass through bit-identically, and every output value lies
/// in the convex hull of the stencil values.
///
/// Requires 2h <= t <= R; throws Error otherwise (under-resolved kernel /
/// kernel exceeding the domain).
GridField convolve(const GridField& u, double t, int workers = 0);

/// D(phi_t * u) with the analytic kernel gradient, nu*m components per node
/// (component c of the input owns entries [c*m, c*m + m)).  Applied in
/// difference form, so the gradient of a constant field is exactly zero (the
/// weight-sum defect cancels).  Same domain shrinkage and preconditions as
/// convolve.
GridField grad_convolve(const GridField& u, double t, int workers = 0);

/// phi_t * u evaluated on u's own grid: the field is extended by whole cells
/// covering a margin of width gamma (constant continuation past each face),
/// convolved at scale t, and cropped back.  On the original cube the
/// extension restricts to u itself, so the smoothing never sees resampling
/// artifacts away from the boundary.  Requires gamma >= t so the kernel fits
/// inside the extended cube.
GridField mollify_on_cube(const GridField& u, double t, double gamma, int workers = 0);

/// Node-wise smoothing-estimate ratios on the shrunk grid:
///   ratio_i  = |phi_t*u - u|        / (t^s      D^{s,p}u)
///   ratio_ii = |D(phi_t*u)|_F       / (t^{s-1}  D^{s,p}u)
/// Nodes where D^{s,p}u < 1e-14 are masked (ratio stored as 0, excluded from
/// the statistics).  `degenerate` marks an empty unmasked set.
struct Lemma4Report {
  GridField ratio_i;
  GridField ratio_ii;
  double max_i = 0.0;
  double p99_i = 0.0;
  double max_ii = 0.0;
  double p99_ii = 0.0;
  std::size_t masked = 0;
  bool degenerate = false;
};

Lemma4Report audit_lemma4(const GridField& u, const SobolevParams& params, double t,
                          int workers = 0);

}  // namespace wsp
