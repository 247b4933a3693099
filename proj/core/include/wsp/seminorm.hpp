#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wsp/grid.hpp"
#include "wsp/params.hpp"

namespace wsp {

/// Result of a Gagliardo seminorm evaluation.
struct SeminormReport {
  double seminorm_p = 0.0;   ///< [u]^p (pair quadrature sum)
  double seminorm = 0.0;     ///< [u]
  std::uint64_t pair_count = 0;  ///< ordered node pairs entering the sum
  std::size_t region_size = 0;   ///< nodes in the (possibly restricted) region
};

/// L^p and seminorm parts of a W^{s,p} norm, kept separate for reports.
struct NormParts {
  double lp = 0.0;
  double seminorm = 0.0;
  double full() const noexcept { return lp + seminorm; }
};

/// Pair-quadrature engine for one (grid, params) combination.
///
/// The Gagliardo kernel |x_i - x_k|^{-(m+sp)} on a uniform grid depends only
/// on the integer index offset, so the engine tabulates it once: a 1D table
/// indexed by the squared offset norm, plus a sliced layout that streams
/// contiguously along the innermost axis of the pair loop.  Entry 0 (the
/// diagonal) is pinned to zero, which excludes same-node pairs from every sum
/// without a branch.
///
/// Reduction order is fixed: each row (all pairs sharing the first node) is a
/// plain left-to-right sum, and rows are combined in node order with
/// compensated summation.  Rows are distributed over workers, so results are
/// bit-identical for any worker count.
class SeminormEngine {
 public:
  SeminormEngine(const Grid& grid, const SobolevParams& params, int workers = 0);
  ~SeminormEngine();
  SeminormEngine(SeminormEngine&&) noexcept;
  SeminormEngine& operator=(SeminormEngine&&) noexcept;

  const Grid& grid() const noexcept;
  const SobolevParams& params() const noexcept;

  /// Row sums r_i = sum_k |u_i - u_k|^p K(i,k) for every node i; entries of
  /// nodes outside `region` are zero.  `region`, when given, must have one
  /// 0/1 entry per node and at least one node set.
  std::vector<double> power_rows(const GridField& u,
                                 const std::vector<std::uint8_t>* region = nullptr) const;

  /// Node values (D^{s,p}u)^p = r_i * h^m.  Summing this field times h^m in
  /// node order with compensated summation reproduces gagliardo().seminorm_p
  /// bit-exactly: both run over the same pair set in the same order.
  GridField dsp_power(const GridField& u) const;

  SeminormReport seminorm(const GridField& u,
                          const std::vector<std::uint8_t>* region = nullptr) const;

  /// L^p norm (Euclidean norm over components, pair weight h^m).
  double lp_norm(const GridField& u) const;

  /// ||u||_{L^p} + [u]_{W^{s,p}} split into parts.
  NormParts norm_parts(const GridField& u) const;

  /// Kernel row sums R_i = sum_k K(i,k); cached after the first call.
  /// Not thread-safe on first invocation: call once before sharing.
  const std::vector<double>& kernel_row_sums() const;

  /// Norm parts of a field that vanishes outside a small support set.
  /// Exploits sum_{k not in S} K(i,k) = R_i - sum_{k in S} K(i,k) to reduce
  /// the pair loop to O(|S|^2 + |S|).  Requires kernel_row_sums() to have
  /// been built.  Exact zeros (all components +-0.0) define the support.
  NormParts sparse_norm_parts(const GridField& w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Gagliardo seminorm [u]_{W^{s,p}} by node-pair quadrature with weight h^{2m},
/// diagonal pairs excluded.  `region` restricts both integration variables.
SeminormReport gagliardo(const GridField& u, const SobolevParams& params,
                         const std::vector<std::uint8_t>* region = nullptr,
                         int workers = 0);

/// Pointwise fractional derivative D^{s,p}u (node value = (r_i h^m)^{1/p}).
GridField dsp_field(const GridField& u, const SobolevParams& params, int workers = 0);

/// (D^{s,p}u)^p as a field; the primitive behind dsp_field and gagliardo.
GridField dsp_power_field(const GridField& u, const SobolevParams& params, int workers = 0);

/// L^p norm of u with node weight h^m (Euclidean norm across components).
double lp_norm(const GridField& u, double p);

/// Metric d_{s,p}(u, v) = ||u - v||_{L^p} + [u - v]_{W^{s,p}}.
double wsp_distance(const GridField& u, const GridField& v, const SobolevParams& params,
                    int workers = 0);

/// ||u||_{W^{s,p}} = ||u||_{L^p} + [u]_{W^{s,p}}.
NormParts wsp_norm_parts(const GridField& u, const SobolevParams& params, int workers = 0);

/// W^{1,q} norm ||u||_{L^q} + ||Du||_{L^q}; Du by central differences in the
/// interior and one-sided differences at the boundary (requires n >= 3).
double w1q_norm(const GridField& u, double q);

/// Gagliardo-Nirenberg interpolation ratio
///   (||w||_{L^p} + [w]_{W^{s,p}}) / (||w||_{L^r}^{1-s} * ||w||_{W^{1,q}}^s).
/// Requires 1 < q < p < r and 1/p = (1-s)/r + s/q within 1e-12; w must not
/// vanish identically.
double gn_ratio(const GridField& w, const SobolevParams& params, double q, double r,
                int workers = 0);

}  // namespace wsp
