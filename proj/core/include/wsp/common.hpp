#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace wsp {

/// Base class for all recoverable library failures (CLI exit code 1).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input data could not be read or parsed (bad header, row count, non-finite).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible grids or have mismatched component counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked outside its sp-regime (sp >= 1 vs sp < 1 machinery).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// A value hit the singular set of a retraction, or no admissible shift exists.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// No chart with the required free cap exists for the given value set.
class ChartError : public Error {
 public:
  using Error::Error;
};

/// Grid resolution too coarse for the requested frequency or loop.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Supplied composition map fails the non-affineness witness check.
class WitnessError : public Error {
 public:
  using Error::Error;
};

/// Neumaier's compensated summation.  The running compensation captures the
/// rounding error of every add, so the result is accurate to ~2 ulp without
/// magnitude ordering and, crucially for this library, fully deterministic
/// for a fixed term order.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

  void reset() noexcept {
    sum_ = 0.0;
    comp_ = 0.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Resolves a requested worker count: `requested > 0` wins, else the
/// WSP_WORKERS environment variable, else the hardware concurrency.
int resolve_workers(int requested = 0);

/// Runs `fn(block)` for every block in [0, n_blocks) on up to `workers`
/// threads.  Blocks are assigned statically by stride, so which thread runs a
/// block never affects what the block computes; callers combine per-block
/// results in block order to keep reductions bit-identical for any worker
/// count.  The first exception thrown by a block is rethrown on the caller.
void parallel_for_blocks(std::size_t n_blocks, int workers,
                         const std::function<void(std::size_t)>& fn);

}  // namespace wsp
