#pragma once

#include <cmath>

#include "wsp/common.hpp"

namespace wsp {

/// Fractional Sobolev parameter pair (s, p) with 0 < s < 1 and 1 <= p < inf.
///
/// The product sp drives every regime split, so it is computed in one place
/// with a fixed near-integer snap: values of s*p within 1e-12 of an integer
/// are treated as that integer by floor_sp() and by the regime predicates.
struct SobolevParams {
  double s = 0.5;
  double p = 2.0;

  SobolevParams() = default;
  SobolevParams(double s_, double p_) : s(s_), p(p_) { validate(); }

  void validate() const {
    if (!(s > 0.0) || !(s < 1.0) || !std::isfinite(s)) {
      throw Error("SobolevParams: require 0 < s < 1, got s=" + std::to_string(s));
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw Error("SobolevParams: require 1 <= p < inf, got p=" + std::to_string(p));
    }
  }

  double sp() const noexcept { return s * p; }

  /// sp with the near-integer snap applied; use for all regime comparisons.
  double sp_snapped() const noexcept {
    const double y = s * p;
    const double r = std::nearbyint(y);
    return (std::abs(y - r) <= 1e-12) ? r : y;
  }

  /// floor(sp), snapping values within 1e-12 of an integer to that integer.
  long floor_sp() const noexcept { return static_cast<long>(std::floor(sp_snapped())); }

  /// True when the high-regime machinery (shift-averaged retraction) applies.
  bool high_regime() const noexcept { return sp_snapped() >= 1.0; }

  /// True when the low-regime machinery (step clamping, sp < 1) applies.
  bool low_regime() const noexcept { return sp_snapped() < 1.0; }
};

}  // namespace wsp
