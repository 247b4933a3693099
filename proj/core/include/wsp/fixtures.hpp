#pragma once

#include <cstdint>
#include <string>

#include "wsp/grid.hpp"

namespace wsp {

/// Canonical deterministic test fields, keyed by name:
///   constant        (1, 0) at every node
///   linear          first coordinate x_0, scalar
///   bump            multiscale radial bump stack, scalar; layer widths
///                   w_k = 0.5 * 2^-k down to ~2h at separated centers
///   vortex          x/|x| into the circle (m = 2)
///   equator-vortex  (x/|x|, 0) on the equator of the sphere (m = 2)
///   step-random     level-2 step field, cube values uniform in [-1, 1]
///   oscillation     plateau-bump oscillation at frequency 1
/// The seed only affects step-random.
GridField generate_fixture(const std::string& name, const Grid& grid,
                           std::uint64_t seed = 0);

}  // namespace wsp
