#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "wsp/grid.hpp"

namespace wsp {

enum class ManifoldKind { circle, sphere2 };

// Unit spheres S^1 in R^2 and S^2 in R^3.  Pi(y) = y/|y| is the exact
// nearest-point projection on the tube N + B_iota, and dist(y, N) = ||y|-1|.
// alpha = iota = 1/8 so that 1 - iota - alpha >= 3*alpha: every point of the
// tube is far enough from any admissible singular shift that the cutoff
// vanishes there.  The inequality is checked at construction.
struct ManifoldTarget {
  ManifoldKind kind = ManifoldKind::circle;
  int nu = 2;            // ambient dimension
  double iota = 0.125;   // tubular radius
  double alpha = 0.125;  // retraction shift radius

  static ManifoldTarget circle();
  static ManifoldTarget sphere2();
  static ManifoldTarget from_token(const std::string& token);

  double dist(const double* y) const;                // | |y| - 1 |
  void project(const double* y, double* out) const;  // Pi; tube points only
};

// kappa_xi(y) = (y - xi)/|y - xi|: radial retraction onto the sphere with
// singular set X = {xi}, |xi| <= alpha.
struct Retraction {
  ManifoldTarget target;
  std::vector<double> xi;

  Retraction(const ManifoldTarget& t, const double* shift);

  double dist_to_singular(const double* y) const;  // |y - xi|
  void apply(const double* y, double* out) const;  // singular below 1e-12
};

// theta(y): 1 where dist(y, X) <= 2 alpha, 0 where >= 3 alpha, linear in
// between; both plateaus are exact by branch.
struct Cutoff {
  double alpha;
  std::vector<double> xi;

  explicit Cutoff(const Retraction& r) : alpha(r.target.alpha), xi(r.xi) {}
  double theta(const double* y) const;
};

// kappa_bar = (1 - theta) kappa_xi, kappa_under = theta kappa_xi; their sum
// is kappa_xi, and kappa_bar == kappa_xi wherever theta == 0 (in particular
// on the whole tube N + B_iota).
void kappa_bar(const Retraction& r, const Cutoff& c, const double* y, double* out);
void kappa_under(const Retraction& r, const Cutoff& c, const double* y, double* out);

using PointMap = std::function<void(const double* in, double* out)>;

// Nodewise composition f(u(x)); exceptions from f propagate.
GridField compose_field(const GridField& u, const PointMap& f, int workers = 0);
GridField compose_field(const GridField& u, int out_nu, const PointMap& f,
                        int workers = 0);

// Stereographic projection from `pole`, restricted to the pole-orthogonal
// hyperplane through the origin and rescaled so a designated value set lands
// inside the open unit ball.  inverse(forward(y)) = y away from the pole.
struct StereographicChart {
  int nu = 3;
  std::vector<double> pole;
  double scale = 1.0;

  void forward(const double* y, double* w) const;
  void inverse(const double* w, double* y) const;
};

// Pole chosen by the farthest-point rule over the value set (candidate poles
// on a fixed angular lattice, lexicographic tie-break); rejects value sets
// that leave no spherical cap of angular radius >= 5 degrees free.
// `points` holds flattened nu-tuples, each on the sphere.
StereographicChart stereographic_chart(const ManifoldTarget& target,
                                       const std::vector<double>& points);

// Winding number of a circle-valued field along the counterclockwise
// axis-aligned node rectangle [lo0, hi0] x [lo1, hi1]; consecutive loop
// values must stay within an angular gap of pi/2.
int winding_number(const GridField& u, const std::array<int, 2>& lo,
                   const std::array<int, 2>& hi);
int winding_number(const GridField& u);  // boundary rectangle of the grid

}  // namespace wsp
