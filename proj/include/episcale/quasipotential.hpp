#pragma once

#include <limits>
#include <string>

#include <episcale/deterministic.hpp>
#include <episcale/linalg.hpp>

namespace episcale {

// A quasi-potential value plus provenance: which route produced it,
// what horizon achieved it, and optimizer diagnostics where relevant.
struct QuasiPotential {
  double value = 0.0;
  double horizon = std::numeric_limits<double>::infinity();
  bool converged = true;
  bool closed_form = false;
  std::string method;

  // Estimated cost of the truncated connection segment when a target on
  // a rate-degenerate boundary had to be pulled in by a small margin.
  // Already included in value.
  double connection_cost = 0.0;

  Trajectory path;          // optimizing path (path-minimization route)
  Vec hyperplane_argmin;    // exit point on the target hyperplane, original coordinates
  bool argmin_unbounded = false;
  std::string warning;
};

}  // namespace episcale
