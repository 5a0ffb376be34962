#pragma once

#include <span>
#include <string>
#include <vector>

#include "circlelab/states.hpp"

namespace circlelab {

struct IdentityResidual {
  std::string name;
  double max_abs = 0.0;
};

/// Evaluates both sides of every kinematic identity relating the angle,
/// circle-vector and tan-line pictures on the given state, with the second
/// derivatives theta_ddot supplied as free inputs (the identities hold for
/// any values). One route goes through the constructed vector/line objects
/// and plain planar arithmetic, the other through the closed trigonometric
/// forms; the report lists the worst absolute mismatch per identity.
///
/// Preconditions for the tan-line group: |cos theta_n| > 1e-6 and, for the
/// pairwise ratios, |sin(theta_n - theta_m)| > 1e-6; violations raise
/// TangentSingularity / CollisionSingularity.
std::vector<IdentityResidual> verify_appendix_a(const AngleState& s,
                                                std::span<const double> theta_ddot);

/// Largest residual in the report.
double max_residual(const std::vector<IdentityResidual>& report);

}  // namespace circlelab
