#pragma once

#include "tasep/common.hpp"

namespace tasep {

/// Two-state step initial condition for the inviscid Burgers equation:
/// density `left` on r <= 0 and `right` on r > 0, both in [0, 1].
struct RiemannProblem {
    double left = 0.0;
    double right = 0.0;
};

struct SpaceTimePoint {
    double r = 0.0;
    double t = 0.0;
};

/// Flux u(1-u) of the density u in [0, 1]; maximal 1/4 at u = 1/2.
double flux_function(double u);

/// Speed 1 - 2u at which the density value u propagates.
double characteristic_speed(double u);

/// Speed 1 - left - right of the travelling discontinuity; requires an
/// increasing step (left < right).
double shock_speed(const RiemannProblem& p);

/// Entropy solution u(r, t) of the Riemann problem. For a decreasing step
/// the fan interpolates (t - r) / (2t) between the edge characteristics; for
/// an increasing step the initial profile travels at the shock speed. On the
/// shock line the right state is returned; at t = 0 the initial profile.
double riemann_solution(const RiemannProblem& p, const SpaceTimePoint& x);

/// Exact integral of u(., t) over [a, b], evaluated piecewise in closed form.
double density_integral(const RiemannProblem& p, double a, double b, double t);

}  // namespace tasep
