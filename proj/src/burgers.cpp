#include "tasep/burgers.hpp"

#include <algorithm>

namespace tasep {

namespace {

void check_density(double u) {
    require(u >= 0.0 && u <= 1.0, "density outside [0, 1]");
}

void check_problem(const RiemannProblem& p) {
    check_density(p.left);
    check_density(p.right);
}

double step_profile(const RiemannProblem& p, double r) {
    return r <= 0.0 ? p.left : p.right;
}

}  // namespace

double flux_function(double u) {
    check_density(u);
    return u * (1.0 - u);
}

double characteristic_speed(double u) {
    check_density(u);
    return 1.0 - 2.0 * u;
}

double shock_speed(const RiemannProblem& p) {
    check_problem(p);
    require(p.left < p.right, "shock requires an increasing step (left < right)");
    return 1.0 - p.left - p.right;
}

double riemann_solution(const RiemannProblem& p, const SpaceTimePoint& x) {
    check_problem(p);
    require(x.t >= 0.0, "time must be nonnegative");
    if (x.t == 0.0) return step_profile(p, x.r);
    if (p.left == p.right) return p.left;
    if (p.left < p.right) {
        double v = 1.0 - p.left - p.right;
        return x.r < v * x.t ? p.left : p.right;
    }
    double fan_lo = (1.0 - 2.0 * p.left) * x.t;
    double fan_hi = (1.0 - 2.0 * p.right) * x.t;
    if (x.r < fan_lo) return p.left;
    if (x.r > fan_hi) return p.right;
    return (x.t - x.r) / (2.0 * x.t);
}

double density_integral(const RiemannProblem& p, double a, double b, double t) {
    check_problem(p);
    require(a <= b, "interval must satisfy a <= b");
    require(t >= 0.0, "time must be nonnegative");
    if (p.left == p.right) return p.left * (b - a);
    if (p.left < p.right) {
        double m = (1.0 - p.left - p.right) * t;
        double left_len = std::max(0.0, std::min(b, m) - a);
        double right_len = std::max(0.0, b - std::max(a, m));
        return p.left * left_len + p.right * right_len;
    }
    double fan_lo = (1.0 - 2.0 * p.left) * t;
    double fan_hi = (1.0 - 2.0 * p.right) * t;
    double total = p.left * std::max(0.0, std::min(b, fan_lo) - a) +
                   p.right * std::max(0.0, b - std::max(a, fan_hi));
    double q0 = std::max(a, fan_lo);
    double q1 = std::min(b, fan_hi);
    if (q1 > q0 && t > 0.0) {
        // integral of (t - r) / (2t) over [q0, q1]
        total += (q1 - q0) / 2.0 - (q1 * q1 - q0 * q0) / (4.0 * t);
    }
    return total;
}

}  // namespace tasep
