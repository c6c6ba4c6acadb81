#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "oft/isosceles.hpp"

namespace oft {

// ============================================================================
// Frictionless knot dynamics along the axis A1A4. The knot of mass m0 is
// released at the apex (x = 0) with zero velocity and moves under the axial
// force F(x) = 2*w2*cos(phi(x)) - 1, the tension balance of the three strings.
// Energy E = m0*xdot^2/2 + V(x) is conserved and zero on this trajectory.
// ============================================================================

struct KnotState {
    double t = 0.0;
    double x = 0.0;
    double xdot = 0.0;
};

struct TrajectorySample {
    double t;
    double x;
    double xdot;
    double phi;     // phi_of_x(x), radians
    double energy;
};

struct OCrossing {
    double t;
    double xdot;     // interpolated velocity at the crossing
    int direction;   // +1 if x increasing, -1 if decreasing
};

struct TurningPoint {
    double t;
    double x;        // interpolated position where xdot vanishes
};

struct EventLog {
    std::vector<OCrossing> o_crossings;
    std::vector<TurningPoint> turning_points;
};

struct Trajectory {
    IsoscelesSystem system;
    double dt;
    std::vector<TrajectorySample> samples;  // uniform grid t_i = i*dt
    EventLog events;
    double max_energy_drift = 0.0;          // max |E(t)| over the samples
};

/// Axial force on the knot at axis distance x. cos(phi) = (h-x)/d with
/// d = |SA2| = |SA3|, so no trig call is needed.
inline double axial_force(const IsoscelesSystem& sys, double x) {
    double dx = sys.h - x;
    return 2.0 * sys.w2 * dx / std::hypot(dx, sys.b) - 1.0;
}

/// Axis potential V(x) = x + 2*w2*(d(x) - a), normalized so V(0) = 0. Its
/// negative derivative is axial_force, and it equals the weighted Fermat
/// objective restricted to the axis minus the objective at the apex.
inline double potential(const IsoscelesSystem& sys, double x) {
    return x + 2.0 * sys.w2 * (std::hypot(sys.h - x, sys.b) - sys.a);
}

/// Conserved energy m0*xdot^2/2 + V(x); identically zero for the
/// release-from-apex trajectory.
inline double energy(const IsoscelesSystem& sys, const KnotState& s) {
    return 0.5 * sys.m0 * s.xdot * s.xdot + potential(sys, s.x);
}

struct StateDeriv {
    double xdot;
    double xddot;
};

inline StateDeriv rhs(const IsoscelesSystem& sys, const KnotState& s) {
    return {s.xdot, axial_force(sys, s.x) / sys.m0};
}

/// One classical fourth-order Runge-Kutta step. dt may be negative
/// (backward integration); the force law is time independent.
inline KnotState step_rk4(const IsoscelesSystem& sys, const KnotState& s, double dt) {
    StateDeriv d1 = rhs(sys, s);
    StateDeriv d2 = rhs(sys, {s.t + 0.5 * dt, s.x + 0.5 * dt * d1.xdot, s.xdot + 0.5 * dt * d1.xddot});
    StateDeriv d3 = rhs(sys, {s.t + 0.5 * dt, s.x + 0.5 * dt * d2.xdot, s.xdot + 0.5 * dt * d2.xddot});
    StateDeriv d4 = rhs(sys, {s.t + dt, s.x + dt * d3.xdot, s.xdot + dt * d3.xddot});
    return {s.t + dt,
            s.x + dt / 6.0 * (d1.xdot + 2.0 * d2.xdot + 2.0 * d3.xdot + d4.xdot),
            s.xdot + dt / 6.0 * (d1.xddot + 2.0 * d2.xddot + 2.0 * d3.xddot + d4.xddot)};
}

namespace detail {

/// Cubic Hermite interpolant through (0, y0, d0) and (dt, y1, d1), value at s.
inline double hermite_value(double y0, double d0, double y1, double d1,
                            double dt, double s) {
    double u = s / dt;
    double u2 = u * u, u3 = u2 * u;
    return (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * dt * d0 +
           (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * dt * d1;
}

inline double hermite_slope(double y0, double d0, double y1, double d1,
                            double dt, double s) {
    double u = s / dt;
    return (6.0 * u * u - 6.0 * u) / dt * y0 + (3.0 * u * u - 4.0 * u + 1.0) * d0 +
           (-6.0 * u * u + 6.0 * u) / dt * y1 + (3.0 * u * u - 2.0 * u) * d1;
}

/// Bisection root of the Hermite cubic on [0, dt]; y0 and y1 bracket zero.
inline double hermite_root(double y0, double d0, double y1, double d1, double dt) {
    double lo = 0.0, hi = dt;
    bool lo_neg = y0 < 0.0;
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((hermite_value(y0, d0, y1, d1, dt, mid) < 0.0) == lo_neg)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Integrates the release-from-apex motion with fixed-step RK4 up to t_max,
/// sampling every step on the uniform grid t_i = i*dt. Events are located
/// inside each bracketing step by cubic Hermite interpolation: crossings of
/// the Fermat-Torricelli point from the (x, xdot) interpolant, turning points
/// from the (xdot, xddot) interpolant. Refuses configurations with no
/// interior oscillation (absorbed case, or phi0 >= alpha).
inline Trajectory simulate(const IsoscelesSystem& sys, double dt, double t_max) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    FTCase c = classify_case(to_triangle(sys));
    if (!is_floating(c))
        throw std::domain_error("no oscillation: configuration is absorbed at A" +
                                std::to_string(c.vertex));
    if (!(sys.phi0 < isosceles_ft_angle(sys.w2)))
        throw std::domain_error("no oscillation: phi0 >= alpha, equilibrium not interior");
    double x_ft = isosceles_ft_x(sys);

    auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    Trajectory traj{sys, dt, {}, {}, 0.0};
    traj.samples.reserve(n + 1);
    auto push = [&](const KnotState& st) {
        double e = energy(sys, st);
        traj.samples.push_back({st.t, st.x, st.xdot, phi_of_x(sys, st.x), e});
        traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(e));
    };

    KnotState s{0.0, 0.0, 0.0};
    push(s);
    for (std::size_t i = 1; i <= n; ++i) {
        KnotState prev = s;
        s = step_rk4(sys, s, dt);
        s.t = static_cast<double>(i) * dt;  // keep the grid free of additive drift

        double y0 = prev.x - x_ft, y1 = s.x - x_ft;
        if (y0 * y1 < 0.0) {
            double at = detail::hermite_root(y0, prev.xdot, y1, s.xdot, dt);
            double v = detail::hermite_slope(prev.x, prev.xdot, s.x, s.xdot, dt, at);
            traj.events.o_crossings.push_back({prev.t + at, v, v > 0.0 ? +1 : -1});
        }
        if (prev.xdot * s.xdot < 0.0) {
            double a0 = axial_force(sys, prev.x) / sys.m0;
            double a1 = axial_force(sys, s.x) / sys.m0;
            double at = detail::hermite_root(prev.xdot, a0, s.xdot, a1, dt);
            double xv = detail::hermite_value(prev.x, prev.xdot, s.x, s.xdot, dt, at);
            traj.events.turning_points.push_back({prev.t + at, xv});
        }
        push(s);
    }
    return traj;
}

/// The knot state expressed in the string angle phi: position phi, angular
/// velocity phidot and acceleration phiddot obtained from (x, xdot) through
/// the coordinate map x = h - b*cot(phi) with xddot supplied by the force law.
struct PhiState {
    double phi;
    double phidot;
    double phiddot;
};

inline PhiState phi_state_of(const IsoscelesSystem& sys, const KnotState& s) {
    double phi = phi_of_x(sys, s.x);
    double sp = std::sin(phi);
    double xddot = axial_force(sys, s.x) / sys.m0;
    double phidot = s.xdot * sp * sp / sys.b;
    double phiddot =
        (xddot + 2.0 * sys.b * std::cos(phi) * phidot * phidot / (sp * sp * sp)) *
        sp * sp / sys.b;
    return {phi, phidot, phiddot};
}

/// Residual of the equation of motion written in the angle coordinate:
///   m0*(b/sin^2(phi)*phiddot - 2b*cos(phi)/sin^3(phi)*phidot^2) - (2*w2*cos(phi) - 1)
/// with b = a*sin(phi0). Vanishes identically along any solution of the
/// x-form dynamics (the map reduces it to m0*xddot - F(x)); the quadratic
/// phidot term is essential for that cancellation.
inline double phi_ode_residual(const IsoscelesSystem& sys, double phi,
                               double phidot, double phiddot) {
    if (!(phi > 0.0 && phi < std::numbers::pi))
        throw std::domain_error("phi_ode_residual requires phi in (0, pi)");
    double sp = std::sin(phi);
    double cp = std::cos(phi);
    double lhs = sys.m0 * (sys.b / (sp * sp) * phiddot -
                           2.0 * sys.b * cp / (sp * sp * sp) * phidot * phidot);
    return lhs - (2.0 * sys.w2 * cp - 1.0);
}

}  // namespace oft
