#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oft/fermat.hpp"
#include "oft/geometry.hpp"

namespace oft {

// ============================================================================
// The symmetric three-string machine: an isosceles triangle A1 A2 A3 with
// apex A1, equal sides A1A2 = A1A3 = a, apex half-angle phi0, weight 1 at A1
// and w2 at each base vertex. A4 is the foot of the apex altitude; positions
// along the axis are measured from A1 as x = A1S.
// ============================================================================

struct IsoscelesSystem {
    double a;     // equal-side length
    double phi0;  // half-apex angle, radians, in (0, pi/2)
    double w2;    // weight at each base vertex (apex weight is 1)
    double m0;    // knot mass
    double h;     // altitude A1A4 = a*cos(phi0)
    double b;     // half-base A4A3 = a*sin(phi0)
};

/// Validates the parameters and fills the derived altitude and half-base.
inline IsoscelesSystem make_isosceles(double a, double phi0, double w2, double m0) {
    if (!(a > 0.0)) throw std::invalid_argument("side length a must be positive");
    if (!(m0 > 0.0)) throw std::invalid_argument("mass m0 must be positive");
    if (!(w2 > 0.0)) throw std::invalid_argument("weight w2 must be positive");
    if (!(phi0 > 0.0 && phi0 < std::numbers::pi / 2))
        throw std::invalid_argument("phi0 must lie in (0, pi/2)");
    return {a, phi0, w2, m0, a * std::cos(phi0), a * std::sin(phi0)};
}

/// The equilibrium half-angle alpha the base strings make at the floating
/// point: alpha = arccos(1/(2*w2^2) - 1) / 2, the unique angle in (0, pi/2]
/// with 2*w2*cos(alpha) = 1. Requires w2 >= 1/2 (below that the apex absorbs
/// the knot and no interior equilibrium exists).
inline double isosceles_ft_angle(double w2) {
    double arg = 0.5 / (w2 * w2) - 1.0;
    if (!(arg >= -1.0 && arg <= 1.0))
        throw std::domain_error("isosceles_ft_angle requires w2 >= 1/2");
    return std::acos(arg) / 2.0;
}

/// Axis distance A1O of the floating Fermat-Torricelli point:
/// x_O = a*cos(phi0) - a*sin(phi0) * cot(alpha). Requires phi0 < alpha, the
/// floating regime; otherwise the minimizer sits at the apex.
inline double isosceles_ft_x(const IsoscelesSystem& sys) {
    double alpha = isosceles_ft_angle(sys.w2);
    if (!(sys.phi0 < alpha))
        throw std::domain_error("floating regime requires phi0 < alpha");
    return sys.h - sys.b / std::tan(alpha);
}

/// Angle phi the base strings make with the axis when the knot sits at axis
/// distance x: the two-argument arctangent of (b, h - x). Total and smooth in
/// x, range (0, pi); phi(0) = phi0, phi(h) = pi/2, phi > pi/2 beyond A4.
inline double phi_of_x(const IsoscelesSystem& sys, double x) {
    return std::atan2(sys.b, sys.h - x);
}

/// Inverse map x = a*cos(phi0) - a*sin(phi0) * cot(phi) for phi in (0, pi).
inline double x_of_phi(const IsoscelesSystem& sys, double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi))
        throw std::domain_error("x_of_phi requires phi in (0, pi)");
    return sys.h - sys.b / std::tan(phi);
}

/// The system as a general weighted triangle: A1 = (0, h), A2 = (-b, 0),
/// A3 = (b, 0), weights (1, w2, w2). Axis distance x maps to the point
/// (0, h - x).
inline WeightedTriangle to_triangle(const IsoscelesSystem& sys) {
    return {{Point2{0.0, sys.h}, Point2{-sys.b, 0.0}, Point2{sys.b, 0.0}},
            {1.0, sys.w2, sys.w2}};
}

}  // namespace oft
