#pragma once

#include <cmath>

namespace oft {

/// A point (or vector) in the plane, length units.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Twice the signed area of triangle (a, b, c). Zero iff collinear.
inline double twice_signed_area(Point2 a, Point2 b, Point2 c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Unit vector from `from` toward `to`. Caller guarantees the points differ.
inline Point2 unit_toward(Point2 from, Point2 to) {
    double d = dist(from, to);
    return {(to.x - from.x) / d, (to.y - from.y) / d};
}

}  // namespace oft
