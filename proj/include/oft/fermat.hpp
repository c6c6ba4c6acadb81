#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "oft/geometry.hpp"

namespace oft {

// ============================================================================
// Weighted Fermat-Torricelli problem on a triangle.
//
// Given vertices A1, A2, A3 with positive weights w1, w2, w3 (string tensions,
// gravitational constant normalized to 1), find the point minimizing
// sum_i w_i * |P - A_i|. The minimizer is either interior ("floating", the
// weighted unit vectors from it sum to zero) or a vertex whose weight absorbs
// the pull of the other two.
// ============================================================================

struct WeightedTriangle {
    std::array<Point2, 3> vertices;
    std::array<double, 3> weights;
};

/// Largest pairwise vertex distance. Scale reference for tolerances.
inline double diameter(const WeightedTriangle& tri) {
    double d01 = dist(tri.vertices[0], tri.vertices[1]);
    double d02 = dist(tri.vertices[0], tri.vertices[2]);
    double d12 = dist(tri.vertices[1], tri.vertices[2]);
    return std::max(d01, std::max(d02, d12));
}

/// Throws std::invalid_argument unless all weights are positive and the
/// vertices are pairwise distinct and non-collinear. The collinearity test is
/// scale invariant: |twice signed area| >= 1e-12 * diameter^2.
inline void validate(const WeightedTriangle& tri) {
    for (double w : tri.weights)
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
    double diam = diameter(tri);
    if (!(diam > 0.0)) throw std::invalid_argument("vertices must be pairwise distinct");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (dist(tri.vertices[i], tri.vertices[j]) == 0.0)
                throw std::invalid_argument("vertices must be pairwise distinct");
    double area2 = twice_signed_area(tri.vertices[0], tri.vertices[1], tri.vertices[2]);
    if (std::abs(area2) < 1e-12 * diam * diam)
        throw std::invalid_argument("vertices are collinear");
}

/// Which case the minimizer falls into. `vertex` is 1-based and only
/// meaningful for absorbed results.
struct FTCase {
    enum class Kind { floating, absorbed };
    Kind kind = Kind::floating;
    int vertex = 0;
};

inline FTCase floating_case() { return {FTCase::Kind::floating, 0}; }
inline FTCase absorbed_at(int vertex) { return {FTCase::Kind::absorbed, vertex}; }
inline bool is_floating(FTCase c) { return c.kind == FTCase::Kind::floating; }

struct FTResult {
    Point2 point;
    FTCase ftcase;
    double residual = 0.0;  // norm of the weighted unit-vector sum (floating),
                            // or the clamped absorbed margin
    int iterations = 0;
};

/// Weighted Fermat objective sum_i w_i * |p - A_i|.
inline double objective(const WeightedTriangle& tri, Point2 p) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += tri.weights[i] * dist(p, tri.vertices[i]);
    return s;
}

/// Norm of the pull the other two vertices exert at vertex i (0-based):
/// || sum_{j != i} w_j * u(A_i, A_j) ||.
inline double pull_norm(const WeightedTriangle& tri, int i) {
    Point2 s{0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        s = s + tri.weights[j] * unit_toward(tri.vertices[i], tri.vertices[j]);
    }
    return norm(s);
}

/// Classifies the minimizer. Vertex i absorbs iff the pull there does not
/// exceed w_i (boundary equality counts as absorbed). At most one vertex can
/// absorb; that exclusivity is asserted.
inline FTCase classify_case(const WeightedTriangle& tri) {
    validate(tri);
    int found = 0;
    int vertex = 0;
    for (int i = 0; i < 3; ++i) {
        if (pull_norm(tri, i) <= tri.weights[i]) {
            ++found;
            vertex = i + 1;
        }
    }
    if (found > 1) throw std::logic_error("more than one absorbed vertex");
    return found == 1 ? absorbed_at(vertex) : floating_case();
}

/// || sum_i w_i * u(p, A_i) ||, the equilibrium residual at p. Zero exactly at
/// a floating minimizer. Throws std::domain_error if p coincides with a vertex
/// (the unit direction is undefined there).
inline double balance_residual(const WeightedTriangle& tri, Point2 p) {
    Point2 s{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        if (dist(p, tri.vertices[i]) == 0.0)
            throw std::domain_error("balance residual undefined at a vertex");
        s = s + tri.weights[i] * unit_toward(p, tri.vertices[i]);
    }
    return norm(s);
}

/// Thrown when the Weiszfeld iteration exhausts max_iter; `last` carries the
/// final iterate so callers can inspect how close it got.
struct weiszfeld_error : std::runtime_error {
    FTResult last;
    explicit weiszfeld_error(FTResult r)
        : std::runtime_error("weiszfeld did not converge within max_iter"),
          last(r) {}
};

/// Weiszfeld fixed-point iteration for the weighted Fermat-Torricelli point.
/// Absorbed inputs return the absorbing vertex immediately (residual is the
/// pull margin clamped at zero, iterations 0). Floating inputs iterate the
/// weighted average from the weighted centroid until the step falls below
/// tol; an iterate landing exactly on a vertex restarts from a point nudged
/// by 1e-9 * diameter.
inline FTResult weiszfeld(const WeightedTriangle& tri, double tol = 1e-12,
                          int max_iter = 10000) {
    FTCase c = classify_case(tri);
    if (!is_floating(c)) {
        int i = c.vertex - 1;
        double margin = pull_norm(tri, i) - tri.weights[i];
        return {tri.vertices[i], c, std::max(0.0, margin), 0};
    }
    double wsum = tri.weights[0] + tri.weights[1] + tri.weights[2];
    Point2 p{0.0, 0.0};
    for (int i = 0; i < 3; ++i) p = p + (tri.weights[i] / wsum) * tri.vertices[i];
    double nudge = 1e-9 * diameter(tri);
    for (int it = 1; it <= max_iter; ++it) {
        bool on_vertex = false;
        for (int i = 0; i < 3; ++i)
            if (dist(p, tri.vertices[i]) == 0.0) on_vertex = true;
        if (on_vertex) {
            p = p + Point2{nudge, nudge};
            continue;
        }
        double denom = 0.0;
        Point2 num{0.0, 0.0};
        for (int i = 0; i < 3; ++i) {
            double wd = tri.weights[i] / dist(p, tri.vertices[i]);
            num = num + wd * tri.vertices[i];
            denom += wd;
        }
        Point2 next{num.x / denom, num.y / denom};
        double step = dist(next, p);
        p = next;
        if (step < tol) return {p, floating_case(), balance_residual(tri, p), it};
    }
    throw weiszfeld_error({p, floating_case(), balance_residual(tri, p), max_iter});
}

}  // namespace oft
