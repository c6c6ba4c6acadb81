#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oft/dynamics.hpp"

namespace oft {

// ============================================================================
// Derived quantities of the oscillation: crossing speed, work along the axis,
// period estimates from two independent routes, and the sinusoidal
// approximation of x(t) with its deviation series.
// ============================================================================

struct insufficient_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Speed of the knot as it passes the Fermat-Torricelli point, from energy
/// conservation: sqrt(-2*V(x_O)/m0). Strictly positive in the floating
/// regime; throws (via isosceles_ft_x) when phi0 >= alpha.
inline double speed_at_ft(const IsoscelesSystem& sys) {
    double x_ft = isosceles_ft_x(sys);
    return std::sqrt(-2.0 * potential(sys, x_ft) / sys.m0);
}

/// Work done by the net string force from the apex to x_end:
/// W(x) = 2*w2*(a - d(x)) - x = -V(x). Equals the kinetic energy at x_end on
/// the release trajectory; nonzero at the Fermat-Torricelli point.
inline double work_along_axis(const IsoscelesSystem& sys, double x_end) {
    return -potential(sys, x_end);
}

struct PeriodEstimate {
    enum class Method { crossings, quadrature };
    double period;
    Method method;
    double uncertainty;
};

/// Period from the event log: mean gap between consecutive same-direction
/// crossings of the Fermat-Torricelli point, pooled over both directions.
/// Uncertainty is the largest deviation of a gap from the mean. Requires at
/// least 3 crossings in one direction (two gaps).
inline PeriodEstimate estimate_period_crossings(const Trajectory& traj) {
    std::vector<double> up, dn;
    for (const OCrossing& e : traj.events.o_crossings)
        (e.direction > 0 ? up : dn).push_back(e.t);
    if (up.size() < 3 && dn.size() < 3)
        throw insufficient_data_error(
            "period estimate needs at least 3 same-direction O-crossings");
    std::vector<double> gaps;
    for (const auto* list : {&up, &dn})
        for (std::size_t i = 1; i < list->size(); ++i)
            gaps.push_back((*list)[i] - (*list)[i - 1]);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= static_cast<double>(gaps.size());
    double dev = 0.0;
    for (double g : gaps) dev = std::max(dev, std::abs(g - mean));
    return {mean, PeriodEstimate::Method::crossings, dev};
}

/// Largest axis excursion: the positive root of V beyond the equilibrium,
/// bracketed by expansion and bisected to machine precision.
inline double turning_point_x(const IsoscelesSystem& sys) {
    double lo = isosceles_ft_x(sys);  // V < 0 at the equilibrium
    double hi = lo + sys.a;
    int guard = 0;
    while (potential(sys, hi) <= 0.0) {
        hi += sys.a;
        if (++guard > 200) throw std::runtime_error("turning point not bracketed");
    }
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        (potential(sys, mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Time from turning point xlo to turning point xhi under potential V with
/// V(xlo) = V(xhi) = 0 and V < 0 between: integral of dx/sqrt(-2V/m0).
/// The substitutions x = xlo + s^2 and x = xhi - s^2 absorb the inverse
/// square-root endpoint singularities, leaving a smooth integrand handled by
/// composite Gauss-Legendre with strictly interior nodes.
template <class Potential>
double half_period_quadrature(Potential&& V, double m0, double xlo, double xhi,
                              int panels = 20) {
    static constexpr double kNode[5] = {0.1488743389816312, 0.4333953941292472,
                                        0.6794095682990244, 0.8650633666889845,
                                        0.9739065285171717};
    static constexpr double kWeight[5] = {0.2955242247147529, 0.2692667193099963,
                                          0.2190863625159820, 0.1494513491505806,
                                          0.0666713443086881};
    double xm = 0.5 * (xlo + xhi);
    auto piece = [&](double smax, auto&& x_of_s) {
        double total = 0.0;
        double hpan = smax / panels;
        for (int p = 0; p < panels; ++p) {
            double center = (p + 0.5) * hpan;
            double half = 0.5 * hpan;
            double acc = 0.0;
            for (int k = 0; k < 5; ++k) {
                for (double sign : {-1.0, 1.0}) {
                    double s = center + sign * half * kNode[k];
                    acc += kWeight[k] * 2.0 * s / std::sqrt(-2.0 * V(x_of_s(s)) / m0);
                }
            }
            total += acc * half;
        }
        return total;
    };
    return piece(std::sqrt(xm - xlo), [&](double s) { return xlo + s * s; }) +
           piece(std::sqrt(xhi - xm), [&](double s) { return xhi - s * s; });
}

/// Period from quadrature between the turning points x = 0 and x = x_max.
/// Uncertainty is the change under halving the panel count.
inline PeriodEstimate estimate_period_quadrature(const IsoscelesSystem& sys) {
    double x_max = turning_point_x(sys);
    auto v = [&](double x) { return potential(sys, x); };
    double t_fine = 2.0 * half_period_quadrature(v, sys.m0, 0.0, x_max, 20);
    double t_coarse = 2.0 * half_period_quadrature(v, sys.m0, 0.0, x_max, 10);
    return {t_fine, PeriodEstimate::Method::quadrature, std::abs(t_fine - t_coarse)};
}

/// Sinusoidal approximation x(t) ~ d + A*sin(omega*(t - t0)).
struct SinusoidFit {
    double offset;
    double amplitude;
    double omega;
    double t0;       // normalized into [0, 2*pi/omega)
    double rmse;
};

/// Thrown when the fit refinement exhausts its step cap; `best` carries the
/// best iterate found.
struct fit_error : std::runtime_error {
    SinusoidFit best;
    fit_error(const char* what, SinusoidFit b) : std::runtime_error(what), best(b) {}
};

namespace detail {

struct Extremum {
    double t;
    double x;
};

/// Interior local extrema of the sample sequence, each refined by the vertex
/// of the parabola through its three bracketing samples. The refinement is
/// what makes envelope recovery exact for smooth signals; raw sample maxima
/// are biased low by O((omega*dt)^2).
inline void refined_extrema(const std::vector<TrajectorySample>& samples,
                            std::vector<Extremum>& maxima,
                            std::vector<Extremum>& minima) {
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        double y0 = samples[i - 1].x, y1 = samples[i].x, y2 = samples[i + 1].x;
        bool is_max = y1 >= y0 && y1 > y2;
        bool is_min = y1 <= y0 && y1 < y2;
        if (!is_max && !is_min) continue;
        double den = y0 - 2.0 * y1 + y2;
        double delta = den == 0.0 ? 0.0 : 0.5 * (y0 - y2) / den;
        double step = samples[i + 1].t - samples[i].t;
        Extremum e{samples[i].t + delta * step, y1 - 0.25 * (y0 - y2) * delta};
        (is_max ? maxima : minima).push_back(e);
    }
}

}  // namespace detail

/// Fits x(t) ~ d + A*sin(omega*(t - t0)) to the samples. The envelope fixes d
/// and A (midpoint and half-range of the parabola-refined extrema, endpoint
/// samples included); omega and t0 start from the mean-level crossing period
/// and the first maximum, then damped Gauss-Newton least squares refines them
/// until the relative parameter change falls below 1e-10. For an exact
/// sinusoid input the recovery is exact to rounding.
inline SinusoidFit fit_sinusoid(const std::vector<TrajectorySample>& samples) {
    if (samples.size() < 16)
        throw insufficient_data_error("too few samples for a sinusoid fit");
    std::vector<detail::Extremum> maxima, minima;
    detail::refined_extrema(samples, maxima, minima);
    if (maxima.size() < 2 || minima.size() < 1)
        throw insufficient_data_error("trajectory must span at least two periods");

    double x_hi = std::max(samples.front().x, samples.back().x);
    double x_lo = std::min(samples.front().x, samples.back().x);
    for (const auto& e : maxima) x_hi = std::max(x_hi, e.x);
    for (const auto& e : minima) x_lo = std::min(x_lo, e.x);
    double d = 0.5 * (x_hi + x_lo);
    double amp = 0.5 * (x_hi - x_lo);
    if (!(amp > 0.0)) throw insufficient_data_error("degenerate amplitude");

    // crossing-based period: linear-interpolated upcrossings of the midline
    std::vector<double> ups;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        double y0 = samples[i].x - d, y1 = samples[i + 1].x - d;
        if (y0 < 0.0 && y1 >= 0.0)
            ups.push_back(samples[i].t +
                          y0 / (y0 - y1) * (samples[i + 1].t - samples[i].t));
    }
    if (ups.size() < 2)
        throw insufficient_data_error("trajectory must span at least two periods");
    double period0 = (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
    double omega = 2.0 * std::numbers::pi / period0;
    double t0 = maxima.front().t - 0.5 * std::numbers::pi / omega;

    auto sse_of = [&](double om_, double t0_) {
        double s = 0.0;
        for (const auto& sm : samples) {
            double r = sm.x - d - amp * std::sin(om_ * (sm.t - t0_));
            s += r * r;
        }
        return s;
    };
    double sse = sse_of(omega, t0);
    bool converged = false;
    for (int it = 0; it < 100 && !converged; ++it) {
        double j11 = 0.0, j12 = 0.0, j22 = 0.0, g1 = 0.0, g2 = 0.0;
        for (const auto& sm : samples) {
            double th = omega * (sm.t - t0);
            double c = std::cos(th);
            double r = sm.x - d - amp * std::sin(th);
            double jo = amp * (sm.t - t0) * c;  // d model / d omega
            double jt = -amp * omega * c;       // d model / d t0
            j11 += jo * jo;
            j12 += jo * jt;
            j22 += jt * jt;
            g1 += jo * r;
            g2 += jt * r;
        }
        double det = j11 * j22 - j12 * j12;
        if (det == 0.0) break;
        double steo = (j22 * g1 - j12 * g2) / det;
        double stet = (j11 * g2 - j12 * g1) / det;
        double lam = 1.0;
        double next = sse_of(omega + steo, t0 + stet);
        while (next >= sse && lam > 1e-12) {
            lam *= 0.5;
            next = sse_of(omega + lam * steo, t0 + lam * stet);
        }
        if (next >= sse) break;  // no damped step improves: numerical floor
        double rel = std::max(std::abs(lam * steo) / omega,
                              std::abs(lam * stet) * omega /
                                  (2.0 * std::numbers::pi));
        omega += lam * steo;
        t0 += lam * stet;
        sse = next;
        if (rel < 1e-10) converged = true;
        if (it == 99 && !converged)
            throw fit_error("sinusoid fit did not converge",
                            {d, amp, omega, t0,
                             std::sqrt(sse / static_cast<double>(samples.size()))});
    }
    if (!(omega > 0.0))
        throw fit_error("sinusoid fit drifted to a nonpositive frequency",
                        {d, amp, omega, t0,
                         std::sqrt(sse / static_cast<double>(samples.size()))});
    double period = 2.0 * std::numbers::pi / omega;
    t0 -= std::floor(t0 / period) * period;
    return {d, amp, omega, t0, std::sqrt(sse / static_cast<double>(samples.size()))};
}

inline SinusoidFit fit_sinusoid(const Trajectory& traj) {
    return fit_sinusoid(traj.samples);
}

/// One row of the deviation series: position residual against the fit and
/// speed residual against the fitted speed envelope.
struct DeviationPoint {
    double t;
    double dx;  // x(t) - (d + A*sin(omega*(t - t0)))
    double dv;  // |xdot(t)| - |A*omega*cos(omega*(t - t0))|
};

inline std::vector<DeviationPoint> deviation_series(
    const std::vector<TrajectorySample>& samples, const SinusoidFit& fit) {
    std::vector<DeviationPoint> out;
    out.reserve(samples.size());
    for (const auto& sm : samples) {
        double th = fit.omega * (sm.t - fit.t0);
        out.push_back({sm.t, sm.x - fit.offset - fit.amplitude * std::sin(th),
                       std::abs(sm.xdot) -
                           std::abs(fit.amplitude * fit.omega * std::cos(th))});
    }
    return out;
}

inline std::vector<DeviationPoint> deviation_series(const Trajectory& traj,
                                                    const SinusoidFit& fit) {
    return deviation_series(traj.samples, fit);
}

}  // namespace oft
