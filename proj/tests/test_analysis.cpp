#include <catch2/catch_amalgamated.hpp>

#include "oft/analysis.hpp"
#include "oft/dynamics.hpp"
#include "oft/isosceles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using Catch::Approx;
using namespace oft;

namespace {

constexpr double kPi = std::numbers::pi;

IsoscelesSystem example_system() {
    return make_isosceles(5.0, 40.0 * kPi / 180.0, 1.0, 1.0);
}

std::vector<TrajectorySample> synthetic_sinusoid(double d, double A, double om,
                                                 double t0, double dt,
                                                 double t_max) {
    std::vector<TrajectorySample> out;
    auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) * dt;
        double th = om * (t - t0);
        out.push_back({t, d + A * std::sin(th), A * om * std::cos(th), 0.0, 0.0});
    }
    return out;
}

}  // namespace

TEST_CASE("crossing speed and work along the axis", "[analysis]") {
    IsoscelesSystem sys = example_system();

    CHECK(speed_at_ft(sys) == Approx(1.0982475059301675).margin(1e-12));
    CHECK(work_along_axis(sys, 1.9746542181734927) ==
          Approx(0.60307379214091661).margin(1e-13));

    // Work is the exact negation of the potential, not a separate quadrature.
    for (double x : {0.0, 0.5, 1.9746542181734927, 3.0, 3.5473, 7.0})
        CHECK(work_along_axis(sys, x) == -potential(sys, x));

    // At the far turning point all the work has been returned.
    CHECK(std::abs(work_along_axis(sys, 3.5473)) < 1e-3);

    // Work at the crossing equals the kinetic energy there.
    double v = speed_at_ft(sys);
    CHECK(work_along_axis(sys, 1.9746542181734927) ==
          Approx(0.5 * sys.m0 * v * v).margin(1e-12));

    // Near-critical release: barely below the equilibrium angle the knot
    // barely moves, but the crossing speed stays positive.
    IsoscelesSystem barely = make_isosceles(5.0, 59.999 * kPi / 180.0, 1.0, 1.0);
    double v_barely = speed_at_ft(barely);
    CHECK(v_barely > 0.0);
    CHECK(v_barely < 0.1);

    IsoscelesSystem diag = make_isosceles(5.0, 30.0 * kPi / 180.0, std::sqrt(0.5), 1.0);
    CHECK(speed_at_ft(diag) == Approx(0.69417691252775304).margin(1e-12));
}

TEST_CASE("larger base weights deepen the well monotonically", "[analysis]") {
    const double w2s[5] = {0.8, 1.0, 1.5, 2.0, 3.0};
    const double alphas[5] = {0.89566479385786502, 1.0471975511965979,
                              1.2309594173407747, 1.318116071652818,
                              1.4033482475752073};
    const double speeds[5] = {0.55780005112474151, 1.0982475059301675,
                              2.0393078389317476, 2.7284608287761478,
                              3.7830844219863242};
    double prev_alpha = 0.0, prev_speed = 0.0;
    for (int i = 0; i < 5; ++i) {
        IsoscelesSystem sys = make_isosceles(5.0, 40.0 * kPi / 180.0, w2s[i], 1.0);
        double alpha = isosceles_ft_angle(sys.w2);
        double v = speed_at_ft(sys);
        CHECK(alpha == Approx(alphas[i]).margin(1e-13));
        CHECK(v == Approx(speeds[i]).margin(1e-12));
        CHECK(alpha > prev_alpha);
        CHECK(v > prev_speed);
        prev_alpha = alpha;
        prev_speed = v;
    }
}

TEST_CASE("period from O-crossings", "[analysis]") {
    IsoscelesSystem sys = example_system();
    Trajectory traj = simulate(sys, 1e-3, 30.0);

    PeriodEstimate pc = estimate_period_crossings(traj);
    CHECK(pc.method == PeriodEstimate::Method::crossings);
    CHECK(pc.period == Approx(10.27789018684199).margin(1e-6));
    CHECK(pc.uncertainty < 1e-8);

    PeriodEstimate pq = estimate_period_quadrature(sys);
    CHECK(std::abs(pc.period - pq.period) < 1e-4 * pq.period);

    // Fewer than three same-direction crossings is not enough for a gap pair.
    Trajectory truncated = simulate(sys, 1e-3, 12.0);
    CHECK_THROWS_AS(estimate_period_crossings(truncated), insufficient_data_error);
    Trajectory brief = simulate(sys, 1e-3, 1.0);
    CHECK_THROWS_AS(estimate_period_crossings(brief), insufficient_data_error);
}

TEST_CASE("period from turning-point quadrature", "[analysis]") {
    IsoscelesSystem sys = example_system();

    CHECK(turning_point_x(sys) == Approx(3.5472592415863744).margin(1e-10));

    PeriodEstimate pq = estimate_period_quadrature(sys);
    CHECK(pq.method == PeriodEstimate::Method::quadrature);
    CHECK(pq.period == Approx(10.277890186813726).margin(1e-9));
    CHECK(pq.uncertainty < 1e-9);

    IsoscelesSystem diag = make_isosceles(5.0, 30.0 * kPi / 180.0, std::sqrt(0.5), 1.0);
    CHECK(turning_point_x(diag) == Approx(3.1783724519578218).margin(1e-9));
    CHECK(estimate_period_quadrature(diag).period ==
          Approx(14.549960310762525).margin(1e-8));
}

TEST_CASE("quadrature reproduces the harmonic oscillator exactly", "[analysis]") {
    // V = k/2 ((x-c)^2 - A^2) has turning points c +/- A and period
    // 2 pi sqrt(m0/k) independent of amplitude.
    double k = 2.3, c = 0.7, A = 1.1, m0 = 1.7;
    auto v = [&](double x) { return 0.5 * k * ((x - c) * (x - c) - A * A); };
    double t = 2.0 * half_period_quadrature(v, m0, c - A, c + A, 20);
    CHECK(t == Approx(2.0 * kPi * std::sqrt(m0 / k)).margin(1e-8));
}

TEST_CASE("sinusoid fit on the canonical trajectory", "[analysis]") {
    Trajectory traj = simulate(example_system(), 1e-3, 30.0);
    SinusoidFit fit = fit_sinusoid(traj);

    // The envelope pins offset and amplitude to half the excursion.
    CHECK(fit.offset == Approx(1.7736296207931872).margin(1e-9));
    CHECK(fit.amplitude == Approx(1.7736296207931872).margin(1e-9));
    CHECK(fit.offset + fit.amplitude == Approx(3.5472592415863744).margin(1e-9));
    CHECK(std::abs(fit.offset - fit.amplitude) < fit.rmse);

    CHECK(fit.omega == Approx(0.61443173865770662).margin(1e-6));
    CHECK(fit.t0 == Approx(2.634287152260582).margin(1e-5));
    CHECK(fit.rmse == Approx(0.11766932516818815).margin(1e-6));

    // Against the angular frequency of the measured period the fit stays
    // within one percent: the motion is close to, but not exactly, harmonic.
    double om_period = 2.0 * kPi / estimate_period_quadrature(example_system()).period;
    CHECK(std::abs(fit.omega - om_period) < 0.01 * om_period);

    // Stationarity: one fresh Gauss-Newton step from the returned parameters
    // must be negligible in both coordinates.
    double j11 = 0.0, j12 = 0.0, j22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (const auto& s : traj.samples) {
        double th = fit.omega * (s.t - fit.t0);
        double cth = std::cos(th);
        double r = s.x - fit.offset - fit.amplitude * std::sin(th);
        double jo = fit.amplitude * (s.t - fit.t0) * cth;
        double jt = -fit.amplitude * fit.omega * cth;
        j11 += jo * jo;
        j12 += jo * jt;
        j22 += jt * jt;
        g1 += jo * r;
        g2 += jt * r;
    }
    double det = j11 * j22 - j12 * j12;
    REQUIRE(det != 0.0);
    double step_om = (j22 * g1 - j12 * g2) / det;
    double step_t0 = (j11 * g2 - j12 * g1) / det;
    CHECK(std::abs(step_om) < 1e-8 * fit.omega);
    CHECK(std::abs(step_t0) * fit.omega < 1e-8);
}

TEST_CASE("sinusoid fit recovers an exact sinusoid", "[analysis]") {
    double d = 1.2, A = 0.8, om = 0.9, t0 = 2.0137;
    auto samples = synthetic_sinusoid(d, A, om, t0, 1e-3, 30.0);
    SinusoidFit fit = fit_sinusoid(samples);
    CHECK(std::abs(fit.offset - d) < 1e-8);
    CHECK(std::abs(fit.amplitude - A) < 1e-8);
    CHECK(std::abs(fit.omega - om) < 1e-8);
    CHECK(std::abs(fit.t0 - t0) < 1e-8);
    CHECK(fit.rmse < 1e-10);

    for (const auto& p : deviation_series(samples, fit)) {
        CHECK(std::abs(p.dx) < 1e-10);
        CHECK(std::abs(p.dv) < 1e-10);
    }
}

TEST_CASE("sinusoid fit refuses data without two full periods", "[analysis]") {
    CHECK_THROWS_AS(fit_sinusoid(synthetic_sinusoid(1.0, 0.5, 1.0, 0.0, 1e-2, 0.1)),
                    insufficient_data_error);
    // 30 s of a 63 s period: one maximum at most.
    CHECK_THROWS_AS(fit_sinusoid(synthetic_sinusoid(1.0, 0.5, 0.1, 0.0, 1e-2, 30.0)),
                    insufficient_data_error);
    // The canonical run truncated before the second maximum.
    Trajectory truncated = simulate(example_system(), 1e-3, 12.0);
    CHECK_THROWS_AS(fit_sinusoid(truncated), insufficient_data_error);
}

TEST_CASE("deviation series against the canonical fit", "[analysis]") {
    Trajectory traj = simulate(example_system(), 1e-3, 30.0);
    SinusoidFit fit = fit_sinusoid(traj);
    std::vector<DeviationPoint> dev = deviation_series(traj, fit);

    REQUIRE(dev.size() == traj.samples.size());
    double max_dx = 0.0, max_dv = 0.0;
    for (std::size_t i = 0; i < dev.size(); ++i) {
        CHECK(dev[i].t == traj.samples[i].t);
        max_dx = std::max(max_dx, std::abs(dev[i].dx));
        max_dv = std::max(max_dv, std::abs(dev[i].dv));
    }
    CHECK(max_dx == Approx(0.24110417715730814).margin(1e-4));
    CHECK(max_dv == Approx(0.14624063463926473).margin(1e-4));
}
