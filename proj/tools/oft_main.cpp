// Command-line front end for the oscillatory Fermat-Torricelli tree library:
// locate and classify the weighted minimizer, simulate the knot released from
// the apex, fit the sinusoidal approximation, and reproduce the canonical
// example scenario with a pass/fail report.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oft/analysis.hpp"
#include "oft/csv.hpp"
#include "oft/dynamics.hpp"
#include "oft/fermat.hpp"
#include "oft/isosceles.hpp"

namespace fs = std::filesystem;

namespace {

struct RunConfig {
    double a = 5.0;
    double phi0_deg = 40.0;
    double w2 = 1.0;
    double m0 = 1.0;
    double dt = 1e-3;
    double t_max = 30.0;
    std::string out_dir = ".";
};

oft::IsoscelesSystem system_of(const RunConfig& cfg) {
    return oft::make_isosceles(cfg.a, cfg.phi0_deg * std::numbers::pi / 180.0,
                               cfg.w2, cfg.m0);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    return f;
}

void print_ft_result(const oft::FTResult& r) {
    if (oft::is_floating(r.ftcase))
        std::cout << "case: floating\n";
    else
        std::cout << "case: absorbed at A" << r.ftcase.vertex << "\n";
    std::cout << "point: (" << oft::format_g15(r.point.x) << ", "
              << oft::format_g15(r.point.y) << ")\n"
              << "residual: " << oft::format_g15(r.residual) << "\n"
              << "iterations: " << r.iterations << "\n";
}

int cmd_ft_point(const RunConfig& cfg, const std::vector<double>& verts,
                 const std::vector<double>& wts) {
    oft::WeightedTriangle tri;
    bool shorthand = verts.empty();
    if (shorthand) {
        tri = oft::to_triangle(system_of(cfg));
    } else {
        tri.vertices = {oft::Point2{verts[0], verts[1]}, oft::Point2{verts[2], verts[3]},
                        oft::Point2{verts[4], verts[5]}};
        tri.weights = {1.0, 1.0, 1.0};
        if (!wts.empty()) tri.weights = {wts[0], wts[1], wts[2]};
    }
    oft::FTResult r = oft::weiszfeld(tri);
    print_ft_result(r);
    if (shorthand && oft::is_floating(r.ftcase)) {
        double h = system_of(cfg).h;
        std::cout << "axis distance x_O: " << oft::format_g15(h - r.point.y) << "\n";
    }
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    oft::IsoscelesSystem sys = system_of(cfg);
    oft::Trajectory traj = oft::simulate(sys, cfg.dt, cfg.t_max);

    fs::path out(cfg.out_dir);
    fs::create_directories(out);
    auto tf = open_out(out / "trajectory.csv");
    oft::write_trajectory_csv(tf, traj);
    auto ef = open_out(out / "events.csv");
    oft::write_events_csv(ef, traj);

    double alpha = oft::isosceles_ft_angle(sys.w2);
    oft::PeriodEstimate quad = oft::estimate_period_quadrature(sys);
    std::cout << "x_O                 = " << oft::format_g15(oft::isosceles_ft_x(sys)) << "\n";
    std::printf("alpha               = %.6f deg\n", alpha * 180.0 / std::numbers::pi);
    std::cout << "x_max               = " << oft::format_g15(oft::turning_point_x(sys)) << "\n"
              << "crossing speed      = " << oft::format_g15(oft::speed_at_ft(sys)) << "\n";
    try {
        oft::PeriodEstimate cross = oft::estimate_period_crossings(traj);
        std::cout << "period (crossings)  = " << oft::format_g15(cross.period) << "\n";
    } catch (const oft::insufficient_data_error&) {
        std::cout << "period (crossings)  = n/a (fewer than 3 same-direction crossings)\n";
    }
    std::cout << "period (quadrature) = " << oft::format_g15(quad.period) << "\n"
              << "max |E|             = " << oft::format_g15(traj.max_energy_drift) << "\n"
              << "wrote " << (out / "trajectory.csv").string() << " ("
              << traj.samples.size() << " samples), " << (out / "events.csv").string()
              << " (" << traj.events.o_crossings.size() << " crossings, "
              << traj.events.turning_points.size() << " turns)\n";
    return 0;
}

int cmd_analyze(const std::string& traj_path, const RunConfig& cfg) {
    std::ifstream f(traj_path);
    if (!f) throw std::runtime_error("cannot open " + traj_path);
    std::vector<oft::TrajectorySample> samples = oft::read_trajectory_csv(f);
    oft::SinusoidFit fit = oft::fit_sinusoid(samples);
    std::vector<oft::DeviationPoint> dev = oft::deviation_series(samples, fit);

    fs::path out(cfg.out_dir);
    fs::create_directories(out);
    auto ff = open_out(out / "fit.csv");
    oft::write_fit_csv(ff, fit);
    auto df = open_out(out / "deviation.csv");
    oft::write_deviation_csv(df, dev);

    std::cout << "d     = " << oft::format_g15(fit.offset) << "\n"
              << "A     = " << oft::format_g15(fit.amplitude) << "\n"
              << "omega = " << oft::format_g15(fit.omega) << "\n"
              << "t0    = " << oft::format_g15(fit.t0) << "\n"
              << "rmse  = " << oft::format_g15(fit.rmse) << "\n"
              << "wrote " << (out / "fit.csv").string() << ", "
              << (out / "deviation.csv").string() << " (" << dev.size() << " rows)\n";
    return 0;
}

// Reference values for the canonical scenario (a=5, phi0=40 deg, unit weights
// and mass): the published fit coefficients and the closed-form quantities
// they approximate.
int cmd_reproduce_example1(const RunConfig& cfg) {
    bool all_ok = true;
    auto check = [&](bool ok, const std::string& label) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
        all_ok = all_ok && ok;
    };
    char buf[256];

    oft::IsoscelesSystem sys = system_of(cfg);
    double alpha = oft::isosceles_ft_angle(sys.w2);
    std::snprintf(buf, sizeof buf,
                  "equilibrium angle alpha = %.6f deg (expect 60 to 1e-12 rad)",
                  alpha * 180.0 / std::numbers::pi);
    check(std::abs(alpha - std::numbers::pi / 3.0) <= 1e-12, buf);

    double x_ft = oft::isosceles_ft_x(sys);
    oft::FTResult ft = oft::weiszfeld(oft::to_triangle(sys));
    std::snprintf(buf, sizeof buf,
                  "axis distance x_O = %.9f, closed form vs iterative within 1e-8",
                  x_ft);
    check(oft::is_floating(ft.ftcase) && std::abs((sys.h - ft.point.y) - x_ft) <= 1e-8 &&
              std::abs(ft.point.x) <= 1e-8,
          buf);
    oft::Trajectory traj = oft::simulate(sys, cfg.dt, cfg.t_max);

    double x_max_events = 0.0;
    for (const auto& tp : traj.events.turning_points)
        x_max_events = std::max(x_max_events, tp.x);
    std::snprintf(buf, sizeof buf,
                  "turning point x_max = %.7f (expect 3.5473 +/- 5e-3)", x_max_events);
    check(std::abs(x_max_events - 3.5473) <= 5e-3, buf);

    oft::SinusoidFit fit = oft::fit_sinusoid(traj);
    std::snprintf(buf, sizeof buf,
                  "fit offset %.6f and amplitude %.6f within 1%% of 1.77363",
                  fit.offset, fit.amplitude);
    check(std::abs(fit.offset - 1.77363) <= 0.01 * 1.77363 &&
              std::abs(fit.amplitude - 1.77363) <= 0.01 * 1.77363,
          buf);
    std::snprintf(buf, sizeof buf,
                  "fit offset + amplitude = %.7f (expect 3.5473 +/- 5e-3)",
                  fit.offset + fit.amplitude);
    check(std::abs(fit.offset + fit.amplitude - 3.5473) <= 5e-3, buf);
    std::snprintf(buf, sizeof buf, "fit omega = %.6f within 2%% of 0.61133", fit.omega);
    check(std::abs(fit.omega - 0.61133) <= 0.02 * 0.61133, buf);

    oft::PeriodEstimate pc = oft::estimate_period_crossings(traj);
    oft::PeriodEstimate pq = oft::estimate_period_quadrature(sys);
    std::snprintf(buf, sizeof buf,
                  "period estimates agree: crossings %.9f vs quadrature %.9f (rel < 1e-4)",
                  pc.period, pq.period);
    check(std::abs(pc.period - pq.period) <= 1e-4 * pq.period, buf);

    double v_ft = oft::speed_at_ft(sys);
    double v_sim = traj.events.o_crossings.empty()
                       ? 0.0
                       : std::abs(traj.events.o_crossings.front().xdot);
    std::snprintf(buf, sizeof buf,
                  "crossing speed %.9f: closed form vs simulated %.9f within 1e-6, "
                  "reference peak 1.08427 within 3%%",
                  v_ft, v_sim);
    check(!traj.events.o_crossings.empty() && std::abs(v_ft - v_sim) <= 1e-6 &&
              std::abs(v_ft - 1.08427) <= 0.03 * 1.08427,
          buf);
    bool speeds_ok = !traj.events.o_crossings.empty();
    for (const auto& c : traj.events.o_crossings)
        speeds_ok = speeds_ok && std::abs(std::abs(c.xdot) - v_ft) <= 1e-6;
    check(speeds_ok, "every O-crossing has the closed-form speed to 1e-6");

    double work = oft::work_along_axis(sys, x_ft);
    std::snprintf(buf, sizeof buf,
                  "work to x_O = %.9f, nonzero, equals m0*v^2/2 within 1e-6", work);
    check(work > 0.0 && std::abs(work - 0.5 * sys.m0 * v_sim * v_sim) <= 1e-6, buf);

    std::snprintf(buf, sizeof buf, "max |E(t)| = %.3g (expect < 1e-8)",
                  traj.max_energy_drift);
    check(traj.max_energy_drift < 1e-8, buf);

    double max_resid = 0.0;
    for (const auto& s : traj.samples) {
        oft::PhiState ps = oft::phi_state_of(sys, {s.t, s.x, s.xdot});
        max_resid = std::max(max_resid, std::abs(oft::phi_ode_residual(
                                            sys, ps.phi, ps.phidot, ps.phiddot)));
    }
    std::snprintf(buf, sizeof buf, "angle-form ODE residual max = %.3g (expect < 1e-6)",
                  max_resid);
    check(max_resid < 1e-6, buf);

    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> ux(0.0, 2.0 * sys.h);
    double eps = 1e-6 * sys.h;
    double max_fd = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double x = ux(rng);
        double fd = (oft::potential(sys, x + eps) - oft::potential(sys, x - eps)) /
                    (2.0 * eps);
        max_fd = std::max(max_fd, std::abs(oft::axial_force(sys, x) + fd));
    }
    std::snprintf(buf, sizeof buf, "force = -dV/dx by central differences, max err %.3g",
                  max_fd);
    check(max_fd < 1e-6, buf);

    oft::KnotState st{0.0, 0.0, 0.0};
    for (int i = 0; i < 2000; ++i) st = oft::step_rk4(sys, st, cfg.dt);
    for (int i = 0; i < 2000; ++i) st = oft::step_rk4(sys, st, -cfg.dt);
    std::snprintf(buf, sizeof buf, "time reversal returns to release state (|x| = %.3g)",
                  std::abs(st.x));
    check(std::abs(st.x) < 1e-9 && std::abs(st.xdot) < 1e-9, buf);

    double max_rt = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        double x = 2.0 * sys.h * i / 1000.0;
        max_rt = std::max(max_rt,
                          std::abs(oft::x_of_phi(sys, oft::phi_of_x(sys, x)) - x));
    }
    std::snprintf(buf, sizeof buf, "x to phi round trip max err %.3g (expect < 1e-12)",
                  max_rt);
    check(max_rt < 1e-12, buf);

    std::snprintf(buf, sizeof buf,
                  "same-direction crossings equally spaced (rel spread %.3g < 1e-4)",
                  pc.uncertainty / pc.period);
    check(pc.uncertainty <= 1e-4 * pc.period, buf);

    fs::path out(cfg.out_dir);
    fs::create_directories(out);
    auto tf = open_out(out / "trajectory.csv");
    oft::write_trajectory_csv(tf, traj);
    auto ef = open_out(out / "events.csv");
    oft::write_events_csv(ef, traj);
    auto ff = open_out(out / "fit.csv");
    oft::write_fit_csv(ff, fit);
    auto df = open_out(out / "deviation.csv");
    oft::write_deviation_csv(df, oft::deviation_series(traj, fit));

    std::cout << (all_ok ? "all checks passed\n" : "some checks FAILED\n");
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillatory Fermat-Torricelli tree toolkit"};
    app.fallthrough();
    app.set_config("--config", "", "read options from a `key = value` file ('#' comments)");

    RunConfig cfg;
    app.add_option("--a", cfg.a, "equal side length A1A2 = A1A3")->capture_default_str();
    app.add_option("--phi0-deg", cfg.phi0_deg, "half apex angle in degrees, in (0, 90)")
        ->capture_default_str();
    app.add_option("--w2", cfg.w2, "weight at each base vertex (apex weight is 1)")
        ->capture_default_str();
    app.add_option("--m0", cfg.m0, "knot mass")->capture_default_str();
    app.add_option("--dt", cfg.dt, "integration step")->capture_default_str();
    app.add_option("--t-max", cfg.t_max, "integration horizon")->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory for CSV files")
        ->capture_default_str();

    auto* ft = app.add_subcommand(
        "ft-point", "classify and locate the weighted Fermat-Torricelli point");
    std::vector<double> verts, wts;
    ft->add_option("--vertices", verts,
                   "general triangle as six numbers: x1 y1 x2 y2 x3 y3")
        ->expected(6);
    ft->add_option("--weights", wts, "three weights w1 w2 w3 (with --vertices)")
        ->expected(3);

    app.add_subcommand("simulate",
                       "integrate the knot released from the apex; writes "
                       "trajectory.csv and events.csv");
    auto* ana = app.add_subcommand(
        "analyze", "fit a sinusoid to a trajectory CSV; writes fit.csv and deviation.csv");
    std::string traj_path;
    ana->add_option("trajectory", traj_path, "trajectory CSV path")->required();
    app.add_subcommand("reproduce-example1",
                       "run the canonical scenario and check its known quantities");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    try {
        if (ft->parsed()) return cmd_ft_point(cfg, verts, wts);
        if (app.get_subcommand("simulate")->parsed()) return cmd_simulate(cfg);
        if (ana->parsed()) return cmd_analyze(traj_path, cfg);
        return cmd_reproduce_example1(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
