#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "oft/analysis.hpp"

namespace oft {

// ============================================================================
// CSV serialization. Numbers are written with 15 significant digits so
// outputs are diff-stable across runs; trajectory files carry one leading
// comment line stating the units.
// ============================================================================

struct csv_error : std::runtime_error {
    std::size_t line;
    csv_error(std::size_t ln, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

inline std::string format_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline const char* kTrajectoryHeader = "t,x,xdot,phi,energy";

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "# oscillatory Fermat-Torricelli trajectory; t in time units (g = 1), "
          "x and xdot along the axis from A1, phi in radians\n";
    os << kTrajectoryHeader << '\n';
    for (const TrajectorySample& s : traj.samples)
        os << format_g15(s.t) << ',' << format_g15(s.x) << ',' << format_g15(s.xdot)
           << ',' << format_g15(s.phi) << ',' << format_g15(s.energy) << '\n';
}

/// Events in chronological order. Crossing rows carry the interpolated
/// velocity and the equilibrium position; turn rows carry the interpolated
/// position and an exact zero velocity.
inline void write_events_csv(std::ostream& os, const Trajectory& traj) {
    double x_ft = isosceles_ft_x(traj.system);
    os << "kind,t,x,xdot\n";
    const auto& cs = traj.events.o_crossings;
    const auto& ts = traj.events.turning_points;
    std::size_t i = 0, j = 0;
    while (i < cs.size() || j < ts.size()) {
        bool take_crossing =
            j >= ts.size() || (i < cs.size() && cs[i].t <= ts[j].t);
        if (take_crossing) {
            os << (cs[i].direction > 0 ? "crossing+" : "crossing-") << ','
               << format_g15(cs[i].t) << ',' << format_g15(x_ft) << ','
               << format_g15(cs[i].xdot) << '\n';
            ++i;
        } else {
            os << "turn," << format_g15(ts[j].t) << ',' << format_g15(ts[j].x)
               << ",0\n";
            ++j;
        }
    }
}

inline void write_fit_csv(std::ostream& os, const SinusoidFit& fit) {
    os << "d,A,omega,t0,rmse\n";
    os << format_g15(fit.offset) << ',' << format_g15(fit.amplitude) << ','
       << format_g15(fit.omega) << ',' << format_g15(fit.t0) << ','
       << format_g15(fit.rmse) << '\n';
}

inline void write_deviation_csv(std::ostream& os,
                                const std::vector<DeviationPoint>& series) {
    os << "t,dx,dv\n";
    for (const DeviationPoint& p : series)
        os << format_g15(p.t) << ',' << format_g15(p.dx) << ',' << format_g15(p.dv)
           << '\n';
}

/// Reads samples back from the trajectory schema. Comment lines (leading '#')
/// are skipped; the header must match exactly; rows must hold five
/// comma-separated numbers with strictly increasing time. Malformed input
/// raises csv_error carrying the offending line number.
inline std::vector<TrajectorySample> read_trajectory_csv(std::istream& is) {
    std::vector<TrajectorySample> out;
    std::string line;
    std::size_t ln = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kTrajectoryHeader)
                throw csv_error(ln, "expected header \"" +
                                        std::string(kTrajectoryHeader) + "\"");
            header_seen = true;
            continue;
        }
        double vals[5];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int k = 0; k < 5; ++k) {
            auto [ptr, ec] = std::from_chars(p, end, vals[k]);
            if (ec != std::errc{})
                throw csv_error(ln, "bad number in column " + std::to_string(k + 1));
            p = ptr;
            if (k < 4) {
                if (p >= end || *p != ',')
                    throw csv_error(ln, "expected 5 comma-separated values");
                ++p;
            }
        }
        if (p != end) throw csv_error(ln, "trailing characters after column 5");
        if (!out.empty() && !(vals[0] > out.back().t))
            throw csv_error(ln, "time must be strictly increasing");
        out.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
    }
    if (!header_seen) throw csv_error(ln == 0 ? 1 : ln, "missing trajectory header");
    if (out.empty()) throw csv_error(ln, "no data rows");
    return out;
}

}  // namespace oft
