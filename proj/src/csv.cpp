#include "ltvi/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ltvi {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_tank_csv(const std::string& path, const TankTrajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_tank_csv: cannot open " + path);
    }
    out << "t,z1,z2,zref1,zref2,q,q_star,v,err2\n";
    for (const auto& s : traj.samples) {
        const double values[] = {s.t, s.z1, s.z2, s.zref1, s.zref2, s.q, s.q_star, s.v, s.err2};
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("write_tank_csv: non-finite value at t = " +
                                         format_full(s.t));
            }
        }
        out << format_full(s.t) << ',' << format_full(s.z1) << ',' << format_full(s.z2) << ','
            << format_full(s.zref1) << ',' << format_full(s.zref2) << ',' << format_full(s.q)
            << ',' << format_full(s.q_star) << ',' << format_full(s.v) << ','
            << format_full(s.err2) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_tank_csv: write failed for " + path);
    }
}

}  // namespace ltvi
