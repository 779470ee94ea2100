#pragma once

// Trace output with full double precision for golden-trace regression.

#include <string>

#include "ltvi/tank.hpp"

namespace ltvi {

/// Header is exactly: t,z1,z2,zref1,zref2,q,q_star,v,err2. Values use 17
/// significant digits. Throws std::runtime_error on I/O failure or when a
/// value is not finite.
void write_tank_csv(const std::string& path, const TankTrajectory& traj);

std::string format_full(double v);

}  // namespace ltvi
