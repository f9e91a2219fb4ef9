#pragma once

namespace qwell {

// All internal quantities are SI: metres, seconds, hertz (not rad/s unless a
// variable is explicitly named omega), joules, kilograms, radians.
struct PhysicalConstants {
    double c = 299792458.0;               // m/s, exact
    double hbar = 1.054571817e-34;        // J s
    double electron_mass = 9.1093837015e-31;  // kg
};

inline constexpr double kElectronVolt = 1.602176634e-19;  // J, exact

}  // namespace qwell
