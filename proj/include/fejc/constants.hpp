#pragma once

#include <numbers>

namespace fejc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/**
 * Physical constants in SI units, with the electron rest energy in eV.
 *
 * Kept as a value type rather than bare globals so tests can exercise the
 * consistency check and scenarios can record exactly what they used.
 */
struct PhysicalConstants {
    double electron_mass_kg;
    double electron_charge_c;
    double hbar_js;
    double light_speed_m_s;
    double electron_rest_energy_ev;

    /// Throws PhysicsError unless every field is positive and the rest
    /// energy agrees with m c^2 / e to 1e-6 relative.
    void validate() const;

    [[nodiscard]] constexpr double hbar_over_mass() const { return hbar_js / electron_mass_kg; }
};

/// CODATA 2018 values.
inline constexpr PhysicalConstants kCodata2018{
    9.1093837015e-31,  // m_e [kg]
    1.602176634e-19,   // e [C]
    1.054571817e-34,   // hbar [J s]
    299792458.0,       // c [m/s]
    510998.95000,      // m_e c^2 [eV]
};

} // namespace fejc
