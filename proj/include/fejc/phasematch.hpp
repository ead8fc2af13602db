#pragma once

#include <vector>

#include "fejc/constants.hpp"
#include "fejc/model.hpp"

namespace fejc {

struct ElectronKinematics {
    double beta = 0.0;
    double velocity_m_s = 0.0;
    double wavenumber_rad_m = 0.0;    // k0 = m v / hbar
    double time_per_length_s_m = 0.0; // 1 / v

    [[nodiscard]] double transit_time(double length_m) const { return length_m * time_per_length_s_m; }
};

/// Nonrelativistic kinematics; throws PhysicsError unless 0 < E and beta < 0.1.
[[nodiscard]] ElectronKinematics electron_kinematics(double kinetic_energy_ev,
                                                     const PhysicalConstants& pc = kCodata2018);

struct GratingSolution {
    double period_m = 0.0;
    double recoil_rad_m = 0.0;            // Q, smaller root of the resonance quadratic
    double photon_wavenumber_rad_m = 0.0; // q = n w0 / c
    double frequency_rad_s = 0.0;         // w0 = 2 pi c / lambda0
    double residual_rad_s = 0.0;          // (hbar/m) k0 Q - hbar Q^2 / 2m - w0
};

/**
 * Grating period that phase-matches single emission from k0 into the design
 * mode. Throws PhysicsError when the electron is too slow for any real root or
 * the resulting period is not positive.
 */
[[nodiscard]] GratingSolution solve_grating_period(double kinetic_energy_ev, double design_wavelength_m,
                                                   double refractive_index,
                                                   const PhysicalConstants& pc = kCodata2018);

/// Copy of `setup` with the grating period filled in from phase matching.
[[nodiscard]] PhysicalSetup with_phase_matched_grating(PhysicalSetup setup,
                                                       const PhysicalConstants& pc = kCodata2018);

/// Design wavelength that makes (hbar/m)(2 pi/Lambda)^2 equal `ratio` times the
/// free spectral range, with everything else in `setup` held fixed.
[[nodiscard]] double wavelength_for_detuning_ratio(const PhysicalSetup& setup, double ratio,
                                                   const PhysicalConstants& pc = kCodata2018);

struct ModeDetuning {
    int index = 0;
    double emission_rad_s = 0.0;
    double absorption_rad_s = 0.0;
};

struct DetuningReport {
    std::vector<ModeDetuning> modes;
    double recoil_detuning_rad_s = 0.0;       // (hbar/m)(2 pi/Lambda)^2
    double exact_recoil_detuning_rad_s = 0.0; // hbar Q^2 / m
    double min_detuning_rad_s = 0.0;
    double fraction = 0.0;                    // min detuning / free spectral range
    double transit_time_s = 0.0;
    double criterion_value = 0.0;             // min detuning * T
    double criterion_threshold = 0.0;
    bool passes = false;
};

inline constexpr double kDefaultCriterionThreshold = 10.0 * kTwoPi;

/**
 * Detunings of the second transition from every mode in `modes` (signal
 * modes only), and the smallest detuning from the whole lattice of modes
 * w0 + j dw, which is what bounds the leakage into the neglected levels.
 */
[[nodiscard]] DetuningReport detuning_table(const PhysicalSetup& setup, const CavityModeSet& modes,
                                            double criterion_threshold = kDefaultCriterionThreshold,
                                            const PhysicalConstants& pc = kCodata2018);

/// p pi / (n beta): the criterion value when dw = pi c / (n L).
[[nodiscard]] double closed_form_criterion(double fraction, double refractive_index, double beta);

/// sinc[(Q_j - q) L / 2], with sinc(0) = 1.
[[nodiscard]] double coupling_kernel(double transfer_rad_m, const CavityMode& mode, double length_m);

/**
 * Longitudinal modes w0 + j dw for j symmetric around the design mode, plus
 * `loss_count` loss channels placed on the design mode's resonance.
 */
[[nodiscard]] CavityModeSet fabry_perot_modes(const PhysicalSetup& setup, int signal_count = 3,
                                              int loss_count = 1, const PhysicalConstants& pc = kCodata2018);

/**
 * Two signal modes sharing the design recoil Q: the first is
 * resonant with emission from k0, the second with the following emission
 * from k0 - Q. Loss channels follow, resonant with the first transition.
 */
[[nodiscard]] CavityModeSet ladder_modes(const PhysicalSetup& setup, int loss_count = 1,
                                         const PhysicalConstants& pc = kCodata2018);

/**
 * Two signal modes both resonant with emission from k0, with recoils
 * Q (first) and Q + offset_cells grid cells (second). Loss channels follow,
 * resonant with the first mode.
 */
[[nodiscard]] CavityModeSet lambda_modes(const PhysicalSetup& setup, int points_per_recoil, int offset_cells,
                                         int loss_count = 1, const PhysicalConstants& pc = kCodata2018);

} // namespace fejc
