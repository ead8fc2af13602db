#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fejc/constants.hpp"

namespace fejc {

using cplx = std::complex<double>;

/**
 * Scalar parameters of one experiment.
 *
 * Units are carried in the field names. `coupling_gq` is the dimensionless
 * product g*T of the target-mode coupling and the transit time T = L/v.
 */
struct PhysicalSetup {
    double kinetic_energy_ev = 100.0;
    double energy_uncertainty_ev = 0.010;
    double cavity_length_m = 10e-6;
    double design_wavelength_m = 532e-9;
    double refractive_index = 1.5;
    double grating_period_m = 0.0;  // 0 until resolved by phase matching
    double free_spectral_range_rad_s = kTwoPi * 13e12;
    double coupling_gq = kPi / 2.0;
    double loss_probability = 1e-2;

    /// Throws PhysicsError on any invariant violation, including beta >= 0.1.
    void validate(const PhysicalConstants& pc = kCodata2018) const;
};

enum class ModeRole { signal, loss };

[[nodiscard]] std::string to_string(ModeRole role);

struct CavityMode {
    int index = 0;                    // relative to the target mode j0
    double frequency_rad_s = 0.0;
    double wavenumber_rad_m = 0.0;
    double total_recoil_rad_m = 0.0;  // wavenumber + 2 pi / grating period
    ModeRole role = ModeRole::signal;
};

/// Ordered list of cavity modes; `target` is the position of j0 in `modes`.
struct CavityModeSet {
    std::vector<CavityMode> modes;
    std::size_t target = 0;

    [[nodiscard]] const CavityMode& target_mode() const { return modes.at(target); }
    [[nodiscard]] std::size_t size() const { return modes.size(); }
    [[nodiscard]] std::size_t signal_count() const;
};

/// Uniform electron momentum lattice k_i = k0 + offset_i * spacing.
class MomentumGrid {
public:
    MomentumGrid(double center_rad_m, double spacing_rad_m, int first_offset, std::size_t size);

    [[nodiscard]] double center() const { return center_; }
    [[nodiscard]] double spacing() const { return spacing_; }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] double span() const { return spacing_ * static_cast<double>(size_ - 1); }
    [[nodiscard]] int first_offset() const { return first_offset_; }
    [[nodiscard]] int last_offset() const { return first_offset_ + static_cast<int>(size_) - 1; }
    [[nodiscard]] int offset(std::size_t i) const { return first_offset_ + static_cast<int>(i); }
    [[nodiscard]] double k(std::size_t i) const { return center_ + offset(i) * spacing_; }
    [[nodiscard]] std::size_t center_index() const { return static_cast<std::size_t>(-first_offset_); }
    [[nodiscard]] std::optional<std::size_t> index_of_offset(int offset) const;

    bool operator==(const MomentumGrid&) const = default;

private:
    double center_;
    double spacing_;
    int first_offset_;
    std::size_t size_;
};

/**
 * Truncated multimode Fock space, occupations 0..cutoff per mode.
 *
 * Occupation tuples are little-endian in mode index:
 * flat = sum_j n_j (cutoff+1)^j.
 */
class FockSpace {
public:
    FockSpace(std::size_t mode_count, int cutoff);

    [[nodiscard]] std::size_t mode_count() const { return mode_count_; }
    [[nodiscard]] int cutoff() const { return cutoff_; }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

    [[nodiscard]] std::size_t flatten(std::span<const int> occupation) const;
    [[nodiscard]] std::vector<int> unflatten(std::size_t index) const;
    [[nodiscard]] int occupation(std::size_t index, std::size_t mode) const {
        return static_cast<int>((index / strides_[mode]) % static_cast<std::size_t>(cutoff_ + 1));
    }

    bool operator==(const FockSpace& other) const {
        return mode_count_ == other.mode_count_ && cutoff_ == other.cutoff_;
    }

private:
    std::size_t mode_count_;
    int cutoff_;
    std::size_t size_;
    std::vector<std::size_t> strides_;
};

/// Product basis: momentum-major, flat = i * fock.size() + fock_index.
struct Basis {
    MomentumGrid grid;
    FockSpace fock;

    [[nodiscard]] std::size_t dimension() const { return grid.size() * fock.size(); }
    [[nodiscard]] std::size_t index(std::size_t momentum, std::size_t fock_index) const {
        return momentum * fock.size() + fock_index;
    }
    [[nodiscard]] std::size_t momentum_index(std::size_t flat) const { return flat / fock.size(); }
    [[nodiscard]] std::size_t fock_index(std::size_t flat) const { return flat % fock.size(); }

    bool operator==(const Basis&) const = default;
};

/// Complex amplitudes over a Basis.
class JointState {
public:
    JointState(Basis basis, Eigen::VectorXcd amplitudes);

    [[nodiscard]] const Basis& basis() const { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    [[nodiscard]] double norm_squared() const { return amplitudes_.squaredNorm(); }

private:
    Basis basis_;
    Eigen::VectorXcd amplitudes_;
};

struct LabeledStateProbability {
    std::string label;
    double probability = 0.0;
};

/**
 * Recoil-commensurate grid centred on k0 = m v / hbar, spanning 7 recoils of
 * the target mode with spacing Q_j0 / points_per_recoil.
 *
 * Throws GridError when some mode recoil sits half a cell (or more) away
 * from the lattice.
 */
[[nodiscard]] MomentumGrid build_momentum_grid(const PhysicalSetup& setup, const CavityModeSet& modes,
                                               int points_per_recoil,
                                               const PhysicalConstants& pc = kCodata2018);

/// Momentum standard deviation sigma_k = sigma_E e / (hbar v).
[[nodiscard]] double momentum_width(double energy_uncertainty_ev, double velocity_m_s,
                                    const PhysicalConstants& pc = kCodata2018);

/// Discretely normalized real Gaussian amplitudes on the grid, |psi|^2 having
/// standard deviation sigma_k. sigma_k = 0 gives a delta on the centre point.
/// Amplitudes below 1e-16 of the peak are dropped.
[[nodiscard]] Eigen::VectorXd gaussian_profile(const MomentumGrid& grid, double sigma_k);

/**
 * Gaussian wavepacket at k0 times the Fock state `occupation`.
 *
 * Throws GridError if the continuous packet loses more than 1e-6 of its norm
 * outside the grid, and std::out_of_range for occupations above the cutoff.
 */
[[nodiscard]] JointState initial_state(const MomentumGrid& grid, const FockSpace& fock,
                                       double energy_uncertainty_ev, std::span<const int> occupation,
                                       const PhysicalConstants& pc = kCodata2018);

} // namespace fejc
