#include "fejc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fejc/errors.hpp"

namespace fejc {

void PhysicalConstants::validate() const {
    if (!(electron_mass_kg > 0.0 && electron_charge_c > 0.0 && hbar_js > 0.0 && light_speed_m_s > 0.0 &&
          electron_rest_energy_ev > 0.0)) {
        throw PhysicsError("physical constants must be strictly positive");
    }
    const double mc2_ev = electron_mass_kg * light_speed_m_s * light_speed_m_s / electron_charge_c;
    if (std::abs(mc2_ev - electron_rest_energy_ev) > 1e-6 * electron_rest_energy_ev) {
        throw PhysicsError("electron rest energy inconsistent with m c^2");
    }
}

void PhysicalSetup::validate(const PhysicalConstants& pc) const {
    if (!(kinetic_energy_ev > 0.0)) throw PhysicsError("kinetic energy must be positive");
    const double beta = std::sqrt(2.0 * kinetic_energy_ev / pc.electron_rest_energy_ev);
    if (beta >= 0.1) throw PhysicsError("electron is not slow: beta >= 0.1");
    if (!(energy_uncertainty_ev >= 0.0)) throw PhysicsError("energy uncertainty must be non-negative");
    if (!(cavity_length_m > 0.0)) throw PhysicsError("cavity length must be positive");
    if (!(design_wavelength_m > 0.0)) throw PhysicsError("design wavelength must be positive");
    if (!(refractive_index > 0.0)) throw PhysicsError("refractive index must be positive");
    if (!(grating_period_m > 0.0)) throw PhysicsError("grating period must be positive");
    if (!(free_spectral_range_rad_s > 0.0)) throw PhysicsError("free spectral range must be positive");
    if (!std::isfinite(coupling_gq)) throw PhysicsError("coupling must be finite");
    if (!(loss_probability >= 0.0 && loss_probability < 1.0)) {
        throw PhysicsError("loss probability must lie in [0, 1)");
    }
}

std::string to_string(ModeRole role) { return role == ModeRole::signal ? "signal" : "loss"; }

std::size_t CavityModeSet::signal_count() const {
    return static_cast<std::size_t>(
        std::count_if(modes.begin(), modes.end(), [](const CavityMode& m) { return m.role == ModeRole::signal; }));
}

MomentumGrid::MomentumGrid(double center_rad_m, double spacing_rad_m, int first_offset, std::size_t size)
    : center_(center_rad_m), spacing_(spacing_rad_m), first_offset_(first_offset), size_(size) {
    if (!(spacing_rad_m > 0.0)) throw GridError("grid spacing must be positive");
    if (size < 2) throw GridError("grid needs at least two points");
    if (first_offset > 0 || first_offset + static_cast<int>(size) - 1 < 0) {
        throw GridError("grid must contain its centre");
    }
}

std::optional<std::size_t> MomentumGrid::index_of_offset(int offset) const {
    if (offset < first_offset_ || offset > last_offset()) return std::nullopt;
    return static_cast<std::size_t>(offset - first_offset_);
}

FockSpace::FockSpace(std::size_t mode_count, int cutoff) : mode_count_(mode_count), cutoff_(cutoff), size_(1) {
    if (mode_count < 1) throw GridError("Fock space needs at least one mode");
    if (cutoff < 1) throw GridError("photon cutoff must be at least 1");
    strides_.reserve(mode_count);
    for (std::size_t j = 0; j < mode_count; ++j) {
        strides_.push_back(size_);
        size_ *= static_cast<std::size_t>(cutoff + 1);
    }
}

std::size_t FockSpace::flatten(std::span<const int> occupation) const {
    if (occupation.size() != mode_count_) throw std::out_of_range("occupation tuple has wrong length");
    std::size_t flat = 0;
    for (std::size_t j = 0; j < mode_count_; ++j) {
        if (occupation[j] < 0 || occupation[j] > cutoff_) throw std::out_of_range("occupation above cutoff");
        flat += static_cast<std::size_t>(occupation[j]) * strides_[j];
    }
    return flat;
}

std::vector<int> FockSpace::unflatten(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("Fock index out of range");
    std::vector<int> occ(mode_count_);
    for (std::size_t j = 0; j < mode_count_; ++j) occ[j] = occupation(index, j);
    return occ;
}

JointState::JointState(Basis basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
        throw BasisError("amplitude vector does not match basis dimension");
    }
}

MomentumGrid build_momentum_grid(const PhysicalSetup& setup, const CavityModeSet& modes, int points_per_recoil,
                                 const PhysicalConstants& pc) {
    if (points_per_recoil < 1) throw GridError("points_per_recoil must be at least 1");
    if (modes.modes.empty() || modes.target >= modes.size() || modes.target_mode().role != ModeRole::signal) {
        throw GridError("mode set has no signal target mode");
    }
    const double beta = std::sqrt(2.0 * setup.kinetic_energy_ev / pc.electron_rest_energy_ev);
    const double k0 = pc.electron_mass_kg * beta * pc.light_speed_m_s / pc.hbar_js;
    const double recoil = modes.target_mode().total_recoil_rad_m;
    if (!(recoil > 0.0)) throw GridError("target recoil must be positive");
    const double dk = recoil / points_per_recoil;

    // A hair under half a cell, so exact half-cell offsets are rejected
    // regardless of rounding.
    constexpr double tolerance = 0.5 - 1e-9;
    for (const auto& m : modes.modes) {
        const double cells = m.total_recoil_rad_m / dk;
        if (std::abs(cells - std::round(cells)) >= tolerance) {
            throw GridError("mode recoil incommensurate with grid; increase points_per_recoil");
        }
    }

    const int total_cells = 7 * points_per_recoil;
    const int below = (total_cells + 1) / 2;
    return MomentumGrid(k0, dk, -below, static_cast<std::size_t>(total_cells) + 1);
}

double momentum_width(double energy_uncertainty_ev, double velocity_m_s, const PhysicalConstants& pc) {
    if (!(velocity_m_s > 0.0)) throw PhysicsError("velocity must be positive");
    return energy_uncertainty_ev * pc.electron_charge_c / (pc.hbar_js * velocity_m_s);
}

Eigen::VectorXd gaussian_profile(const MomentumGrid& grid, double sigma_k) {
    Eigen::VectorXd amp = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
    if (sigma_k <= 0.0) {
        amp(static_cast<Eigen::Index>(grid.center_index())) = 1.0;
        return amp;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = (grid.k(i) - grid.center()) / sigma_k;
        const double a = std::exp(-0.25 * x * x);
        // Tails this far down only inflate the reachable subspace.
        amp(static_cast<Eigen::Index>(i)) = a < 1e-16 ? 0.0 : a;
    }
    return amp / amp.norm();
}

JointState initial_state(const MomentumGrid& grid, const FockSpace& fock, double energy_uncertainty_ev,
                         std::span<const int> occupation, const PhysicalConstants& pc) {
    if (energy_uncertainty_ev < 0.0) throw PhysicsError("energy uncertainty must be non-negative");
    const std::size_t photon_index = fock.flatten(occupation);

    const double velocity = pc.hbar_js * grid.center() / pc.electron_mass_kg;
    const double sigma_k = momentum_width(energy_uncertainty_ev, velocity, pc);
    if (sigma_k > 0.0) {
        // |psi(k)|^2 is a normal density with standard deviation sigma_k; the
        // grid ends sit half a cell beyond the outermost points.
        const double lo = (grid.first_offset() - 0.5) * grid.spacing() / sigma_k;
        const double hi = (grid.last_offset() + 0.5) * grid.spacing() / sigma_k;
        const double lost = 0.5 * std::erfc(-lo / std::sqrt(2.0)) + 0.5 * std::erfc(hi / std::sqrt(2.0));
        if (lost > 1e-6) throw GridError("wavepacket truncated by the momentum grid");
    }

    const Eigen::VectorXd profile = gaussian_profile(grid, sigma_k);
    Basis basis{grid, fock};
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        psi(static_cast<Eigen::Index>(basis.index(i, photon_index))) = profile(static_cast<Eigen::Index>(i));
    }
    return JointState(std::move(basis), std::move(psi));
}

} // namespace fejc
