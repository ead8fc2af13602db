#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "fejc/constants.hpp"
#include "fejc/model.hpp"
#include "fejc/phasematch.hpp"

namespace fejc {

/// How p_loss maps to the loss-mode coupling g_loss * T.
enum class LossCalibration {
    amplitude, // g_loss T = sqrt(p_loss)
    arcsin,    // g_loss T = arcsin(sqrt(p_loss)): single-pass loss exactly p_loss
};

[[nodiscard]] std::string to_string(LossCalibration calibration);
[[nodiscard]] LossCalibration parse_loss_calibration(const std::string& text);

struct CouplingOptions {
    int photon_cutoff = 3;
    double sinc_cutoff = 1e-4;
    // Drop a transfer when 2 sqrt(cutoff) |G| / min|detuning| falls below this:
    // its transition amplitude can never exceed that bound.
    double off_resonance_cutoff = 1e-4;
    // Evaluate every detuning as if the electron stayed at k0.
    bool recoil_free = false;
    LossCalibration loss_calibration = LossCalibration::amplitude;
};

/// One momentum transfer q = shift_cells * dk into one mode.
struct Transfer {
    std::size_t mode = 0;
    int shift_cells = 0;
    cplx amplitude_rad_s;
};

class CouplingTable {
public:
    CouplingTable(Basis basis, CavityModeSet modes, std::vector<Transfer> transfers, double hbar_over_mass,
                  bool recoil_free, double transit_time_s);

    [[nodiscard]] const Basis& basis() const { return basis_; }
    [[nodiscard]] const CavityModeSet& modes() const { return modes_; }
    [[nodiscard]] const std::vector<Transfer>& transfers() const { return transfers_; }
    [[nodiscard]] bool recoil_free() const { return recoil_free_; }
    [[nodiscard]] double transit_time_s() const { return transit_time_s_; }

    /// Detuning (E_k - E_{k-q})/hbar - w_j of emission from grid point i.
    [[nodiscard]] double detuning(std::size_t momentum_index, const Transfer& transfer) const;
    /// Same, cached per (transfer, momentum index).
    [[nodiscard]] double cached_detuning(std::size_t transfer, std::size_t momentum_index) const {
        return detunings_[transfer * basis_.grid.size() + momentum_index];
    }

private:
    Basis basis_;
    CavityModeSet modes_;
    std::vector<Transfer> transfers_;
    double hbar_over_mass_;
    bool recoil_free_;
    double transit_time_s_;
    std::vector<double> detunings_;
};

/**
 * Coupling of every mode to every grid transfer surviving the sinc and
 * off-resonance cuts. Signal modes carry g_Q / T times the sinc weight,
 * loss modes the calibrated loss coupling.
 */
[[nodiscard]] CouplingTable build_coupling_table(const PhysicalSetup& setup, const CavityModeSet& modes,
                                                 const MomentumGrid& grid, const CouplingOptions& options = {},
                                                 const PhysicalConstants& pc = kCodata2018);

/// d psi / dt over the full basis, gathered per output amplitude.
[[nodiscard]] Eigen::VectorXcd rhs(double t, const JointState& psi, const CouplingTable& table);
void rhs(double t, const Eigen::VectorXcd& psi, const CouplingTable& table, Eigen::VectorXcd& out);

/// Closure under the couplings of the given full-basis indices, sorted.
[[nodiscard]] std::vector<std::size_t> reachable_subspace(const CouplingTable& table,
                                                          std::span<const std::size_t> seeds);

/// Full-basis indices with a non-zero amplitude.
[[nodiscard]] std::vector<std::size_t> support(const Eigen::VectorXcd& amplitudes);

/**
 * The generator A(t) (psi' = A psi) restricted to an invariant subspace,
 * stored as rows of (column, amplitude, detuning) so that
 * A_rc(t) = amplitude exp(i detuning t).
 */
class SparseGenerator {
public:
    SparseGenerator(const CouplingTable& table, std::vector<std::size_t> states);

    [[nodiscard]] std::size_t dimension() const { return states_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& states() const { return states_; }
    [[nodiscard]] std::size_t nonzeros() const { return columns_.size(); }

    void apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const;
    [[nodiscard]] Eigen::MatrixXcd dense(double t) const;
    [[nodiscard]] Eigen::SparseMatrix<cplx, Eigen::RowMajor> sparse(double t) const;

    /// Full-basis vector -> subspace coordinates; throws if weight lies outside.
    [[nodiscard]] Eigen::VectorXcd restrict(const Eigen::VectorXcd& full) const;
    [[nodiscard]] Eigen::VectorXcd embed(const Eigen::VectorXcd& sub, std::size_t full_dimension) const;

private:
    std::vector<std::size_t> states_;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> columns_;
    std::vector<cplx> amplitudes_;
    std::vector<double> detunings_;
};

inline constexpr std::size_t kDenseDimensionGuard = 4096;

/// H(t)/hbar = i A(t) over the full basis of the table.
[[nodiscard]] Eigen::MatrixXcd build_dense_hamiltonian(double t, const CouplingTable& table,
                                                       std::size_t max_dimension = kDenseDimensionGuard);
/// H(t)/hbar on the generator's subspace.
[[nodiscard]] Eigen::MatrixXcd build_dense_hamiltonian(double t, const SparseGenerator& generator,
                                                       std::size_t max_dimension = kDenseDimensionGuard);

enum class ReducedSystem { two_level, ladder, lambda };

[[nodiscard]] std::string to_string(ReducedSystem system);

/// Few-level rotating-wave model.
struct EffectiveModel {
    ReducedSystem system = ReducedSystem::two_level;
    std::vector<std::string> levels;           // electron levels, highest first
    std::vector<double> level_energies_ev;
    std::vector<std::string> states;           // joint electron-photon states
    std::vector<cplx> couplings_rad_s;         // one per signal mode kept
    double neglected_detuning_rad_s = 0.0;     // smallest detuning among dropped terms
    double criterion_value = 0.0;              // that detuning times T
    bool passes = false;

    /// H/hbar on `states`.
    [[nodiscard]] Eigen::MatrixXcd hamiltonian_over_hbar() const;
};

/**
 * Two-level reduction uses the target mode, ladder and lambda use the first
 * two signal modes. Throws CriterionError when a dropped transition has
 * detuning * T below the threshold, unless `override_criterion` is set.
 */
[[nodiscard]] EffectiveModel rwa_reduce(const PhysicalSetup& setup, const CavityModeSet& modes,
                                        ReducedSystem system, bool override_criterion = false,
                                        double criterion_threshold = kDefaultCriterionThreshold,
                                        const PhysicalConstants& pc = kCodata2018);

/// H/hbar of the n-photon manifold {|E, n-1>, |E - hbar w, n>} of the two-level model.
[[nodiscard]] Eigen::Matrix2cd photon_block_hamiltonian(cplx coupling_rad_s, int photons);

} // namespace fejc
