#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fejc/model.hpp"

namespace fejc {

/// Amplitudes over a handful of labelled joint states.
struct FewLevelState {
    std::vector<std::string> labels;
    Eigen::VectorXcd amplitudes;

    [[nodiscard]] cplx amplitude(const std::string& label) const;
};

/// cos|g|t |E1,0> - e^{-i arg g} sin|g|t |E0,1>.
[[nodiscard]] FewLevelState jc_two_level(cplx coupling_rad_s, double t_s);

/// Ladder cascade from |E2,0,0> with equal real couplings; labels E2,0,0 / E1,1,0 / E0,1,1.
[[nodiscard]] FewLevelState ladder_three_level(double coupling_rad_s, double t_s);

enum class LambdaStart { E0_0_1, E2_1_0 };

/**
 * Lambda system with equal real couplings started in one ground state.
 * Labels are ordered (initial, E1,0,0, other ground state).
 */
[[nodiscard]] FewLevelState lambda_three_level(double coupling_rad_s, double t_s, LambdaStart initial);

struct Qubit {
    cplx alpha; // electron: E0, photon: |0,1>
    cplx beta;  // electron: E2, photon: |1,0>
};

/// Product-state action of sigma_Y(el) sigma_Y(ph) SWAP; returns (electron, photon).
/// Throws PhysicsError unless both inputs are normalized to 1e-12.
[[nodiscard]] std::pair<Qubit, Qubit> swap_gate(const Qubit& electron, const Qubit& photon);

enum class LadderDirection { raise, lower };

/// Matrix element of the collective raising or lowering operator on |n>_S of N electrons.
[[nodiscard]] double symmetric_ladder_coefficient(int electrons, int excitations, LadderDirection direction);

/// Single-excitation Tavis-Cummings evolution; labels 1_S,0 / 0_S,1.
[[nodiscard]] FewLevelState tavis_cummings_single_excitation(int electrons, cplx coupling_rad_s, double t_s);

/// Time of the first complete emission, pi / (2 sqrt(N) |g|).
[[nodiscard]] double collective_emission_time(int electrons, cplx coupling_rad_s);

struct Polariton {
    double energy_over_hbar_rad_s = 0.0;
    Eigen::Vector2cd vector;  // on (|E, n-1>, |E - hbar w, n>)
};

/**
 * Dressed states of the n-photon manifold, lower energy first, with energies
 * in the convention of photon_block_hamiltonian. For n = 0 the single ground
 * state |E - hbar w, 0> is returned with vector (0, 1).
 */
[[nodiscard]] std::vector<Polariton> jc_eigensystem(int photons, cplx coupling_rad_s);

} // namespace fejc
