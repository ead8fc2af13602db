#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fejc/analytic.hpp"
#include "fejc/model.hpp"

namespace fejc {

/// Named joint state: electron recoiled by a whole number of grid cells from
/// k0 together with a photon occupation tuple.
struct StateLabel {
    std::string name;
    int momentum_offset_cells = 0;
    std::vector<int> occupation;
};

/// |<psi|phi>|^2; throws BasisError for different bases.
[[nodiscard]] double fidelity(const JointState& psi, const JointState& phi);

/**
 * Overlap with a few-level state embedded in the joint basis: each label
 * becomes `momentum_profile` shifted by its offset, times its Fock state.
 * Throws BasisError when a few-level label has no StateLabel.
 */
[[nodiscard]] double fidelity(const JointState& psi, const FewLevelState& phi, std::span<const StateLabel> labels,
                              const Eigen::VectorXd& momentum_profile);

/**
 * Probability inside each label's momentum window (centre offset, full width
 * `window_width_rad_m`) at its exact occupation, then "other" for the rest.
 * Throws BasisError when windows with equal occupation overlap.
 */
[[nodiscard]] std::vector<LabeledStateProbability> labeled_probabilities(const JointState& psi,
                                                                         std::span<const StateLabel> labels,
                                                                         double window_width_rad_m);

/// Marginal photon-number distribution of one mode, n = 0..cutoff, normalized.
[[nodiscard]] Eigen::VectorXd photon_number_distribution(const JointState& psi, std::size_t mode);

/// Poisson(mean) on 0..cutoff, renormalized after truncation.
[[nodiscard]] Eigen::VectorXd poissonian_reference(double mean, int cutoff);

/// Half the L1 distance between two distributions of equal length.
[[nodiscard]] double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

} // namespace fejc
