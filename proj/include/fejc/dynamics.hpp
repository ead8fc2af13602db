#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fejc/hamiltonian.hpp"
#include "fejc/model.hpp"

namespace fejc {

struct IntegratorOptions {
    double tolerance = 1e-10;       // max-norm local error per step
    std::size_t samples = 200;      // uniformly spaced outputs, endpoints included
    double max_norm_drift = 1e-6;   // larger drift rejects the run
    std::size_t max_steps = 5'000'000;
};

struct IntegrationDiagnostics {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_norm_drift = 0.0;
};

/// Sampled amplitudes in the coordinates of the state that was integrated.
struct Trajectory {
    std::vector<double> times_s;
    std::vector<Eigen::VectorXcd> states;
    IntegrationDiagnostics diagnostics;

    [[nodiscard]] const Eigen::VectorXcd& final_state() const { return states.back(); }
};

/**
 * Dormand-Prince 5(4) from t0 to t1 (t1 < t0 integrates backwards). Steps are
 * clipped to land on every sample time. Throws IntegrationError on step-size
 * underflow, step budget exhaustion or norm drift above the limit.
 */
[[nodiscard]] Trajectory integrate(const SparseGenerator& generator, const Eigen::VectorXcd& psi0, double t0,
                                   double t1, const IntegratorOptions& options = {});

struct JointTrajectory {
    std::vector<double> times_s;
    std::vector<JointState> states;
    IntegrationDiagnostics diagnostics;
};

/// Integrates over [0, T] on the subspace reachable from the support of psi0.
[[nodiscard]] JointTrajectory integrate(const JointState& psi0, const CouplingTable& table, double duration_s,
                                        const IntegratorOptions& options = {});

enum class OracleScheme {
    midpoint, // exp(-i H(t_mid) dt) per slice, second order
    magnus4,  // two-point Gauss fourth-order Magnus
};

[[nodiscard]] std::string to_string(OracleScheme scheme);

/// Time-ordered product of exact slice exponentials over [0, T]; needs steps >= 1000.
[[nodiscard]] Eigen::VectorXcd propagate_oracle(const SparseGenerator& generator, const Eigen::VectorXcd& psi0,
                                                double duration_s, std::size_t steps,
                                                OracleScheme scheme = OracleScheme::midpoint,
                                                std::size_t max_dimension = kDenseDimensionGuard);

[[nodiscard]] JointState propagate_oracle(const JointState& psi0, const CouplingTable& table, double duration_s,
                                          std::size_t steps, OracleScheme scheme = OracleScheme::midpoint,
                                          std::size_t max_dimension = kDenseDimensionGuard);

} // namespace fejc
