#include "fejc/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fejc/errors.hpp"

namespace fejc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth- minus fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd& omega) {
    // omega = -i K with K Hermitian.
    const Eigen::MatrixXcd k = cplx(0.0, 1.0) * omega;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (k + k.adjoint()));
    if (eig.info() != Eigen::Success) throw IntegrationError("eigendecomposition failed in oracle");
    Eigen::VectorXcd phases(eig.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i));
    const Eigen::MatrixXcd u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    // One Newton-Schulz step pulls u back onto the unitary group; without it
    // the eigenvector round-off accumulates coherently over thousands of slices.
    const auto n = u.rows();
    return 0.5 * u * (3.0 * Eigen::MatrixXcd::Identity(n, n) - u.adjoint() * u);
}

} // namespace

std::string to_string(OracleScheme scheme) { return scheme == OracleScheme::midpoint ? "midpoint" : "magnus4"; }

Trajectory integrate(const SparseGenerator& generator, const Eigen::VectorXcd& psi0, double t0, double t1,
                     const IntegratorOptions& options) {
    if (!(options.tolerance >= 1e-12 && options.tolerance <= 1e-6)) {
        throw IntegrationError("tolerance must lie in [1e-12, 1e-6]");
    }
    if (options.samples < 200) throw IntegrationError("at least 200 output samples are required");
    if (static_cast<std::size_t>(psi0.size()) != generator.dimension()) {
        throw BasisError("initial state does not match generator");
    }

    Trajectory out;
    out.times_s.reserve(options.samples);
    out.states.reserve(options.samples);
    const double norm0 = psi0.squaredNorm();
    const double span = t1 - t0;
    auto sample_time = [&](std::size_t s) {
        return s + 1 == options.samples ? t1 : t0 + span * static_cast<double>(s) / (options.samples - 1);
    };

    out.times_s.push_back(t0);
    out.states.push_back(psi0);
    if (span == 0.0) {
        for (std::size_t s = 1; s < options.samples; ++s) {
            out.times_s.push_back(t1);
            out.states.push_back(psi0);
        }
        return out;
    }

    const double direction = span > 0.0 ? 1.0 : -1.0;
    const double min_step = 1e-14 * std::abs(span);
    const Eigen::Index n = psi0.size();
    Eigen::VectorXcd y = psi0, y_new(n), tmp(n), err(n);
    std::array<Eigen::VectorXcd, 7> k;
    for (auto& v : k) v.resize(n);

    double t = t0;
    generator.apply(t, y, k[0]);
    double h = direction * std::abs(span) / static_cast<double>(options.samples - 1);
    std::size_t next = 1;
    std::size_t steps = 0;

    while (next < options.samples) {
        if (steps++ > options.max_steps) throw IntegrationError("integration exceeded its step budget");
        const double target = sample_time(next);
        bool lands = false;
        double step = h;
        if (direction * (t + step - target) >= 0.0) {
            step = target - t;
            lands = true;
        }

        tmp = y + step * (a21 * k[0]);
        generator.apply(t + c2 * step, tmp, k[1]);
        tmp = y + step * (a31 * k[0] + a32 * k[1]);
        generator.apply(t + c3 * step, tmp, k[2]);
        tmp = y + step * (a41 * k[0] + a42 * k[1] + a43 * k[2]);
        generator.apply(t + c4 * step, tmp, k[3]);
        tmp = y + step * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]);
        generator.apply(t + c5 * step, tmp, k[4]);
        tmp = y + step * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]);
        generator.apply(t + step, tmp, k[5]);
        y_new = y + step * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
        generator.apply(t + step, y_new, k[6]);
        err = step * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);

        const double error = err.cwiseAbs().maxCoeff();
        const double factor =
            error == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(options.tolerance / error, 0.2), 0.2, 5.0);

        if (error <= options.tolerance) {
            t = lands ? target : t + step;
            y.swap(y_new);
            std::swap(k[0], k[6]);
            ++out.diagnostics.accepted_steps;
            out.diagnostics.max_norm_drift = std::max(out.diagnostics.max_norm_drift, std::abs(y.squaredNorm() - norm0));
            if (lands) {
                out.times_s.push_back(t);
                out.states.push_back(y);
                ++next;
                // A clipped step says nothing about the natural step size.
                if (std::abs(step) < std::abs(h)) continue;
            }
            h = step * factor;
        } else {
            ++out.diagnostics.rejected_steps;
            h = step * factor;
        }
        if (std::abs(h) < min_step) throw IntegrationError("step size underflow");
    }

    if (out.diagnostics.max_norm_drift > options.max_norm_drift) {
        throw IntegrationError("norm drift " + std::to_string(out.diagnostics.max_norm_drift) + " exceeds limit");
    }
    return out;
}

JointTrajectory integrate(const JointState& psi0, const CouplingTable& table, double duration_s,
                          const IntegratorOptions& options) {
    if (!(psi0.basis() == table.basis())) throw BasisError("state and coupling table use different bases");
    if (std::abs(psi0.norm_squared() - 1.0) > 1e-9) throw IntegrationError("initial state is not normalized");
    const auto seeds = support(psi0.amplitudes());
    const SparseGenerator generator(table, reachable_subspace(table, seeds));
    auto traj = integrate(generator, generator.restrict(psi0.amplitudes()), 0.0, duration_s, options);

    JointTrajectory out;
    out.times_s = std::move(traj.times_s);
    out.diagnostics = traj.diagnostics;
    out.states.reserve(traj.states.size());
    for (const auto& sub : traj.states) {
        out.states.emplace_back(psi0.basis(), generator.embed(sub, psi0.basis().dimension()));
    }
    return out;
}

Eigen::VectorXcd propagate_oracle(const SparseGenerator& generator, const Eigen::VectorXcd& psi0, double duration_s,
                                  std::size_t steps, OracleScheme scheme, std::size_t max_dimension) {
    if (steps < 1000) throw IntegrationError("oracle needs at least 1000 steps");
    if (generator.dimension() > max_dimension) throw DimensionError("basis too large for the dense oracle");
    if (static_cast<std::size_t>(psi0.size()) != generator.dimension()) {
        throw BasisError("initial state does not match generator");
    }

    const double h = duration_s / static_cast<double>(steps);
    const double gauss = std::sqrt(3.0) / 6.0;
    Eigen::VectorXcd psi = psi0;
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = h * static_cast<double>(s);
        Eigen::MatrixXcd omega;
        if (scheme == OracleScheme::midpoint) {
            omega = h * generator.dense(t + 0.5 * h);
        } else {
            const Eigen::MatrixXcd a1 = generator.dense(t + (0.5 - gauss) * h);
            const Eigen::MatrixXcd a2 = generator.dense(t + (0.5 + gauss) * h);
            omega = 0.5 * h * (a1 + a2) + (std::sqrt(3.0) / 12.0) * h * h * (a2 * a1 - a1 * a2);
        }
        psi = exp_anti_hermitian(omega) * psi;
    }
    return psi;
}

JointState propagate_oracle(const JointState& psi0, const CouplingTable& table, double duration_s, std::size_t steps,
                            OracleScheme scheme, std::size_t max_dimension) {
    if (!(psi0.basis() == table.basis())) throw BasisError("state and coupling table use different bases");
    const auto seeds = support(psi0.amplitudes());
    const SparseGenerator generator(table, reachable_subspace(table, seeds));
    const auto sub = propagate_oracle(generator, generator.restrict(psi0.amplitudes()), duration_s, steps, scheme,
                                      max_dimension);
    return JointState(psi0.basis(), generator.embed(sub, psi0.basis().dimension()));
}

} // namespace fejc
