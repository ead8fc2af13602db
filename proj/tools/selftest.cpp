#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fejc/analytic.hpp"
#include "fejc/dynamics.hpp"
#include "fejc/hamiltonian.hpp"
#include "fejc/phasematch.hpp"
#include "fejc/scenarios.hpp"

namespace fejc_tools {

namespace {

struct Check {
    std::string name;
    double value;
    double limit;
};

Eigen::VectorXcd random_state(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = {normal(rng), normal(rng)};
    return v / v.norm();
}

} // namespace

bool run_selftest(std::ostream& out) {
    using namespace fejc;
    std::vector<Check> checks;

    const auto setup = with_phase_matched_grating(PhysicalSetup{});
    const ModelOptions options;
    const auto ex = two_level_experiment(setup, options);
    const SparseGenerator gen(ex.table, reachable_subspace(ex.table, support(ex.initial.amplitudes())));
    const auto psi0 = gen.restrict(ex.initial.amplitudes());

    const auto traj = integrate(gen, psi0, 0.0, ex.transit_time_s, options.integrator);
    const auto oracle = propagate_oracle(gen, psi0, ex.transit_time_s, 4096, OracleScheme::magnus4);
    checks.push_back({"integrator matches unitary oracle", (traj.final_state() - oracle).norm(), 1e-6});
    checks.push_back({"integrator norm drift", traj.diagnostics.max_norm_drift, 1e-9});
    checks.push_back({"oracle norm", std::abs(oracle.norm() - 1.0), 1e-12});

    double herm = 0.0;
    for (double f : {0.0, 0.31, 0.77, 1.0}) {
        const auto h = build_dense_hamiltonian(f * ex.transit_time_s, gen);
        herm = std::max(herm, (h - h.adjoint()).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
    }
    checks.push_back({"dense Hamiltonian hermiticity", herm, 1e-12});

    std::mt19937_64 rng(20240601);
    double leak = 0.0;
    double mismatch = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = random_state(rng, static_cast<Eigen::Index>(gen.dimension()));
        const double t = ex.transit_time_s * trial / 19.0;
        Eigen::VectorXcd d;
        gen.apply(t, psi, d);
        leak = std::max(leak, std::abs(psi.dot(d).real()) / d.norm());
        const Eigen::VectorXcd via_dense = cplx(0.0, -1.0) * (build_dense_hamiltonian(t, gen) * psi);
        mismatch = std::max(mismatch, (via_dense - d).norm() / d.norm());
    }
    checks.push_back({"generator preserves norm", leak, 1e-12});
    checks.push_back({"dense and sparse actions agree", mismatch, 1e-12});

    const Qubit el0{0.6, cplx(0.0, 0.8)};
    const Qubit ph0{cplx(0.28, 0.96), 0.0};
    const auto [el1, ph1] = swap_gate(el0, ph0);
    const auto [el2, ph2] = swap_gate(el1, ph1);
    auto product = [](const Qubit& e, const Qubit& p) {
        Eigen::Vector4cd v;
        v << e.alpha * p.alpha, e.alpha * p.beta, e.beta * p.alpha, e.beta * p.beta;
        return v;
    };
    const double overlap = std::abs(product(el0, ph0).dot(product(el2, ph2)));
    checks.push_back({"swap gate applied twice is the identity up to phase", std::abs(1.0 - overlap), 1e-12});

    bool ok = true;
    for (const auto& c : checks) {
        const bool pass = c.value <= c.limit;
        ok = ok && pass;
        out << (pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << " (limit " << c.limit << ")\n";
    }
    return ok;
}

} // namespace fejc_tools
