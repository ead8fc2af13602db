#include <cmath>

#include "doctest.h"

#include "fejc/dynamics.hpp"
#include "fejc/errors.hpp"

#include "fixtures.hpp"

using namespace fejc;

namespace {

struct SmallRun {
    Experiment ex;
    SparseGenerator gen;
    Eigen::VectorXcd psi0;
};

SmallRun small_run(double coupling_gq = kPi / 2.0) {
    auto ex = fixtures::small_experiment(coupling_gq);
    SparseGenerator gen(ex.table, reachable_subspace(ex.table, support(ex.initial.amplitudes())));
    Eigen::VectorXcd psi0 = gen.restrict(ex.initial.amplitudes());
    return {std::move(ex), std::move(gen), std::move(psi0)};
}

double overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return std::norm(a.dot(b)); }

} // namespace

TEST_CASE("option validation") {
    const auto run = small_run();
    const double T = run.ex.transit_time_s;
    IntegratorOptions loose;
    loose.tolerance = 1e-4;
    CHECK_THROWS_AS((void)integrate(run.gen, run.psi0, 0.0, T, loose), IntegrationError);
    IntegratorOptions sparse;
    sparse.samples = 20;
    CHECK_THROWS_AS((void)integrate(run.gen, run.psi0, 0.0, T, sparse), IntegrationError);
    CHECK_THROWS_AS((void)propagate_oracle(run.gen, run.psi0, T, 999), IntegrationError);
    CHECK_THROWS_AS((void)propagate_oracle(run.gen, run.psi0, T, 1000, OracleScheme::midpoint, 1), DimensionError);
    const Eigen::VectorXcd wrong = Eigen::VectorXcd::Ones(run.psi0.size() + 1);
    CHECK_THROWS_AS((void)integrate(run.gen, wrong, 0.0, T), BasisError);
}

TEST_CASE("sampling grid and diagnostics") {
    const auto run = small_run();
    const double T = run.ex.transit_time_s;
    IntegratorOptions opts;
    opts.samples = 257;
    const auto traj = integrate(run.gen, run.psi0, 0.0, T, opts);
    REQUIRE(traj.times_s.size() == 257);
    CHECK(traj.times_s.front() == 0.0);
    CHECK(traj.times_s.back() == T);
    CHECK(traj.times_s[128] == doctest::Approx(0.5 * T).epsilon(1e-14));
    CHECK(traj.diagnostics.accepted_steps >= 256);
    CHECK(traj.diagnostics.max_norm_drift <= 1e-9);
    for (const auto& s : traj.states) CHECK(s.squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("integrator agrees with the fourth-order oracle") {
    const auto run = small_run();
    const double T = run.ex.transit_time_s;
    const auto oracle = propagate_oracle(run.gen, run.psi0, T, 4096, OracleScheme::magnus4);
    CHECK(std::abs(oracle.squaredNorm() - 1.0) < 1e-12);

    double previous = -1.0;
    for (double tol : {1e-8, 5e-9, 2.5e-9}) {
        IntegratorOptions opts;
        opts.tolerance = tol;
        const auto traj = integrate(run.gen, run.psi0, 0.0, T, opts);
        CHECK((traj.final_state() - oracle).norm() <= 1e-6);
        const double f = overlap(traj.final_state(), oracle);
        if (previous >= 0.0) CHECK(std::abs(f - previous) <= tol);
        previous = f;
    }
}

TEST_CASE("midpoint oracle converges at second order") {
    const auto run = small_run();
    const double T = run.ex.transit_time_s;
    const auto coarse = propagate_oracle(run.gen, run.psi0, T, 1000);
    const auto mid = propagate_oracle(run.gen, run.psi0, T, 2000);
    const auto fine = propagate_oracle(run.gen, run.psi0, T, 4000);
    const double ratio = (coarse - mid).norm() / (mid - fine).norm();
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));

    const auto magnus = propagate_oracle(run.gen, run.psi0, T, 4000, OracleScheme::magnus4);
    CHECK((magnus - fine).norm() < (magnus - coarse).norm());
}

TEST_CASE("backward integration retraces the forward run") {
    const auto run = small_run(1.1);
    const double T = run.ex.transit_time_s;
    IntegratorOptions opts;
    opts.tolerance = 1e-11;
    const auto forward = integrate(run.gen, run.psi0, 0.0, T, opts);
    const auto back = integrate(run.gen, forward.final_state(), T, 0.0, opts);
    CHECK(back.times_s.back() == 0.0);
    CHECK(1.0 - overlap(back.final_state(), run.psi0) <= 1e-6);
    CHECK((back.final_state() - run.psi0).norm() <= 1e-7);
}

TEST_CASE("zero-length interval returns the input") {
    const auto run = small_run();
    const auto traj = integrate(run.gen, run.psi0, 0.0, 0.0);
    CHECK(traj.states.size() == 200);
    CHECK(traj.final_state() == run.psi0);
    CHECK(traj.diagnostics.accepted_steps == 0);
}

TEST_CASE("joint-state entry points") {
    const auto ex = fixtures::small_experiment();
    const auto traj = integrate(ex.initial, ex.table, ex.transit_time_s);
    CHECK(traj.states.size() == 200);
    CHECK(traj.states.back().basis() == ex.initial.basis());
    const auto oracle = propagate_oracle(ex.initial, ex.table, ex.transit_time_s, 4096, OracleScheme::magnus4);
    CHECK((traj.states.back().amplitudes() - oracle.amplitudes()).norm() <= 1e-6);

    const Eigen::VectorXcd doubled = 2.0 * ex.initial.amplitudes();
    CHECK_THROWS_AS((void)integrate(JointState(ex.initial.basis(), doubled), ex.table, ex.transit_time_s),
                    IntegrationError);
}
