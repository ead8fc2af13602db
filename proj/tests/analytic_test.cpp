#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include "fejc/analytic.hpp"
#include "fejc/errors.hpp"
#include "fejc/hamiltonian.hpp"

using namespace fejc;

namespace {

// psi' = A psi, so psi(t) = exp(A t) psi(0).
Eigen::VectorXcd evolve(const Eigen::MatrixXcd& a, double t, Eigen::Index start) {
    return (a * t).exp().col(start);
}

Qubit random_qubit(std::mt19937& rng) {
    std::normal_distribution<double> d;
    cplx a(d(rng), d(rng)), b(d(rng), d(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

Eigen::Vector4cd product(const Qubit& electron, const Qubit& photon) {
    // (E0,|0,1>), (E0,|1,0>), (E2,|0,1>), (E2,|1,0>)
    return {electron.alpha * photon.alpha, electron.alpha * photon.beta, electron.beta * photon.alpha,
            electron.beta * photon.beta};
}

double phase_free_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    const cplx o = b.dot(a);
    return (a - std::polar(1.0, -std::arg(o)) * b).norm();
}

} // namespace

TEST_CASE("two-level closed form against the matrix exponential") {
    for (double phase : {0.0, 0.8, -2.1}) {
        const cplx g = std::polar(3e11, phase);
        Eigen::Matrix2cd a;
        a << 0.0, g, -std::conj(g), 0.0;
        for (double t : {0.0, 1e-12, 4.7e-12, 1.3e-11}) {
            const auto s = jc_two_level(g, t);
            CHECK((s.amplitudes - evolve(a, t, 0)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    const auto s = jc_two_level(1.0, kPi / 2.0);
    CHECK(std::norm(s.amplitude("E0,1")) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)s.amplitude("E2,0"), BasisError);
}

TEST_CASE("ladder closed form against the matrix exponential") {
    const double g = 2.2e11;
    Eigen::Matrix3cd a;
    a << 0.0, g, 0.0, -g, 0.0, g, 0.0, -g, 0.0;
    for (double t : {0.0, 2e-12, 7e-12, 1.9e-11}) {
        const auto s = ladder_three_level(g, t);
        CHECK((s.amplitudes - evolve(a, t, 0)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(s.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    // Complete pair emission at g t = pi / sqrt(2).
    CHECK(std::norm(ladder_three_level(1.0, kPi / std::sqrt(2.0)).amplitude("E0,1,1")) == doctest::Approx(1.0));
}

TEST_CASE("lambda closed form against the matrix exponential") {
    const double g = 1.7e11;
    // Order E0,0,1 / E1,0,0 / E2,1,0: the middle level feeds both outer ones.
    Eigen::Matrix3cd a;
    a << 0.0, -g, 0.0, g, 0.0, g, 0.0, -g, 0.0;
    for (double t : {0.0, 3e-12, 1.1e-11}) {
        const auto from_low = lambda_three_level(g, t, LambdaStart::E0_0_1);
        const Eigen::Vector3cd num = evolve(a, t, 0);
        CHECK(std::abs(from_low.amplitude("E0,0,1") - num(0)) < 1e-12);
        CHECK(std::abs(from_low.amplitude("E1,0,0") - num(1)) < 1e-12);
        CHECK(std::abs(from_low.amplitude("E2,1,0") - num(2)) < 1e-12);

        const auto from_high = lambda_three_level(g, t, LambdaStart::E2_1_0);
        const Eigen::Vector3cd num2 = evolve(a, t, 2);
        CHECK(std::abs(from_high.amplitude("E0,0,1") - num2(0)) < 1e-12);
        CHECK(std::abs(from_high.amplitude("E2,1,0") - num2(2)) < 1e-12);
    }
    const auto done = lambda_three_level(1.0, kPi / std::sqrt(2.0), LambdaStart::E0_0_1);
    CHECK(done.amplitude("E2,1,0").real() == doctest::Approx(-1.0));
}

TEST_CASE("swap gate") {
    std::mt19937 rng(7);

    // Half a lambda cycle on the four product basis states: the two
    // resonant ones trade places with a sign, the other two are spectators.
    Eigen::Matrix4cd cycle = Eigen::Matrix4cd::Zero();
    {
        Eigen::Matrix3cd a;
        a << 0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0;
        const Eigen::Matrix3cd u = (a * (kPi / std::sqrt(2.0))).exp();
        cycle(3, 0) = u(2, 0);
        cycle(0, 0) = u(0, 0);
        cycle(0, 3) = u(0, 2);
        cycle(3, 3) = u(2, 2);
        cycle(1, 1) = 1.0;
        cycle(2, 2) = 1.0;
    }

    for (int trial = 0; trial < 20; ++trial) {
        const Qubit e = random_qubit(rng), p = random_qubit(rng);
        const auto [e1, p1] = swap_gate(e, p);
        CHECK((product(e1, p1) - cycle * product(e, p)).norm() < 1e-12);

        const auto [e2, p2] = swap_gate(e1, p1);
        CHECK(phase_free_distance(product(e2, p2), product(e, p)) < 1e-12);
    }
    CHECK_THROWS_AS((void)swap_gate(Qubit{1.0, 1.0}, Qubit{1.0, 0.0}), PhysicsError);
}

TEST_CASE("collective ladder coefficients against explicit spins") {
    for (int n_el = 1; n_el <= 6; ++n_el) {
        const std::size_t dim = std::size_t{1} << n_el;
        Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t s = 0; s < dim; ++s) {
            for (int k = 0; k < n_el; ++k) {
                if (!(s >> k & 1U)) raise(static_cast<Eigen::Index>(s | (std::size_t{1} << k)), static_cast<Eigen::Index>(s)) = 1.0;
            }
        }
        std::vector<Eigen::VectorXd> symmetric;
        for (int n = 0; n <= n_el; ++n) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
            for (std::size_t s = 0; s < dim; ++s) {
                if (std::popcount(s) == n) v(static_cast<Eigen::Index>(s)) = 1.0;
            }
            symmetric.push_back(v.normalized());
        }
        for (int n = 0; n <= n_el; ++n) {
            if (n < n_el) {
                const double brute = symmetric[n + 1].dot(raise * symmetric[n]);
                CHECK(symmetric_ladder_coefficient(n_el, n, LadderDirection::raise) == doctest::Approx(brute).epsilon(1e-13));
                const double raise_lower = symmetric_ladder_coefficient(n_el, n, LadderDirection::raise) *
                                           symmetric_ladder_coefficient(n_el, n + 1, LadderDirection::lower);
                CHECK(raise_lower == doctest::Approx(double(n_el - n) * (n + 1)));
            }
            if (n > 0) {
                const double brute = symmetric[n - 1].dot(raise.transpose() * symmetric[n]);
                CHECK(symmetric_ladder_coefficient(n_el, n, LadderDirection::lower) == doctest::Approx(brute).epsilon(1e-13));
                const double lower_raise = symmetric_ladder_coefficient(n_el, n, LadderDirection::lower) *
                                           symmetric_ladder_coefficient(n_el, n - 1, LadderDirection::raise);
                CHECK(lower_raise == doctest::Approx(double(n_el - n + 1) * n));
            }
        }
    }
    CHECK_THROWS_AS((void)symmetric_ladder_coefficient(3, 3, LadderDirection::raise), PhysicsError);
    CHECK_THROWS_AS((void)symmetric_ladder_coefficient(3, 0, LadderDirection::lower), PhysicsError);
    CHECK_THROWS_AS((void)symmetric_ladder_coefficient(0, 0, LadderDirection::raise), PhysicsError);
}

TEST_CASE("collective single-excitation dynamics") {
    const cplx g = std::polar(1.5e11, 0.3);
    for (int n : {1, 2, 4, 9}) {
        const cplx gn = std::sqrt(double(n)) * g;
        Eigen::Matrix2cd a;
        a << 0.0, gn, -std::conj(gn), 0.0;
        for (double t : {0.0, 2e-12, 9e-12}) {
            const auto s = tavis_cummings_single_excitation(n, g, t);
            CHECK((s.amplitudes - evolve(a, t, 0)).cwiseAbs().maxCoeff() < 1e-10);
        }
        const double t_emit = collective_emission_time(n, g);
        CHECK(t_emit == doctest::Approx(kPi / (2.0 * std::sqrt(double(n)) * std::abs(g))).epsilon(1e-15));
        CHECK(std::norm(tavis_cummings_single_excitation(n, g, t_emit).amplitude("1_S,0")) < 1e-24);
        // Earlier times have not emitted completely.
        CHECK(std::norm(tavis_cummings_single_excitation(n, g, 0.99 * t_emit).amplitude("1_S,0")) > 0.0);
    }
    CHECK_THROWS_AS((void)collective_emission_time(2, 0.0), PhysicsError);
}

TEST_CASE("polaritons diagonalize each photon-number block") {
    const cplx g = std::polar(4e11, -1.2);
    for (int n = 1; n <= 3; ++n) {
        const auto pol = jc_eigensystem(n, g);
        REQUIRE(pol.size() == 2);
        const Eigen::Matrix2cd h = photon_block_hamiltonian(g, n);
        for (const auto& p : pol) {
            CHECK(std::abs(std::abs(p.energy_over_hbar_rad_s) - std::abs(g) * std::sqrt(double(n))) <=
                  1e-12 * std::abs(g));
            CHECK(p.vector.norm() == doctest::Approx(1.0));
            CHECK((h * p.vector - p.energy_over_hbar_rad_s * p.vector).norm() <= 1e-12 * std::abs(g));
            // Equal weight on both bare states.
            CHECK(std::norm(p.vector(0)) == doctest::Approx(0.5));
        }
        CHECK(pol[0].energy_over_hbar_rad_s == doctest::Approx(-pol[1].energy_over_hbar_rad_s));
    }
    const auto ground = jc_eigensystem(0, g);
    REQUIRE(ground.size() == 1);
    CHECK(ground[0].energy_over_hbar_rad_s == 0.0);
}
