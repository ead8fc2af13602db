#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "fejc/errors.hpp"
#include "fejc/model.hpp"
#include "fejc/phasematch.hpp"

#include "fixtures.hpp"

using namespace fejc;

namespace {

CavityModeSet single_mode(double recoil) {
    CavityModeSet set;
    set.modes.push_back({0, 1e15, 0.0, recoil, ModeRole::signal});
    return set;
}

} // namespace

TEST_CASE("constants are self-consistent") {
    CHECK_NOTHROW(kCodata2018.validate());
    PhysicalConstants broken = kCodata2018;
    broken.electron_rest_energy_ev *= 1.01;
    CHECK_THROWS_AS(broken.validate(), PhysicsError);
}

TEST_CASE("setup validation rejects unphysical values") {
    auto s = fixtures::paper_setup();
    CHECK_NOTHROW(s.validate());

    auto fast = s;
    fast.kinetic_energy_ev = 5e3; // beta ~ 0.14
    CHECK_THROWS_AS(fast.validate(), PhysicsError);

    auto lossy = s;
    lossy.loss_probability = 1.5;
    CHECK_THROWS_AS(lossy.validate(), PhysicsError);

    auto no_period = s;
    no_period.grating_period_m = 0.0;
    CHECK_THROWS_AS(no_period.validate(), PhysicsError);
}

TEST_CASE("grid layout follows the recoil") {
    const auto setup = fixtures::paper_setup();
    const double recoil = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m,
                                               setup.refractive_index)
                              .recoil_rad_m;

    SUBCASE("one point per recoil") {
        const auto grid = build_momentum_grid(setup, single_mode(recoil), 1);
        CHECK(grid.size() == 8);
        CHECK(grid.first_offset() == -4);
        CHECK(grid.last_offset() == 3);
        CHECK(grid.spacing() == doctest::Approx(recoil).epsilon(1e-15));
    }
    SUBCASE("eight points per recoil") {
        const auto grid = build_momentum_grid(setup, single_mode(recoil), 8);
        CHECK(grid.size() == 57);
        CHECK(grid.offset(grid.center_index()) == 0);
        CHECK(grid.k(grid.center_index()) == grid.center());
        CHECK(grid.span() == doctest::Approx(7.0 * recoil).epsilon(1e-12));
        CHECK(grid.index_of_offset(-8) == grid.center_index() - 8);
        CHECK_FALSE(grid.index_of_offset(40).has_value());
    }
    SUBCASE("electron wavenumber matches de Broglie") {
        const auto grid = build_momentum_grid(setup, single_mode(recoil), 4);
        // lambda[angstrom] = 12.264 / sqrt(E[eV]) in the non-relativistic limit
        const double lambda = 12.264e-10 / std::sqrt(setup.kinetic_energy_ev);
        CHECK(kTwoPi / grid.center() == doctest::Approx(lambda).epsilon(1e-3));
    }
    SUBCASE("recoils off the lattice are refused") {
        auto modes = single_mode(recoil);
        modes.modes.push_back({1, 1e15, 0.0, 1.5 * recoil, ModeRole::signal});
        CHECK_THROWS_AS((void)build_momentum_grid(setup, modes, 1), GridError);
        CHECK_NOTHROW((void)build_momentum_grid(setup, modes, 2));
    }
    SUBCASE("bad resolution") {
        CHECK_THROWS_AS((void)build_momentum_grid(setup, single_mode(recoil), 0), GridError);
    }
}

TEST_CASE("Fock index is a bijection") {
    const FockSpace fock(3, 3);
    CHECK(fock.size() == 64);
    std::set<std::size_t> seen;
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            for (int c = 0; c <= 3; ++c) {
                const std::vector<int> occ{a, b, c};
                const auto flat = fock.flatten(occ);
                CHECK(flat == static_cast<std::size_t>(a + 4 * b + 16 * c));
                CHECK(fock.unflatten(flat) == occ);
                seen.insert(flat);
            }
        }
    }
    CHECK(seen.size() == fock.size());
    const std::vector<int> too_many{4, 0, 0};
    CHECK_THROWS_AS((void)fock.flatten(too_many), std::out_of_range);
    CHECK_THROWS_AS((void)fock.unflatten(64), std::out_of_range);
    CHECK_THROWS_AS(FockSpace(0, 3), GridError);
}

TEST_CASE("momentum width from the energy spread") {
    const auto kin = electron_kinematics(100.0);
    const double sigma_k = momentum_width(0.010, kin.velocity_m_s);
    CHECK(sigma_k == doctest::Approx(2.56e6).epsilon(2e-3));

    // Finite difference of k(E) = sqrt(2 m E) / hbar.
    const auto& pc = kCodata2018;
    auto k_of = [&](double e_ev) { return std::sqrt(2.0 * pc.electron_mass_kg * e_ev * pc.electron_charge_c) / pc.hbar_js; };
    CHECK(sigma_k == doctest::Approx(k_of(100.005) - k_of(99.995)).epsilon(1e-6));
}

TEST_CASE("initial wavepacket") {
    const auto ex = fixtures::small_experiment();
    const auto setup = fixtures::paper_setup();
    const auto& grid = ex.table.basis().grid;
    const FockSpace fock(2, 3);
    const std::vector<int> vacuum{0, 0};

    const auto psi = initial_state(grid, fock, setup.energy_uncertainty_ev, vacuum);
    CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    // Mean momentum sits on the centre by symmetry.
    double mean = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        mean += std::norm(psi.amplitudes()(static_cast<Eigen::Index>(psi.basis().index(i, 0)))) * grid.offset(i);
    }
    CHECK(std::abs(mean) < 1e-12);

    const auto sharp = initial_state(grid, fock, 0.0, vacuum);
    CHECK(std::norm(sharp.amplitudes()(static_cast<Eigen::Index>(sharp.basis().index(grid.center_index(), 0)))) ==
          doctest::Approx(1.0));

    CHECK_THROWS_AS((void)initial_state(grid, fock, 10.0, vacuum), GridError);
    const std::vector<int> overfull{4, 0};
    CHECK_THROWS_AS((void)initial_state(grid, fock, 0.0, overfull), std::out_of_range);
}
