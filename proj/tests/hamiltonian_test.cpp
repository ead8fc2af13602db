#include <cmath>
#include <random>

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "fejc/errors.hpp"
#include "fejc/hamiltonian.hpp"
#include "fejc/phasematch.hpp"

#include "fixtures.hpp"

using namespace fejc;

namespace {

Eigen::VectorXcd random_state(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> d;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(d(rng), d(rng));
    return v / v.norm();
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("loss calibration names round-trip") {
    for (auto c : {LossCalibration::amplitude, LossCalibration::arcsin}) CHECK(parse_loss_calibration(to_string(c)) == c);
    CHECK_THROWS_AS((void)parse_loss_calibration("sqrt"), ConfigError);
}

TEST_CASE("coupling table for the default cavity") {
    const auto setup = fixtures::paper_setup();
    const auto modes = fabry_perot_modes(setup, 3, 1);
    const auto grid = build_momentum_grid(setup, modes, 8);
    const auto table = build_coupling_table(setup, modes, grid);
    const double transit = electron_kinematics(setup.kinetic_energy_ev).transit_time(setup.cavity_length_m);

    bool target_found = false;
    for (std::size_t t = 0; t < table.transfers().size(); ++t) {
        const auto& tr = table.transfers()[t];
        const auto& mode = modes.modes[tr.mode];
        CHECK(tr.shift_cells != 0);
        if (tr.mode == modes.target && tr.shift_cells == 8) {
            target_found = true;
            CHECK(tr.amplitude_rad_s.real() ==
                  doctest::Approx(setup.coupling_gq / transit * coupling_kernel(8 * grid.spacing(), mode,
                                                                                setup.cavity_length_m)));
            // The design transition is phase matched at k0.
            CHECK(std::abs(table.cached_detuning(t, grid.center_index()) * transit) < 1e-6);
        }
        if (mode.role == ModeRole::loss) {
            CHECK(std::abs(tr.amplitude_rad_s) * transit == doctest::Approx(std::sqrt(setup.loss_probability)));
        }
    }
    CHECK(target_found);

    CouplingOptions arcsin;
    arcsin.loss_calibration = LossCalibration::arcsin;
    const auto t2 = build_coupling_table(setup, modes, grid, arcsin);
    for (const auto& tr : t2.transfers()) {
        if (modes.modes[tr.mode].role == ModeRole::loss) {
            CHECK(std::abs(tr.amplitude_rad_s) * transit == doctest::Approx(std::asin(0.1)));
        }
    }
}

TEST_CASE("detuning follows free-electron kinematics") {
    const auto setup = fixtures::paper_setup();
    const auto modes = fabry_perot_modes(setup, 3, 0);
    const auto grid = build_momentum_grid(setup, modes, 8);
    const auto table = build_coupling_table(setup, modes, grid);
    const double hm = kCodata2018.hbar_over_mass();
    for (std::size_t t = 0; t < table.transfers().size(); ++t) {
        const auto& tr = table.transfers()[t];
        const double q = tr.shift_cells * grid.spacing();
        for (std::size_t i : {std::size_t{0}, grid.center_index(), grid.size() - 1}) {
            const double k = grid.k(i);
            const double expected = hm * (k * q - 0.5 * q * q) - modes.modes[tr.mode].frequency_rad_s;
            CHECK(table.cached_detuning(t, i) == doctest::Approx(expected).scale(1e13).epsilon(1e-10));
        }
    }

    CouplingOptions flat;
    flat.recoil_free = true;
    const auto free_table = build_coupling_table(setup, modes, grid, flat);
    for (std::size_t t = 0; t < free_table.transfers().size(); ++t) {
        CHECK(free_table.cached_detuning(t, 0) == free_table.cached_detuning(t, grid.size() - 1));
    }
}

TEST_CASE("generator action against hand-built matrix elements") {
    const auto ex = fixtures::small_experiment(0.7);
    const auto& table = ex.table;
    const auto& basis = table.basis();
    const auto& grid = basis.grid;
    const double t = 0.37 * table.transit_time_s();

    // Single occupied state at k0 in vacuum; the only nonzero derivative
    // components sit one emission below it.
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    const std::size_t start = basis.index(grid.center_index(), 0);
    psi(static_cast<Eigen::Index>(start)) = 1.0;
    Eigen::VectorXcd out;
    rhs(t, psi, table, out);

    Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(out.size());
    const double hm = kCodata2018.hbar_over_mass();
    for (const auto& tr : table.transfers()) {
        const double q = tr.shift_cells * grid.spacing();
        const double det = hm * (grid.center() - 0.5 * q) * q - table.modes().modes[tr.mode].frequency_rad_s;
        const auto lower = grid.index_of_offset(-tr.shift_cells);
        if (!lower) continue;
        const std::size_t row = basis.index(*lower, basis.fock.stride(tr.mode));
        expected(static_cast<Eigen::Index>(row)) -= std::conj(tr.amplitude_rad_s) * std::polar(1.0, -det * t);
    }
    CHECK((out - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("dense, sparse and gathered actions agree") {
    const auto setup = fixtures::paper_setup();
    const auto modes = fabry_perot_modes(setup, 3, 1);
    const auto grid = build_momentum_grid(setup, modes, 4);
    CouplingOptions opts;
    opts.photon_cutoff = 2;
    const auto table = build_coupling_table(setup, modes, grid, opts);
    const std::size_t dim = table.basis().dimension();
    REQUIRE(dim <= kDenseDimensionGuard);

    std::vector<std::size_t> all(dim);
    for (std::size_t a = 0; a < dim; ++a) all[a] = a;
    const SparseGenerator gen(table, all);

    for (unsigned seed = 1; seed <= 4; ++seed) {
        const double t = 0.25 * seed * table.transit_time_s();
        const auto psi = random_state(dim, seed);
        Eigen::VectorXcd gathered, sparse;
        rhs(t, psi, table, gathered);
        gen.apply(t, psi, sparse);
        const Eigen::MatrixXcd h = build_dense_hamiltonian(t, table);
        const Eigen::VectorXcd dense = cplx(0.0, -1.0) * (h * psi);
        const double scale = gathered.norm();
        CHECK((gathered - sparse).norm() <= 1e-13 * scale);
        CHECK((Eigen::MatrixXcd(gen.sparse(t)) - gen.dense(t)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((gathered - dense).norm() <= 1e-13 * scale);
        CHECK(max_abs(h - h.adjoint()) <= 1e-12 * max_abs(h));
        // d/dt <psi|psi> = 2 Re <psi|psi'> vanishes for an anti-Hermitian generator.
        CHECK(std::abs(psi.dot(gathered).real()) <= 1e-13 * scale);
    }
}

TEST_CASE("reachable subspace is closed") {
    const auto ex = fixtures::small_experiment();
    const auto seeds = support(ex.initial.amplitudes());
    REQUIRE(seeds.size() == 1);
    const auto states = reachable_subspace(ex.table, seeds);
    CHECK(std::find(states.begin(), states.end(), seeds[0]) != states.end());
    CHECK(states.size() < ex.table.basis().dimension());

    const SparseGenerator gen(ex.table, states);
    CHECK(gen.dimension() == states.size());
    CHECK(gen.nonzeros() % 2 == 0);
    const auto sub = gen.restrict(ex.initial.amplitudes());
    CHECK((gen.embed(sub, ex.table.basis().dimension()) - ex.initial.amplitudes()).norm() == 0.0);

    // Dropping a state breaks invariance.
    if (states.size() > 1) {
        std::vector<std::size_t> partial(states.begin(), states.end() - 1);
        CHECK_THROWS_AS(SparseGenerator(ex.table, partial), BasisError);
    }
    CHECK_THROWS_AS((void)build_dense_hamiltonian(0.0, ex.table, 10), DimensionError);
}

TEST_CASE("few-level reductions") {
    const auto setup = fixtures::paper_setup();

    SUBCASE("two level") {
        const auto model = rwa_reduce(setup, fabry_perot_modes(setup, 3, 1), ReducedSystem::two_level);
        CHECK(model.passes);
        CHECK(model.levels.size() == 2);
        CHECK(model.states == std::vector<std::string>{"E1,0", "E0,1"});
        const double hbar_ev = kCodata2018.hbar_js / kCodata2018.electron_charge_c;
        CHECK(model.level_energies_ev[0] - model.level_energies_ev[1] ==
              doctest::Approx(hbar_ev * kTwoPi * kCodata2018.light_speed_m_s / 532e-9));
        const auto h = model.hamiltonian_over_hbar();
        CHECK(max_abs(h - h.adjoint()) == 0.0);
        CHECK(model.criterion_value >= kDefaultCriterionThreshold);
    }
    SUBCASE("ladder") {
        const auto model = rwa_reduce(setup, ladder_modes(setup, 1), ReducedSystem::ladder);
        CHECK(model.levels == std::vector<std::string>{"E2", "E1", "E0"});
        CHECK(model.hamiltonian_over_hbar().rows() == 3);

        auto short_cavity = setup;
        short_cavity.cavity_length_m = 5e-6;
        const auto modes = ladder_modes(short_cavity, 1);
        CHECK_THROWS_AS((void)rwa_reduce(short_cavity, modes, ReducedSystem::ladder), CriterionError);
        const auto forced = rwa_reduce(short_cavity, modes, ReducedSystem::ladder, true);
        CHECK_FALSE(forced.passes);
    }
    SUBCASE("lambda") {
        const auto model = rwa_reduce(setup, lambda_modes(setup, 32, 2, 1), ReducedSystem::lambda);
        CHECK(model.states == std::vector<std::string>{"E0,0,1", "E1,0,0", "E2,1,0"});
        const auto h = model.hamiltonian_over_hbar();
        CHECK(max_abs(h - h.adjoint()) == 0.0);
    }
    SUBCASE("a single mode cannot make a ladder") {
        CHECK_THROWS_AS((void)rwa_reduce(setup, fabry_perot_modes(setup, 1, 1), ReducedSystem::ladder), PhysicsError);
    }
}

TEST_CASE("photon-number blocks split by the vacuum Rabi frequency") {
    const cplx g = std::polar(2.5e11, 0.4);
    for (int n = 1; n <= 3; ++n) {
        const Eigen::Matrix2cd h = photon_block_hamiltonian(g, n);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(h);
        const double split = std::abs(g) * std::sqrt(double(n));
        CHECK(eig.eigenvalues()(0) == doctest::Approx(-split).epsilon(1e-14));
        CHECK(eig.eigenvalues()(1) == doctest::Approx(split).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)photon_block_hamiltonian(g, 0), PhysicsError);
}
