#include "fejc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <tuple>

#include "fejc/errors.hpp"

namespace fejc {

std::string to_string(LossCalibration calibration) {
    return calibration == LossCalibration::amplitude ? "amplitude" : "arcsin";
}

LossCalibration parse_loss_calibration(const std::string& text) {
    if (text == "amplitude") return LossCalibration::amplitude;
    if (text == "arcsin") return LossCalibration::arcsin;
    throw ConfigError("unknown loss calibration '" + text + "'");
}

std::string to_string(ReducedSystem system) {
    switch (system) {
    case ReducedSystem::two_level: return "two_level";
    case ReducedSystem::ladder: return "ladder";
    case ReducedSystem::lambda: return "lambda";
    }
    return "unknown";
}

CouplingTable::CouplingTable(Basis basis, CavityModeSet modes, std::vector<Transfer> transfers, double hbar_over_mass,
                             bool recoil_free, double transit_time_s)
    : basis_(std::move(basis)), modes_(std::move(modes)), transfers_(std::move(transfers)),
      hbar_over_mass_(hbar_over_mass), recoil_free_(recoil_free), transit_time_s_(transit_time_s) {
    if (basis_.fock.mode_count() != modes_.size()) throw BasisError("Fock space and mode set disagree");
    for (const auto& t : transfers_) {
        if (t.mode >= modes_.size()) throw BasisError("transfer refers to unknown mode");
    }
    const std::size_t n = basis_.grid.size();
    detunings_.resize(transfers_.size() * n);
    for (std::size_t t = 0; t < transfers_.size(); ++t) {
        for (std::size_t i = 0; i < n; ++i) detunings_[t * n + i] = detuning(i, transfers_[t]);
    }
}

double CouplingTable::detuning(std::size_t momentum_index, const Transfer& transfer) const {
    const auto& grid = basis_.grid;
    const double k = recoil_free_ ? grid.center() : grid.k(momentum_index);
    const double q = transfer.shift_cells * grid.spacing();
    return hbar_over_mass_ * (k - 0.5 * q) * q - modes_.modes[transfer.mode].frequency_rad_s;
}

CouplingTable build_coupling_table(const PhysicalSetup& setup, const CavityModeSet& modes, const MomentumGrid& grid,
                                   const CouplingOptions& options, const PhysicalConstants& pc) {
    const auto kin = electron_kinematics(setup.kinetic_energy_ev, pc);
    const double transit = kin.transit_time(setup.cavity_length_m);
    const double signal = setup.coupling_gq / transit;
    const double root_loss = std::sqrt(setup.loss_probability);
    const double loss =
        (options.loss_calibration == LossCalibration::amplitude ? root_loss : std::asin(root_loss)) / transit;

    Basis basis{grid, FockSpace(modes.size(), options.photon_cutoff)};
    std::vector<Transfer> transfers;
    const int reach = static_cast<int>(grid.size()) - 1;
    const double max_gain = 2.0 * std::sqrt(static_cast<double>(options.photon_cutoff));

    CouplingTable probe(basis, modes, {}, pc.hbar_over_mass(), options.recoil_free, transit);
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const double base = modes.modes[j].role == ModeRole::signal ? signal : loss;
        if (base == 0.0) continue;
        for (int s = -reach; s <= reach; ++s) {
            const double weight = coupling_kernel(s * grid.spacing(), modes.modes[j], setup.cavity_length_m);
            if (std::abs(weight) < options.sinc_cutoff) continue;
            Transfer tr{j, s, cplx(base * weight, 0.0)};

            double closest = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (!grid.index_of_offset(grid.offset(i) - s)) continue;
                closest = std::min(closest, std::abs(probe.detuning(i, tr)));
            }
            if (!std::isfinite(closest)) continue;
            if (closest > 0.0 && max_gain * std::abs(tr.amplitude_rad_s) / closest < options.off_resonance_cutoff) {
                continue;
            }
            transfers.push_back(tr);
        }
    }
    return CouplingTable(std::move(basis), modes, std::move(transfers), pc.hbar_over_mass(), options.recoil_free,
                         transit);
}

namespace {

// Visits the coupled partners of full-basis state `index`:
// fn(partner, transfer, emits) where `emits` means the partner holds one more
// photon at lower momentum.
template <class Fn>
void for_each_partner(const CouplingTable& table, std::size_t index, Fn&& fn) {
    const auto& basis = table.basis();
    const auto& grid = basis.grid;
    const auto& fock = basis.fock;
    const std::size_t i = basis.momentum_index(index);
    const std::size_t f = basis.fock_index(index);
    const auto& transfers = table.transfers();
    for (std::size_t t = 0; t < transfers.size(); ++t) {
        const auto& tr = transfers[t];
        const int n = fock.occupation(f, tr.mode);
        if (n < fock.cutoff()) {
            if (auto lower = grid.index_of_offset(grid.offset(i) - tr.shift_cells)) {
                fn(basis.index(*lower, f + fock.stride(tr.mode)), t, true);
            }
        }
        if (n > 0) {
            if (auto upper = grid.index_of_offset(grid.offset(i) + tr.shift_cells)) {
                fn(basis.index(*upper, f - fock.stride(tr.mode)), t, false);
            }
        }
    }
}

void check_basis(const JointState& psi, const CouplingTable& table) {
    if (!(psi.basis() == table.basis())) throw BasisError("state and coupling table use different bases");
}

} // namespace

void rhs(double t, const Eigen::VectorXcd& psi, const CouplingTable& table, Eigen::VectorXcd& out) {
    const auto& basis = table.basis();
    const std::size_t dim = basis.dimension();
    if (static_cast<std::size_t>(psi.size()) != dim) throw BasisError("state has wrong dimension");
    const std::size_t npts = basis.grid.size();
    const auto& transfers = table.transfers();

    std::vector<cplx> phase(transfers.size() * npts);
    for (std::size_t tr = 0; tr < transfers.size(); ++tr) {
        for (std::size_t i = 0; i < npts; ++i) {
            phase[tr * npts + i] = std::polar(1.0, table.cached_detuning(tr, i) * t);
        }
    }

    out.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
        const std::size_t f = basis.fock_index(a);
        const std::size_t i = basis.momentum_index(a);
        cplx acc = 0.0;
        for_each_partner(table, a, [&](std::size_t b, std::size_t tr, bool emits) {
            const auto& x = transfers[tr];
            const int n = basis.fock.occupation(f, x.mode);
            const cplx amp = psi(static_cast<Eigen::Index>(b));
            if (emits) {
                acc += x.amplitude_rad_s * phase[tr * npts + i] * std::sqrt(n + 1.0) * amp;
            } else {
                const std::size_t from = basis.momentum_index(b);
                acc -= std::conj(x.amplitude_rad_s * phase[tr * npts + from]) * std::sqrt(double(n)) * amp;
            }
        });
        out(static_cast<Eigen::Index>(a)) = acc;
    }
}

Eigen::VectorXcd rhs(double t, const JointState& psi, const CouplingTable& table) {
    check_basis(psi, table);
    Eigen::VectorXcd out;
    rhs(t, psi.amplitudes(), table, out);
    return out;
}

std::vector<std::size_t> reachable_subspace(const CouplingTable& table, std::span<const std::size_t> seeds) {
    const std::size_t dim = table.basis().dimension();
    std::vector<char> seen(dim, 0);
    std::deque<std::size_t> queue;
    for (auto s : seeds) {
        if (s >= dim) throw BasisError("seed outside basis");
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for_each_partner(table, a, [&](std::size_t b, std::size_t, bool) {
            if (!seen[b]) {
                seen[b] = 1;
                queue.push_back(b);
            }
        });
    }
    std::vector<std::size_t> states;
    for (std::size_t a = 0; a < dim; ++a) {
        if (seen[a]) states.push_back(a);
    }
    return states;
}

std::vector<std::size_t> support(const Eigen::VectorXcd& amplitudes) {
    std::vector<std::size_t> out;
    for (Eigen::Index a = 0; a < amplitudes.size(); ++a) {
        if (amplitudes(a) != cplx(0.0, 0.0)) out.push_back(static_cast<std::size_t>(a));
    }
    return out;
}

SparseGenerator::SparseGenerator(const CouplingTable& table, std::vector<std::size_t> states)
    : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
    const auto& basis = table.basis();
    const auto& transfers = table.transfers();
    const std::size_t dim = basis.dimension();
    if (!states_.empty() && states_.back() >= dim) throw BasisError("subspace state outside basis");

    auto position = [&](std::size_t full) -> std::size_t {
        auto it = std::lower_bound(states_.begin(), states_.end(), full);
        if (it == states_.end() || *it != full) throw BasisError("subspace is not invariant under the couplings");
        return static_cast<std::size_t>(it - states_.begin());
    };

    // Each emission edge a -> b contributes to both rows.
    std::vector<std::tuple<std::size_t, std::size_t, cplx, double>> entries;
    for (std::size_t r = 0; r < states_.size(); ++r) {
        const std::size_t a = states_[r];
        const std::size_t i = basis.momentum_index(a);
        const std::size_t f = basis.fock_index(a);
        for_each_partner(table, a, [&](std::size_t b, std::size_t tr, bool emits) {
            const std::size_t c = position(b);
            if (!emits) return;
            const auto& x = transfers[tr];
            const double root = std::sqrt(basis.fock.occupation(f, x.mode) + 1.0);
            const double det = table.cached_detuning(tr, i);
            entries.emplace_back(r, c, x.amplitude_rad_s * root, det);
            entries.emplace_back(c, r, -std::conj(x.amplitude_rad_s) * root, -det);
        });
    }
    std::sort(entries.begin(), entries.end(), [](const auto& lhs, const auto& rhs) {
        return std::tie(std::get<0>(lhs), std::get<1>(lhs)) < std::tie(std::get<0>(rhs), std::get<1>(rhs));
    });

    row_start_.assign(states_.size() + 1, 0);
    columns_.reserve(entries.size());
    amplitudes_.reserve(entries.size());
    detunings_.reserve(entries.size());
    for (const auto& [r, c, amp, det] : entries) {
        ++row_start_[r + 1];
        columns_.push_back(c);
        amplitudes_.push_back(amp);
        detunings_.push_back(det);
    }
    for (std::size_t r = 0; r < states_.size(); ++r) row_start_[r + 1] += row_start_[r];
}

void SparseGenerator::apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const {
    out.resize(static_cast<Eigen::Index>(states_.size()));
    for (std::size_t r = 0; r < states_.size(); ++r) {
        cplx acc = 0.0;
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
            acc += amplitudes_[e] * std::polar(1.0, detunings_[e] * t) * x(static_cast<Eigen::Index>(columns_[e]));
        }
        out(static_cast<Eigen::Index>(r)) = acc;
    }
}

Eigen::MatrixXcd SparseGenerator::dense(double t) const {
    const auto n = static_cast<Eigen::Index>(states_.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t r = 0; r < states_.size(); ++r) {
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(columns_[e])) +=
                amplitudes_[e] * std::polar(1.0, detunings_[e] * t);
        }
    }
    return a;
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor> SparseGenerator::sparse(double t) const {
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(columns_.size());
    for (std::size_t r = 0; r < states_.size(); ++r) {
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
            entries.emplace_back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(columns_[e]),
                                 amplitudes_[e] * std::polar(1.0, detunings_[e] * t));
        }
    }
    const auto n = static_cast<Eigen::Index>(states_.size());
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

Eigen::VectorXcd SparseGenerator::restrict(const Eigen::VectorXcd& full) const {
    Eigen::VectorXcd sub(static_cast<Eigen::Index>(states_.size()));
    double inside = 0.0;
    for (std::size_t r = 0; r < states_.size(); ++r) {
        sub(static_cast<Eigen::Index>(r)) = full(static_cast<Eigen::Index>(states_[r]));
        inside += std::norm(sub(static_cast<Eigen::Index>(r)));
    }
    if (std::abs(full.squaredNorm() - inside) > 1e-14 * std::max(1.0, full.squaredNorm())) {
        throw BasisError("state has weight outside the subspace");
    }
    return sub;
}

Eigen::VectorXcd SparseGenerator::embed(const Eigen::VectorXcd& sub, std::size_t full_dimension) const {
    if (static_cast<std::size_t>(sub.size()) != states_.size()) throw BasisError("subspace vector has wrong size");
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(full_dimension));
    for (std::size_t r = 0; r < states_.size(); ++r) {
        full(static_cast<Eigen::Index>(states_[r])) = sub(static_cast<Eigen::Index>(r));
    }
    return full;
}

Eigen::MatrixXcd build_dense_hamiltonian(double t, const SparseGenerator& generator, std::size_t max_dimension) {
    if (generator.dimension() > max_dimension) throw DimensionError("basis too large for a dense Hamiltonian");
    return cplx(0.0, 1.0) * generator.dense(t);
}

Eigen::MatrixXcd build_dense_hamiltonian(double t, const CouplingTable& table, std::size_t max_dimension) {
    const std::size_t dim = table.basis().dimension();
    if (dim > max_dimension) throw DimensionError("basis too large for a dense Hamiltonian");
    std::vector<std::size_t> all(dim);
    for (std::size_t a = 0; a < dim; ++a) all[a] = a;
    return build_dense_hamiltonian(t, SparseGenerator(table, std::move(all)), max_dimension);
}

namespace {

struct Level {
    double momentum_shift_rad_m; // relative to k0
    std::vector<int> photons;    // per kept signal mode
};

} // namespace

Eigen::MatrixXcd EffectiveModel::hamiltonian_over_hbar() const {
    const auto n = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    switch (system) {
    case ReducedSystem::two_level:
        a(0, 1) = couplings_rad_s[0];
        a(1, 0) = -std::conj(couplings_rad_s[0]);
        break;
    case ReducedSystem::ladder:
        // E2,0,0 <-> E1,1,0 <-> E0,1,1
        a(0, 1) = couplings_rad_s[0];
        a(1, 0) = -std::conj(couplings_rad_s[0]);
        a(1, 2) = couplings_rad_s[1];
        a(2, 1) = -std::conj(couplings_rad_s[1]);
        break;
    case ReducedSystem::lambda:
        // E0,0,1 <-> E1,0,0 <-> E2,1,0
        a(1, 0) = couplings_rad_s[1];
        a(0, 1) = -std::conj(couplings_rad_s[1]);
        a(1, 2) = couplings_rad_s[0];
        a(2, 1) = -std::conj(couplings_rad_s[0]);
        break;
    }
    return cplx(0.0, 1.0) * a;
}

EffectiveModel rwa_reduce(const PhysicalSetup& setup, const CavityModeSet& modes, ReducedSystem system,
                          bool override_criterion, double criterion_threshold, const PhysicalConstants& pc) {
    const auto kin = electron_kinematics(setup.kinetic_energy_ev, pc);
    const double transit = kin.transit_time(setup.cavity_length_m);
    const cplx g(setup.coupling_gq / transit, 0.0);
    const double hbar_ev = pc.hbar_js / pc.electron_charge_c;

    std::vector<std::size_t> kept;
    if (system == ReducedSystem::two_level) {
        kept.push_back(modes.target);
    } else {
        for (std::size_t j = 0; j < modes.size() && kept.size() < 2; ++j) {
            if (modes.modes[j].role == ModeRole::signal) kept.push_back(j);
        }
        if (kept.size() < 2) throw PhysicsError("three-level reduction needs two signal modes");
    }
    const auto& a = modes.modes[kept[0]];

    EffectiveModel model;
    model.system = system;
    std::vector<Level> levels;
    const double e = setup.kinetic_energy_ev;
    switch (system) {
    case ReducedSystem::two_level:
        model.levels = {"E1", "E0"};
        model.level_energies_ev = {e, e - hbar_ev * a.frequency_rad_s};
        model.states = {"E1,0", "E0,1"};
        model.couplings_rad_s = {g};
        levels = {{0.0, {0}}, {-a.total_recoil_rad_m, {1}}};
        break;
    case ReducedSystem::ladder: {
        const auto& b = modes.modes[kept[1]];
        model.levels = {"E2", "E1", "E0"};
        model.level_energies_ev = {e, e - hbar_ev * a.frequency_rad_s,
                                   e - hbar_ev * (a.frequency_rad_s + b.frequency_rad_s)};
        model.states = {"E2,0,0", "E1,1,0", "E0,1,1"};
        model.couplings_rad_s = {g, g};
        levels = {{0.0, {0, 0}},
                  {-a.total_recoil_rad_m, {1, 0}},
                  {-a.total_recoil_rad_m - b.total_recoil_rad_m, {1, 1}}};
        break;
    }
    case ReducedSystem::lambda: {
        const auto& b = modes.modes[kept[1]];
        model.levels = {"E1", "E0", "E2"};
        model.level_energies_ev = {e, e - hbar_ev * b.frequency_rad_s, e - hbar_ev * a.frequency_rad_s};
        model.states = {"E0,0,1", "E1,0,0", "E2,1,0"};
        model.couplings_rad_s = {g, g};
        levels = {{-b.total_recoil_rad_m, {0, 1}}, {0.0, {0, 0}}, {-a.total_recoil_rad_m, {1, 0}}};
        break;
    }
    }

    const double k0 = kin.wavenumber_rad_m;
    auto emission_detuning = [&](double k, const CavityMode& m) {
        const double q = m.total_recoil_rad_m;
        return pc.hbar_over_mass() * (k - 0.5 * q) * q - m.frequency_rad_s;
    };
    auto is_level = [&](double shift, const std::vector<int>& photons) {
        return std::any_of(levels.begin(), levels.end(), [&](const Level& l) {
            return l.photons == photons && std::abs(l.momentum_shift_rad_m - shift) < 1e-9 * k0;
        });
    };

    // Every single-photon process out of the kept levels that leaves them is
    // dropped by the reduction; its detuning must be large.
    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& level : levels) {
        const double k = k0 + level.momentum_shift_rad_m;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const auto& m = modes.modes[j];
            if (m.role != ModeRole::signal) continue;
            const auto slot = std::find(kept.begin(), kept.end(), j);
            const auto pos = static_cast<std::size_t>(slot - kept.begin());
            const int have = slot == kept.end() ? 0 : level.photons[pos];

            std::vector<int> up = level.photons;
            if (slot != kept.end()) ++up[pos];
            const bool stays = slot != kept.end() && is_level(level.momentum_shift_rad_m - m.total_recoil_rad_m, up);
            if (!stays) smallest = std::min(smallest, std::abs(emission_detuning(k, m)));

            if (have > 0) {
                std::vector<int> down = level.photons;
                --down[pos];
                if (!is_level(level.momentum_shift_rad_m + m.total_recoil_rad_m, down)) {
                    smallest = std::min(smallest, std::abs(emission_detuning(k + m.total_recoil_rad_m, m)));
                }
            }
        }
    }
    model.neglected_detuning_rad_s = smallest;
    model.criterion_value = smallest * transit;
    model.passes = model.criterion_value >= criterion_threshold;
    if (!model.passes && !override_criterion) {
        throw CriterionError(to_string(system) + " reduction invalid: neglected detuning times T = " +
                             std::to_string(model.criterion_value));
    }
    return model;
}

Eigen::Matrix2cd photon_block_hamiltonian(cplx coupling_rad_s, int photons) {
    if (photons < 1) throw PhysicsError("photon block needs at least one photon");
    const double root = std::sqrt(static_cast<double>(photons));
    Eigen::Matrix2cd a = Eigen::Matrix2cd::Zero();
    a(0, 1) = coupling_rad_s * root;
    a(1, 0) = -std::conj(coupling_rad_s) * root;
    return cplx(0.0, 1.0) * a;
}

} // namespace fejc
