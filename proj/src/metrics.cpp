#include "fejc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fejc/errors.hpp"

namespace fejc {

double fidelity(const JointState& psi, const JointState& phi) {
    if (!(psi.basis() == phi.basis())) throw BasisError("fidelity between states on different bases");
    return std::norm(psi.amplitudes().dot(phi.amplitudes()));
}

double fidelity(const JointState& psi, const FewLevelState& phi, std::span<const StateLabel> labels,
                const Eigen::VectorXd& momentum_profile) {
    const auto& basis = psi.basis();
    const auto npts = static_cast<Eigen::Index>(basis.grid.size());
    if (momentum_profile.size() != npts) throw BasisError("momentum profile does not match the grid");

    Eigen::VectorXcd embedded = Eigen::VectorXcd::Zero(psi.amplitudes().size());
    for (std::size_t l = 0; l < phi.labels.size(); ++l) {
        const auto it = std::find_if(labels.begin(), labels.end(),
                                     [&](const StateLabel& s) { return s.name == phi.labels[l]; });
        if (it == labels.end()) throw BasisError("no joint-basis label for '" + phi.labels[l] + "'");
        const std::size_t photons = basis.fock.flatten(it->occupation);
        for (Eigen::Index i = 0; i < npts; ++i) {
            const Eigen::Index source = i - it->momentum_offset_cells;
            if (source < 0 || source >= npts) continue;
            embedded(static_cast<Eigen::Index>(basis.index(static_cast<std::size_t>(i), photons))) +=
                phi.amplitudes(static_cast<Eigen::Index>(l)) * momentum_profile(source);
        }
    }
    const double norms = embedded.squaredNorm() * psi.norm_squared();
    if (norms == 0.0) throw BasisError("embedded state vanishes on this grid");
    return std::norm(embedded.dot(psi.amplitudes())) / norms;
}

std::vector<LabeledStateProbability> labeled_probabilities(const JointState& psi, std::span<const StateLabel> labels,
                                                           double window_width_rad_m) {
    const auto& basis = psi.basis();
    const double dk = basis.grid.spacing();
    for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            if (labels[a].occupation != labels[b].occupation) continue;
            const double gap = std::abs(labels[a].momentum_offset_cells - labels[b].momentum_offset_cells) * dk;
            if (gap < window_width_rad_m) {
                throw BasisError("label windows overlap: " + labels[a].name + " and " + labels[b].name);
            }
        }
    }

    std::vector<LabeledStateProbability> out;
    double labelled = 0.0;
    for (const auto& label : labels) {
        const std::size_t photons = basis.fock.flatten(label.occupation);
        double p = 0.0;
        for (std::size_t i = 0; i < basis.grid.size(); ++i) {
            if (std::abs(basis.grid.offset(i) - label.momentum_offset_cells) * dk < 0.5 * window_width_rad_m) {
                p += std::norm(psi.amplitudes()(static_cast<Eigen::Index>(basis.index(i, photons))));
            }
        }
        labelled += p;
        out.push_back({label.name, p});
    }
    out.push_back({"other", std::max(0.0, psi.norm_squared() - labelled)});
    return out;
}

Eigen::VectorXd photon_number_distribution(const JointState& psi, std::size_t mode) {
    const auto& basis = psi.basis();
    if (mode >= basis.fock.mode_count()) throw std::out_of_range("mode index out of range");
    Eigen::VectorXd p = Eigen::VectorXd::Zero(basis.fock.cutoff() + 1);
    for (std::size_t a = 0; a < basis.dimension(); ++a) {
        p(basis.fock.occupation(basis.fock_index(a), mode)) += std::norm(psi.amplitudes()(static_cast<Eigen::Index>(a)));
    }
    const double total = p.sum();
    if (total == 0.0) throw BasisError("state has zero norm");
    return p / total;
}

Eigen::VectorXd poissonian_reference(double mean, int cutoff) {
    if (!(mean >= 0.0)) throw std::domain_error("Poisson mean must be non-negative");
    if (cutoff < 0) throw std::domain_error("cutoff must be non-negative");
    Eigen::VectorXd p(cutoff + 1);
    double term = std::exp(-mean);
    for (int n = 0; n <= cutoff; ++n) {
        p(n) = term;
        term *= mean / (n + 1);
    }
    return p / p.sum();
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    if (p.size() != q.size()) throw std::invalid_argument("distributions differ in length");
    return 0.5 * (p - q).cwiseAbs().sum();
}

} // namespace fejc
