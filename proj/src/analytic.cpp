#include "fejc/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "fejc/constants.hpp"
#include "fejc/errors.hpp"

namespace fejc {

cplx FewLevelState::amplitude(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw BasisError("no few-level state labelled '" + label + "'");
    return amplitudes(it - labels.begin());
}

FewLevelState jc_two_level(cplx coupling_rad_s, double t_s) {
    const double x = std::abs(coupling_rad_s) * t_s;
    FewLevelState s{{"E1,0", "E0,1"}, Eigen::VectorXcd(2)};
    s.amplitudes << std::cos(x), -std::polar(1.0, -std::arg(coupling_rad_s)) * std::sin(x);
    return s;
}

FewLevelState ladder_three_level(double coupling_rad_s, double t_s) {
    const double gt = coupling_rad_s * t_s;
    const double half = std::cos(gt / std::sqrt(2.0));
    const double other = std::sin(gt / std::sqrt(2.0));
    FewLevelState s{{"E2,0,0", "E1,1,0", "E0,1,1"}, Eigen::VectorXcd(3)};
    s.amplitudes << half * half, -std::sin(std::sqrt(2.0) * gt) / std::sqrt(2.0), other * other;
    return s;
}

FewLevelState lambda_three_level(double coupling_rad_s, double t_s, LambdaStart initial) {
    const double gt = coupling_rad_s * t_s;
    const double c = std::cos(gt / std::sqrt(2.0));
    const double s = std::sin(gt / std::sqrt(2.0));
    FewLevelState out;
    out.labels = initial == LambdaStart::E0_0_1 ? std::vector<std::string>{"E0,0,1", "E1,0,0", "E2,1,0"}
                                                : std::vector<std::string>{"E2,1,0", "E1,0,0", "E0,0,1"};
    out.amplitudes.resize(3);
    out.amplitudes << c * c, std::sin(std::sqrt(2.0) * gt) / std::sqrt(2.0), -s * s;
    return out;
}

std::pair<Qubit, Qubit> swap_gate(const Qubit& electron, const Qubit& photon) {
    auto normalized = [](const Qubit& q) { return std::abs(std::norm(q.alpha) + std::norm(q.beta) - 1.0) <= 1e-12; };
    if (!normalized(electron) || !normalized(photon)) throw PhysicsError("swap gate inputs must be normalized");
    return {Qubit{-photon.beta, photon.alpha}, Qubit{electron.beta, -electron.alpha}};
}

double symmetric_ladder_coefficient(int electrons, int excitations, LadderDirection direction) {
    if (electrons < 1 || excitations < 0 || excitations > electrons) {
        throw PhysicsError("symmetric state index out of range");
    }
    const double n_total = electrons;
    const double n = excitations;
    if (direction == LadderDirection::raise) {
        if (excitations == electrons) throw PhysicsError("cannot raise the fully excited state");
        return std::sqrt((n_total - n) * (n + 1.0));
    }
    if (excitations == 0) throw PhysicsError("cannot lower the ground state");
    return std::sqrt((n_total - n + 1.0) * n);
}

FewLevelState tavis_cummings_single_excitation(int electrons, cplx coupling_rad_s, double t_s) {
    if (electrons < 1) throw PhysicsError("need at least one electron");
    const double x = std::sqrt(static_cast<double>(electrons)) * std::abs(coupling_rad_s) * t_s;
    FewLevelState s{{"1_S,0", "0_S,1"}, Eigen::VectorXcd(2)};
    s.amplitudes << std::cos(x), -std::polar(1.0, -std::arg(coupling_rad_s)) * std::sin(x);
    return s;
}

double collective_emission_time(int electrons, cplx coupling_rad_s) {
    if (electrons < 1) throw PhysicsError("need at least one electron");
    if (std::abs(coupling_rad_s) == 0.0) throw PhysicsError("coupling must be non-zero");
    return kPi / (2.0 * std::sqrt(static_cast<double>(electrons)) * std::abs(coupling_rad_s));
}

std::vector<Polariton> jc_eigensystem(int photons, cplx coupling_rad_s) {
    if (photons < 0) throw PhysicsError("photon number must be non-negative");
    if (photons == 0) return {Polariton{0.0, Eigen::Vector2cd(0.0, 1.0)}};
    const double split = std::abs(coupling_rad_s) * std::sqrt(static_cast<double>(photons));
    const cplx twist = cplx(0.0, 1.0) * std::polar(1.0, -std::arg(coupling_rad_s));
    const double r = 1.0 / std::sqrt(2.0);
    return {Polariton{-split, Eigen::Vector2cd(r, r * twist)}, Polariton{split, Eigen::Vector2cd(r, -r * twist)}};
}

} // namespace fejc
