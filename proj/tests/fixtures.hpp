#pragma once

#include "fejc/phasematch.hpp"
#include "fejc/scenarios.hpp"

namespace fixtures {

inline fejc::PhysicalSetup paper_setup() { return fejc::with_phase_matched_grating(fejc::PhysicalSetup{}); }

// One signal mode, no loss channel, monochromatic electron: a handful of
// reachable states, cheap enough for dense oracles in every test.
inline fejc::Experiment small_experiment(double coupling_gq = fejc::kPi / 2.0) {
    auto setup = paper_setup();
    setup.energy_uncertainty_ev = 0.0;
    setup.coupling_gq = coupling_gq;
    fejc::ModelOptions opts;
    opts.signal_modes = 1;
    opts.loss_modes = 0;
    return fejc::two_level_experiment(setup, opts);
}

} // namespace fixtures
