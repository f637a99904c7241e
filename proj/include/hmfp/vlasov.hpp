#pragma once

#include "hmfp/grid.hpp"
#include "hmfp/kernels.hpp"

#include <cstddef>
#include <functional>
#include <span>

namespace hmfp {

using kernels::Interp;

struct SolverConfig {
    double dt = 0.05;
    double t_end = 10.0;
    Interp interpolation = Interp::linear;
    std::size_t record_every = 1;
    bool renormalize_mass = true;
};

/// Mass (phase-space measure, not raw sums) lost or created by a transport step.
struct TransportReport {
    double boundary_loss = 0.0;
    double clipped_mass = 0.0;
};

/// f(theta - v dt, v), periodic in theta.
DistributionField advect_theta(const DistributionField& f, double dt, Interp interp = Interp::linear,
                               TransportReport* report = nullptr);

/// f(theta, v + phi'(theta) dt), zero inflow through |v| = v_max.
DistributionField advect_v(const DistributionField& f, std::span<const double> phi_prime, double dt,
                           Interp interp = Interp::linear, TransportReport* report = nullptr);

/// Half theta step, field solve, full v step, half theta step.
DistributionField strang_step(const DistributionField& f, double dt, Interp interp = Interp::linear,
                              TransportReport* report = nullptr);

struct EvolveSummary {
    DistributionField final_field;
    std::size_t steps = 0;
    double final_time = 0.0;
    TransportReport losses;
};

using EvolveObserver = std::function<void(std::size_t step, double time, const DistributionField& f)>;

/// round(t_end / dt) Strang steps. The observer sees step 0 and every
/// record_every-th step. Throws SolverAbort with the step index on a
/// non-finite sample.
EvolveSummary evolve(const DistributionField& f0, const SolverConfig& config, const EvolveObserver& observer = {});

} // namespace hmfp
