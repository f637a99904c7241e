#include "hmfp/vlasov.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/interaction.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hmfp {

namespace {

void accumulate(TransportReport* report, const kernels::TransportLoss& loss, const PhaseGrid& g) {
    if (!report) return;
    report->boundary_loss += loss.boundary * g.cell_area();
    report->clipped_mass += loss.clipped * g.cell_area();
}

bool all_finite(const DistributionField& f) {
    for (double x : f.values())
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

DistributionField advect_theta(const DistributionField& f, double dt, Interp interp, TransportReport* report) {
    if (dt == 0.0) return f;
    const auto& g = f.grid();
    std::vector<double> v(g.n_v());
    for (std::size_t j = 0; j < g.n_v(); ++j) v[j] = g.v(j);
    DistributionField out(g);
    accumulate(report, kernels::omp::advect_theta(f.values(), out.values(), g.n_theta(), v, dt, g.d_theta(), interp),
               g);
    return out;
}

DistributionField advect_v(const DistributionField& f, std::span<const double> phi_prime, double dt, Interp interp,
                           TransportReport* report) {
    const auto& g = f.grid();
    if (phi_prime.size() != g.n_theta()) throw GridMismatch();
    if (dt == 0.0) return f;
    DistributionField out(g);
    accumulate(report, kernels::omp::advect_v(f.values(), out.values(), g.n_v(), phi_prime, dt, g.d_v(), interp), g);
    return out;
}

DistributionField strang_step(const DistributionField& f, double dt, Interp interp, TransportReport* report) {
    DistributionField half = advect_theta(f, 0.5 * dt, interp, report);
    const Potential phi = solve_potential(half);
    DistributionField kicked = advect_v(half, phi.derivative, dt, interp, report);
    return advect_theta(kicked, 0.5 * dt, interp, report);
}

EvolveSummary evolve(const DistributionField& f0, const SolverConfig& cfg, const EvolveObserver& observer) {
    if (!(cfg.dt > 0.0) || cfg.dt > 0.5) throw InvalidArgument("dt must lie in (0, 0.5]");
    if (!(cfg.t_end >= 0.0)) throw InvalidArgument("t_end must be nonnegative");
    if (cfg.record_every == 0) throw InvalidArgument("record_every must be positive");

    EvolveSummary s;
    s.steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    s.final_field = f0;
    const double m0 = integrate(f0);
    if (observer) observer(0, 0.0, s.final_field);
    for (std::size_t n = 1; n <= s.steps; ++n) {
        s.final_field = strang_step(s.final_field, cfg.dt, cfg.interpolation, &s.losses);
        if (!all_finite(s.final_field)) throw SolverAbort("non-finite sample after step " + std::to_string(n), n);
        if (cfg.renormalize_mass && m0 > 0.0) {
            const double m = integrate(s.final_field);
            if (std::abs(m - m0) > 1e-13 * m0) {
                if (!(m > 0.0)) throw SolverAbort("all mass left the velocity box at step " + std::to_string(n), n);
                s.final_field *= m0 / m;
            }
        }
        const double t = static_cast<double>(n) * cfg.dt;
        if (observer && n % cfg.record_every == 0) observer(n, t, s.final_field);
    }
    s.final_time = static_cast<double>(s.steps) * cfg.dt;
    return s;
}

} // namespace hmfp
