#pragma once

#include "hmfp/casimir.hpp"
#include "hmfp/grid.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace hmfp {

struct Multipliers {
    double lambda = 0.0;
    std::optional<double> mu; // strictly negative when present
};

struct ConstraintSet {
    double m1 = 0.0;
    std::optional<double> mj;
};

struct SteadyStateResult {
    DistributionField field;
    Potential potential;
    Multipliers multipliers;
    double fixed_point_residual = 0.0;
    std::size_t iterations = 0;
    double discarded_tail_mass = 0.0;
};

struct FixedPointOptions {
    double damping = 0.5;
    double tol = 1e-11;
    std::size_t max_iter = 10000;
};

/// Lambda such that the one-constraint profile F^phi has grid mass m1.
/// Entropy profiles are exp(lambda - e); Power profiles are (j')^{-1}(lambda - e)_+,
/// with e = v^2/2 + phi.
double solve_lambda_one(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec, double m1);

/// (lambda, mu) with mu < 0 such that (j')^{-1}((e - lambda)/mu)_+ has grid mass m1
/// and grid casimir mj. Power family only.
Multipliers solve_multipliers_two(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                                  const ConstraintSet& constraints);

/// Dispatches on whether constraints carry mj.
Multipliers solve_multipliers(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                              const ConstraintSet& constraints);

DistributionField build_F_phi(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                              const Multipliers& multipliers);

struct ReducedValue {
    double value = 0.0;
    DistributionField profile;
    Multipliers multipliers;
};

/// Reduced functional of a potential: integral of (v^2/2 + phi) F^phi plus
/// half the squared norm of phi', plus the casimir of F^phi when only the
/// mass is constrained. phi must carry its derivative.
ReducedValue reduced_functional(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                                const ConstraintSet& constraints);

/// Damped fixed-point iteration phi <- (1 - d) phi + d phi_{F^phi}. The result
/// is phase-fixed so the potential minimum sits at theta = pi.
SteadyStateResult self_consistent_solve(const PhaseGrid& grid, const CasimirSpec& spec,
                                        const ConstraintSet& constraints, const Potential& seed,
                                        const FixedPointOptions& options = {});

/// Potential a cos(theta) with zero mean and matching derivative.
Potential cosine_potential(std::size_t n_theta, double amplitude);

/// Mass the continuum profile carries outside |v| <= v_max.
double tail_mass(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec, const Multipliers& m);

/// -||v^2 f|| / C_f with C_f = integral of f j'(f) minus the casimir of f.
double mu_from_identity(const DistributionField& f, const CasimirSpec& spec);

/// Right-hand side of Psi'' = G(Psi) for total mass m1.
double ode_source(const CasimirSpec& spec, double m1, double e);
/// A primitive of ode_source, so that Psi'^2/2 - primitive(Psi) is conserved.
double ode_source_primitive(const CasimirSpec& spec, double m1, double e);

struct OdeProfile {
    Potential psi;            // recentred to zero mean, sampled at theta nodes
    double psi_shift = 0.0;   // mean removed from the raw trajectory
    double defect = 0.0;      // |Psi(end) - Psi(start)| + |Psi'(end) - Psi'(start)|
    double energy_drift = 0.0;
};

/// RK4 integration of Psi'' = G(Psi) over one period from Psi = psi_min,
/// Psi' = 0 at the theta node nearest theta_anchor. Throws SolverAbort on blow-up.
OdeProfile ode_profile_solve(const CasimirSpec& spec, double m1, double psi_min, double theta_anchor,
                             std::size_t n_theta, std::size_t substeps = 16);

struct Renormalized {
    DistributionField field;
    double lambda = 1.0; // mass ratio m1 / ||g||
    double gamma = 1.0;  // amplitude factor
};

/// g -> gamma g(theta, (gamma / lambda) v), resampled linearly in v, then
/// scaled to mass m1 exactly. gamma = 1 when mj is absent.
Renormalized renormalize_to_constraints(const DistributionField& g, const CasimirSpec& spec,
                                        const ConstraintSet& constraints);

/// Linear resampling h(theta, v_j) = g(theta, kappa v_j), zero outside the box.
DistributionField dilate_velocity(const DistributionField& g, double kappa);

} // namespace hmfp
