#pragma once

#include "hmfp/grid.hpp"
#include "hmfp/steady_states.hpp"

#include <cmath>
#include <iosfwd>
#include <span>
#include <vector>

namespace hmfp {

enum class ProfileRule { step, linear };

/// Nonincreasing function sampled at increasing breakpoints. With the step
/// rule the value on [b_k, b_{k+1}) is values[k] (right-continuous); with the
/// linear rule values are interpolated. Outside the breakpoints the end
/// values are held.
class MonotoneProfile {
  public:
    MonotoneProfile() = default;
    MonotoneProfile(std::vector<double> breakpoints, std::vector<double> values, ProfileRule rule);

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }
    ProfileRule rule() const noexcept { return rule_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator()(double x) const;

  private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    ProfileRule rule_ = ProfileRule::step;
};

void write_profile_csv(std::ostream& os, const MonotoneProfile& p);
MonotoneProfile read_profile_csv(std::istream& is, ProfileRule rule = ProfileRule::step);

/// mu_f(s) = |{f > s}| at each level, by cell counting. Levels must be
/// nonnegative and increasing.
MonotoneProfile distribution_function(const DistributionField& f, std::span<const double> levels);

/// f^#(s) = sup{t : mu(t) > s}, reading mu as a right-continuous step
/// function of the level. Breakpoints are the distinct measures, starting at 0.
MonotoneProfile pseudo_inverse(const MonotoneProfile& mu);

/// Exact f^# of the cell-constant field: value u_k on [k A, (k+1) A) where
/// u_0 >= u_1 >= ... are the positive cell values and A the cell area; 0 beyond.
MonotoneProfile decreasing_profile(const DistributionField& f);

/// a_phi(e) = |{v^2/2 + phi(theta) < e}|, exact in v, node rule in theta.
double sublevel_measure_a(const Potential& phi, double e);

/// Bracket s^2/32pi^2 + min phi <= a^{-1}(s) <= s^2/32pi^2 + max phi.
std::pair<double, double> inverse_measure_bounds(const Potential& phi, double s);

/// Smallest e with a_phi(e) = s, for s > 0; min phi for s = 0.
double sublevel_measure_inverse(const Potential& phi, double s);

/// f^#(a_phi(v^2/2 + phi)) sampled at the cell centres.
DistributionField rearrange_with_energy(const DistributionField& f, const Potential& phi);

/// Moments of the rearranged profile on theta atoms with exact v integration.
struct RearrangedMoments {
    std::vector<double> rho;          // per theta node
    std::vector<double> level_energy; // a^{-1} at each step breakpoint of the profile
    double mass = 0.0;
    double kinetic = 0.0;
    double energy = 0.0; // integral of (v^2/2 + phi) f^{*phi}
    double outside_mass = 0.0; // part of the mass at |v| > v_max
};

/// profile must use the step rule and end with value 0.
RearrangedMoments rearranged_moments(const MonotoneProfile& profile, const Potential& phi,
                                     double v_max = HUGE_VAL);

/// Integral over s of a_phi^{-1}(s) f^#(s), by integrating a_phi^{-1} by parts per step.
double inverse_measure_integral(const MonotoneProfile& profile, const Potential& phi,
                                const std::vector<double>& level_energy);

/// beta_{f,g}(t) = |{f <= t < g}|.
double beta_overlap(const DistributionField& f, const DistributionField& g, double t);
/// Integral of beta_{f,g} over t >= 0.
double beta_integral(const DistributionField& f, const DistributionField& g);

/// B_phi(mu): integral of v^2/2 + phi over {a_phi(v^2/2 + phi) < mu}.
double convex_B(const Potential& phi, double mu);

/// sup_s | |{f > s}| - |{g > s}| | over every level.
double equimeasurability_defect(const DistributionField& f, const DistributionField& g);

struct EquimeasurableResult {
    SteadyStateResult state;
    std::vector<double> hamiltonian_history; // H of f0^{*phi_k}
    std::vector<double> reduced_history;     // J_{f*}(phi_k)
};

/// Damped iteration phi <- (1 - d) phi + d phi_{f0^{*phi}} starting from phi_{f0}.
/// The state field is f0^{*phi} sampled on the grid, its potential the
/// semi-discrete one. multipliers are unused and left at zero.
EquimeasurableResult equimeasurable_minimize(const DistributionField& f0, double damping, double tol,
                                             std::size_t max_iter = 10000);

} // namespace hmfp
