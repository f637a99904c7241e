#include "hmfp/steady_states.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/functionals.hpp"
#include "hmfp/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hmfp {

namespace {

constexpr int max_bisection = 200;
constexpr double constraint_tol = 1e-10;

double min_kinetic(const PhaseGrid& g) {
    double best = g.v(0) * g.v(0);
    for (std::size_t j = 0; j < g.n_v(); ++j) best = std::min(best, g.v(j) * g.v(j));
    return 0.5 * best;
}

struct PowerSums {
    double s_alpha = 0.0; // A * sum (lambda - e)_+^alpha
    double s_next = 0.0;  // A * sum (lambda - e)_+^(alpha + 1)
};

PowerSums power_sums(const PhaseGrid& g, const Potential& phi, double lambda, double alpha) {
    const std::size_t nt = g.n_theta(), nv = g.n_v();
    std::vector<double> ra(nt), rb(nt);
    const bool unit = alpha == 1.0;
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(nt); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double level = lambda - phi.values[i];
        double a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = g.v(j);
            const double x = level - 0.5 * v * v;
            if (x <= 0.0) continue;
            const double xa = unit ? x : std::pow(x, alpha);
            a += xa;
            b += xa * x;
        }
        ra[i] = a;
        rb[i] = b;
    }
    PowerSums s;
    for (std::size_t i = 0; i < nt; ++i) {
        s.s_alpha += ra[i];
        s.s_next += rb[i];
    }
    s.s_alpha *= g.cell_area();
    s.s_next *= g.cell_area();
    return s;
}

void check_potential(const PhaseGrid& g, const Potential& phi) {
    if (phi.values.size() != g.n_theta())
        throw InvalidArgument("potential has " + std::to_string(phi.values.size()) + " nodes, grid has " +
                              std::to_string(g.n_theta()));
}

// Bisection for an increasing predicate-defined root: below(x) is true left of it.
template <class Below>
std::pair<double, double> bisect(double lo, double hi, Below below) {
    for (int k = 0; k < max_bisection; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        (below(mid) ? lo : hi) = mid;
    }
    return {lo, hi};
}

double alpha_of(const CasimirSpec& spec) { return 1.0 / (spec.exponent() - 1.0); }

} // namespace

double solve_lambda_one(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec, double m1) {
    check_potential(grid, phi);
    if (!(m1 > 0.0)) throw InvalidArgument("mass constraint must be positive");
    const double pmin = phi.min();

    if (spec.family() == CasimirFamily::entropy) {
        double zv = 0.0, zt = 0.0;
        for (std::size_t j = 0; j < grid.n_v(); ++j) zv += std::exp(-0.5 * grid.v(j) * grid.v(j));
        for (double p : phi.values) zt += std::exp(pmin - p);
        return pmin + std::log(m1 / (zv * zt * grid.cell_area()));
    }

    const double alpha = alpha_of(spec);
    const double scale = std::pow(spec.exponent(), -alpha);
    auto mass_at = [&](double l) { return scale * power_sums(grid, phi, l, alpha).s_alpha; };
    const double e_min = pmin + min_kinetic(grid);
    double lo = e_min, hi = e_min + 1.0;
    int grow = 0;
    while (mass_at(hi) < m1) {
        lo = hi;
        hi = e_min + 2.0 * (hi - e_min);
        if (++grow > max_bisection) throw NonConvergence("mass bracket did not close", m1);
    }
    auto [a, b] = bisect(lo, hi, [&](double l) { return mass_at(l) < m1; });
    const double ea = std::abs(mass_at(a) - m1), eb = std::abs(mass_at(b) - m1);
    const double lambda = ea < eb ? a : b;
    const double err = std::min(ea, eb) / m1;
    if (err > constraint_tol)
        throw NonConvergence("lambda solve missed mass by " + std::to_string(err) + " relative", err);
    return lambda;
}

Multipliers solve_multipliers_two(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                                  const ConstraintSet& c) {
    check_potential(grid, phi);
    if (!spec.h3()) throw InvalidArgument("two-constraint problem needs a casimir satisfying h3");
    if (!c.mj || !(*c.mj > 0.0) || !(c.m1 > 0.0)) throw InvalidArgument("two-constraint problem needs m1, mj > 0");

    // F = (p|mu|)^-alpha (lambda - e)_+^alpha. The mass fixes |mu| given lambda, which
    // leaves mj / m1^p = S_{alpha+1} / S_alpha^p, decreasing in lambda.
    const double p = spec.exponent();
    const double alpha = alpha_of(spec);
    const double target = *c.mj / std::pow(c.m1, p);
    auto ratio = [&](double l) {
        const auto s = power_sums(grid, phi, l, alpha);
        return s.s_alpha > 0.0 ? s.s_next / std::pow(s.s_alpha, p) : HUGE_VAL;
    };
    const double e_min = phi.min() + min_kinetic(grid);
    double lo = e_min, hi = e_min + 1.0;
    int grow = 0;
    while (ratio(hi) > target) {
        lo = hi;
        hi = e_min + 2.0 * (hi - e_min);
        if (++grow > max_bisection)
            throw NonConvergence("casimir constraint unreachable: mj / m1^p below the uniform-profile limit",
                                 target);
    }
    auto [a, b] = bisect(lo, hi, [&](double l) { return ratio(l) > target; });
    const double ea = std::abs(ratio(a) - target), eb = std::abs(ratio(b) - target);
    const double lambda = ea < eb ? a : b;
    const double err = std::min(ea, eb) / target;
    if (!(err <= constraint_tol))
        throw NonConvergence("multiplier solve missed casimir by " + std::to_string(err) + " relative", err);
    const double s_alpha = power_sums(grid, phi, lambda, alpha).s_alpha;
    return {lambda, -std::pow(s_alpha / c.m1, 1.0 / alpha) / p};
}

Multipliers solve_multipliers(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                              const ConstraintSet& c) {
    if (c.mj) return solve_multipliers_two(grid, phi, spec, c);
    return {solve_lambda_one(grid, phi, spec, c.m1), std::nullopt};
}

DistributionField build_F_phi(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                              const Multipliers& m) {
    check_potential(grid, phi);
    if (m.mu && !(*m.mu < 0.0)) throw InvalidArgument("mu must be negative");
    if (m.mu && spec.family() == CasimirFamily::entropy) throw InvalidArgument("entropy states carry no mu");
    DistributionField f(grid);
    const std::size_t nt = grid.n_theta(), nv = grid.n_v();
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(nt); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        auto row = f.row(i);
        for (std::size_t j = 0; j < nv; ++j) {
            const double v = grid.v(j);
            const double e = 0.5 * v * v + phi.values[i];
            if (spec.family() == CasimirFamily::entropy)
                row[j] = std::exp(m.lambda - e);
            else if (m.mu)
                row[j] = spec.inverse_derivative((e - m.lambda) / *m.mu);
            else
                row[j] = spec.inverse_derivative(m.lambda - e);
        }
    }
    return f;
}

ReducedValue reduced_functional(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec,
                                const ConstraintSet& c) {
    if (phi.derivative.size() != phi.values.size()) throw InvalidArgument("reduced functional needs phi'");
    ReducedValue r;
    r.multipliers = solve_multipliers(grid, phi, spec, c);
    r.profile = build_F_phi(grid, phi, spec, r.multipliers);
    r.value = energy_moment(r.profile, phi) + field_energy(phi);
    if (!c.mj) r.value += casimir_integral(r.profile, spec);
    return r;
}

Potential cosine_potential(std::size_t n_theta, double amplitude) {
    Potential phi{std::vector<double>(n_theta), std::vector<double>(n_theta)};
    const double h = two_pi / static_cast<double>(n_theta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        phi.values[i] = amplitude * std::cos(h * static_cast<double>(i));
        phi.derivative[i] = -amplitude * std::sin(h * static_cast<double>(i));
    }
    return phi;
}

SteadyStateResult self_consistent_solve(const PhaseGrid& grid, const CasimirSpec& spec, const ConstraintSet& c,
                                        const Potential& seed, const FixedPointOptions& opt) {
    check_potential(grid, seed);
    if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (!(opt.tol > 0.0)) throw InvalidArgument("fixed-point tolerance must be positive");

    Potential phi = seed;
    phi.derivative.resize(phi.values.size(), 0.0);
    double residual = HUGE_VAL;
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        const Multipliers m = solve_multipliers(grid, phi, spec, c);
        DistributionField f = build_F_phi(grid, phi, spec, m);
        Potential next = solve_potential(f);
        residual = 0.0;
        for (std::size_t i = 0; i < phi.values.size(); ++i)
            residual = std::max(residual, std::abs(next.values[i] - phi.values[i]));
        if (!std::isfinite(residual)) throw NonConvergence("fixed-point iteration produced a non-finite potential", residual);
        if (residual <= opt.tol) {
            const auto lo = std::min_element(next.values.begin(), next.values.end()) - next.values.begin();
            const long long shift = lo - static_cast<long long>(grid.n_theta() / 2);
            SteadyStateResult out;
            out.field = f.shifted(shift);
            out.potential = next.shifted(shift);
            out.multipliers = m;
            out.fixed_point_residual = residual;
            out.iterations = it;
            out.discarded_tail_mass = tail_mass(grid, phi, spec, m);
            return out;
        }
        for (std::size_t i = 0; i < phi.values.size(); ++i) {
            phi.values[i] += opt.damping * (next.values[i] - phi.values[i]);
            phi.derivative[i] += opt.damping * (next.derivative[i] - phi.derivative[i]);
        }
    }
    throw NonConvergence("fixed-point iteration hit " + std::to_string(opt.max_iter) +
                             " iterations (last residual " + std::to_string(residual) + "); try smaller damping",
                         residual);
}

double tail_mass(const PhaseGrid& grid, const Potential& phi, const CasimirSpec& spec, const Multipliers& m) {
    const double vm = grid.v_max();
    double total = 0.0;
    if (spec.family() == CasimirFamily::entropy) {
        const double tail = std::sqrt(two_pi) * std::erfc(vm / std::numbers::sqrt2);
        for (double p : phi.values) total += std::exp(m.lambda - p) * tail;
        return total * grid.d_theta();
    }
    const double alpha = alpha_of(spec);
    const double amp = m.mu ? std::pow(spec.exponent() * -*m.mu, -alpha) : std::pow(spec.exponent(), -alpha);
    constexpr int n = 2000;
    for (double p : phi.values) {
        const double level = m.lambda - p;
        const double w = std::sqrt(2.0 * std::max(level, 0.0));
        if (w <= vm) continue;
        const double h = (w - vm) / n;
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double v = vm + (k + 0.5) * h;
            s += std::pow(std::max(level - 0.5 * v * v, 0.0), alpha);
        }
        total += 2.0 * amp * s * h;
    }
    return total * grid.d_theta();
}

double mu_from_identity(const DistributionField& f, const CasimirSpec& spec) {
    const auto& g = f.grid();
    double v2 = 0.0, fjp = 0.0, jf = 0.0;
    for (std::size_t i = 0; i < g.n_theta(); ++i)
        for (std::size_t j = 0; j < g.n_v(); ++j) {
            const double x = f(i, j);
            if (x <= 0.0) continue;
            v2 += g.v(j) * g.v(j) * x;
            fjp += x * spec.j_prime(x);
            jf += spec.j(x);
        }
    return -v2 / (fjp - jf);
}

double ode_source(const CasimirSpec& spec, double m1, double e) {
    const double background = m1 / two_pi;
    if (spec.family() == CasimirFamily::entropy) return std::sqrt(two_pi) * std::exp(-e) - background;
    if (e >= 0.0) return -background;
    const double a = alpha_of(spec);
    const double beta = std::exp(std::lgamma(0.5) + std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
    return std::pow(spec.exponent(), -a) * std::numbers::sqrt2 * beta * std::pow(-e, a + 0.5) - background;
}

double ode_source_primitive(const CasimirSpec& spec, double m1, double e) {
    const double background = m1 / two_pi;
    if (spec.family() == CasimirFamily::entropy) return -std::sqrt(two_pi) * std::exp(-e) - background * e;
    const double a = alpha_of(spec);
    const double beta = std::exp(std::lgamma(0.5) + std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
    const double c = std::pow(spec.exponent(), -a) * std::numbers::sqrt2 * beta;
    const double bulk = e < 0.0 ? -c * std::pow(-e, a + 1.5) / (a + 1.5) : 0.0;
    return bulk - background * e;
}

OdeProfile ode_profile_solve(const CasimirSpec& spec, double m1, double psi_min, double theta_anchor,
                             std::size_t n_theta, std::size_t substeps) {
    if (n_theta < 8 || substeps == 0) throw InvalidArgument("ode profile needs n_theta >= 8 and substeps >= 1");
    const double d_theta = two_pi / static_cast<double>(n_theta);
    const auto anchor = static_cast<std::size_t>(
        ((static_cast<long long>(std::llround(theta_anchor / d_theta)) % static_cast<long long>(n_theta)) +
         static_cast<long long>(n_theta)) %
        static_cast<long long>(n_theta));
    const double h = d_theta / static_cast<double>(substeps);
    auto rhs = [&](double psi) { return ode_source(spec, m1, psi); };
    auto energy = [&](double psi, double dpsi) { return 0.5 * dpsi * dpsi - ode_source_primitive(spec, m1, psi); };

    std::vector<double> raw(n_theta), draw(n_theta);
    double y = psi_min, dy = 0.0;
    const double e0 = energy(y, dy);
    OdeProfile out;
    std::size_t step = 0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        raw[i] = y;
        draw[i] = dy;
        for (std::size_t s = 0; s < substeps; ++s, ++step) {
            const double k1y = dy, k1v = rhs(y);
            const double k2y = dy + 0.5 * h * k1v, k2v = rhs(y + 0.5 * h * k1y);
            const double k3y = dy + 0.5 * h * k2v, k3v = rhs(y + 0.5 * h * k2y);
            const double k4y = dy + h * k3v, k4v = rhs(y + h * k3y);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if (!std::isfinite(y) || !std::isfinite(dy) || std::abs(y) > 1e150)
                throw SolverAbort("ode profile blew up", step);
            out.energy_drift = std::max(out.energy_drift, std::abs(energy(y, dy) - e0));
        }
    }
    out.defect = std::abs(y - raw[0]) + std::abs(dy - draw[0]);
    double mean = 0.0;
    for (double r : raw) mean += r;
    mean /= static_cast<double>(n_theta);
    out.psi_shift = mean;
    out.psi.values.resize(n_theta);
    out.psi.derivative.resize(n_theta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const std::size_t node = (anchor + i) % n_theta;
        out.psi.values[node] = raw[i] - mean;
        out.psi.derivative[node] = draw[i];
    }
    return out;
}

DistributionField dilate_velocity(const DistributionField& g, double kappa) {
    if (kappa == 1.0) return g;
    const auto& grid = g.grid();
    const auto nv = static_cast<long long>(grid.n_v());
    DistributionField out(grid);
    for (std::size_t i = 0; i < grid.n_theta(); ++i) {
        auto src = g.row(i);
        auto dst = out.row(i);
        for (long long j = 0; j < nv; ++j) {
            const double y = (kappa * grid.v(static_cast<std::size_t>(j)) + grid.v_max()) / grid.d_v() - 0.5;
            const double fl = std::floor(y);
            const double t = y - fl;
            const auto k = static_cast<long long>(fl);
            double acc = 0.0;
            if (k >= 0 && k < nv) acc += (1.0 - t) * src[static_cast<std::size_t>(k)];
            if (k + 1 >= 0 && k + 1 < nv) acc += t * src[static_cast<std::size_t>(k + 1)];
            dst[static_cast<std::size_t>(j)] = acc;
        }
    }
    return out;
}

Renormalized renormalize_to_constraints(const DistributionField& g, const CasimirSpec& spec,
                                        const ConstraintSet& c) {
    const double m = mass(g);
    if (!(m > 0.0)) throw InvalidArgument("cannot renormalize a field of zero mass");
    if (!(c.m1 > 0.0)) throw InvalidArgument("mass constraint must be positive");
    Renormalized r;
    r.lambda = c.m1 / m;
    if (c.mj) {
        if (!spec.h3()) throw InvalidArgument("casimir renormalization needs a casimir satisfying h3");
        const double target = *c.mj * m / c.m1;
        auto h = [&](double gamma) {
            DistributionField s = g;
            s *= gamma;
            return casimir_integral(s, spec) / gamma;
        };
        const double base = h(1.0);
        if (!(base > 0.0)) throw InvalidArgument("field has vanishing casimir");
        const double p = spec.exponent();
        const double bound = std::pow(target / base, 1.0 / (p - 1.0));
        double lo = 0.5 * bound, hi = 2.0 * bound;
        int grow = 0;
        while (h(lo) > target || h(hi) < target) {
            if (++grow > 64) throw NonConvergence("gamma bracket failed", target);
            lo *= 0.5;
            hi *= 2.0;
        }
        auto [a, b] = bisect(lo, hi, [&](double x) { return h(x) < target; });
        r.gamma = std::abs(h(a) - target) < std::abs(h(b) - target) ? a : b;
    }
    r.field = dilate_velocity(g, r.gamma / r.lambda);
    r.field *= r.gamma;
    const double m_out = mass(r.field);
    if (!(m_out > 0.0)) throw InvalidArgument("renormalized field left the velocity box");
    r.field *= c.m1 / m_out;
    return r;
}

} // namespace hmfp
