#include "hmfp/rearrangement.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace hmfp {

namespace {

using std::numbers::pi;

double d_theta_of(const Potential& phi) { return two_pi / static_cast<double>(phi.values.size()); }

struct MeasureValue {
    double a = 0.0;
    double slope = 0.0;
};

MeasureValue measure_with_slope(const Potential& phi, double e) {
    MeasureValue m;
    for (double p : phi.values) {
        const double x = e - p;
        if (x <= 0.0) continue;
        const double w = std::sqrt(2.0 * x);
        m.a += 2.0 * w;
        m.slope += 2.0 / w;
    }
    const double h = d_theta_of(phi);
    m.a *= h;
    m.slope *= h;
    return m;
}

// Safeguarded Newton for a(e) = s inside [lo, hi].
double invert_measure(const Potential& phi, double s, double lo, double hi) {
    double x = hi;
    for (int it = 0; it < 200; ++it) {
        const auto m = measure_with_slope(phi, x);
        const double g = m.a - s;
        if (g == 0.0) return x;
        (g > 0.0 ? hi : lo) = x;
        double next = m.slope > 0.0 && std::isfinite(m.slope) ? x - g / m.slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || !(0.5 * (lo + hi) > lo && 0.5 * (lo + hi) < hi))
            return next;
        x = next;
    }
    return x;
}

std::vector<double> sorted_values(const DistributionField& f) {
    std::vector<double> v(f.values().begin(), f.values().end());
    std::sort(v.begin(), v.end());
    return v;
}

// Count of entries strictly greater than s in an ascending array.
std::size_t count_above(const std::vector<double>& asc, double s) {
    return static_cast<std::size_t>(asc.end() - std::upper_bound(asc.begin(), asc.end(), s));
}

} // namespace

MonotoneProfile::MonotoneProfile(std::vector<double> breakpoints, std::vector<double> values, ProfileRule rule)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), rule_(rule) {
    if (breakpoints_.size() != values_.size() || breakpoints_.empty())
        throw InvalidArgument("monotone profile needs equally many breakpoints and values, at least one");
    for (std::size_t k = 1; k < values_.size(); ++k) {
        if (!(breakpoints_[k] > breakpoints_[k - 1])) throw InvalidArgument("profile breakpoints must increase");
        if (values_[k] > values_[k - 1]) throw InvalidArgument("profile values must not increase");
    }
}

double MonotoneProfile::operator()(double x) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.begin()) return values_.front();
    const auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    if (rule_ == ProfileRule::step || k + 1 == values_.size()) return values_[k];
    const double t = (x - breakpoints_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
    return values_[k] + t * (values_[k + 1] - values_[k]);
}

void write_profile_csv(std::ostream& os, const MonotoneProfile& p) {
    os << "breakpoint,value\n";
    char buf[80];
    for (std::size_t k = 0; k < p.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.breakpoints()[k], p.values()[k]);
        os << buf;
    }
}

MonotoneProfile read_profile_csv(std::istream& is, ProfileRule rule) {
    std::string line;
    if (!std::getline(is, line) || line != "breakpoint,value") throw IoError("profile csv lacks its header");
    std::vector<double> b, v;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("profile row needs two columns");
        try {
            b.push_back(std::stod(line.substr(0, comma)));
            v.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError("bad number in profile row '" + line + "'");
        }
    }
    return MonotoneProfile(std::move(b), std::move(v), rule);
}

MonotoneProfile distribution_function(const DistributionField& f, std::span<const double> levels) {
    const auto asc = sorted_values(f);
    const double area = f.grid().cell_area();
    std::vector<double> b(levels.begin(), levels.end()), v(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] < 0.0) throw InvalidArgument("distribution levels must be nonnegative");
        v[k] = static_cast<double>(count_above(asc, levels[k])) * area;
    }
    return MonotoneProfile(std::move(b), std::move(v), ProfileRule::step);
}

MonotoneProfile pseudo_inverse(const MonotoneProfile& mu) {
    const auto t = mu.breakpoints();
    const auto m = mu.values();
    std::vector<double> measures(m.begin(), m.end());
    measures.push_back(0.0);
    std::sort(measures.begin(), measures.end());
    measures.erase(std::unique(measures.begin(), measures.end()), measures.end());

    std::vector<double> vals(measures.size());
    std::size_t c = m.size();
    for (std::size_t r = 0; r < measures.size(); ++r) {
        while (c > 0 && !(m[c - 1] > measures[r])) --c;
        // mu(t) > s exactly on the first c levels, so the supremum is the next level.
        vals[r] = c == 0 ? 0.0 : t[std::min(c, t.size() - 1)];
    }
    return MonotoneProfile(std::move(measures), std::move(vals), ProfileRule::step);
}

MonotoneProfile decreasing_profile(const DistributionField& f) {
    auto asc = sorted_values(f);
    const double area = f.grid().cell_area();
    std::vector<double> b, v;
    std::size_t taken = 0;
    for (auto it = asc.rbegin(); it != asc.rend() && *it > 0.0;) {
        const double val = *it;
        b.push_back(static_cast<double>(taken) * area);
        v.push_back(val);
        while (it != asc.rend() && *it == val) {
            ++it;
            ++taken;
        }
    }
    b.push_back(static_cast<double>(taken) * area);
    v.push_back(0.0);
    return MonotoneProfile(std::move(b), std::move(v), ProfileRule::step);
}

double sublevel_measure_a(const Potential& phi, double e) { return measure_with_slope(phi, e).a; }

std::pair<double, double> inverse_measure_bounds(const Potential& phi, double s) {
    const double base = s * s / (32.0 * pi * pi);
    return {base + phi.min(), base + phi.max()};
}

double sublevel_measure_inverse(const Potential& phi, double s) {
    if (s < 0.0) throw InvalidArgument("measure must be nonnegative");
    if (s == 0.0) return phi.min();
    auto [lo, hi] = inverse_measure_bounds(phi, s);
    return invert_measure(phi, s, lo, hi);
}

DistributionField rearrange_with_energy(const DistributionField& f, const Potential& phi) {
    const auto& g = f.grid();
    if (phi.values.size() != g.n_theta()) throw GridMismatch();
    const MonotoneProfile prof = decreasing_profile(f);
    DistributionField out(g);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(g.n_theta()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        auto row = out.row(i);
        for (std::size_t j = 0; j < g.n_v(); ++j) {
            const double v = g.v(j);
            row[j] = prof(sublevel_measure_a(phi, 0.5 * v * v + phi.values[i]));
        }
    }
    return out;
}

RearrangedMoments rearranged_moments(const MonotoneProfile& profile, const Potential& phi, double v_max) {
    if (profile.rule() != ProfileRule::step) throw InvalidArgument("rearranged moments need a step profile");
    if (profile.values().back() != 0.0) throw InvalidArgument("profile must end at zero");
    const auto b = profile.breakpoints();
    const auto u = profile.values();
    const std::size_t K = profile.size();
    const std::size_t n = phi.values.size();
    const double h = d_theta_of(phi);

    RearrangedMoments out;
    out.level_energy.resize(K);
    double prev = phi.min();
    for (std::size_t k = 0; k < K; ++k) {
        if (b[k] <= 0.0) {
            out.level_energy[k] = phi.min();
            continue;
        }
        auto [lo, hi] = inverse_measure_bounds(phi, b[k]);
        out.level_energy[k] = invert_measure(phi, b[k], std::max(lo, prev), hi);
        prev = out.level_energy[k];
    }

    out.rho.assign(n, 0.0);
    std::vector<double> kin(n, 0.0), outside(n, 0.0);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const double p = phi.values[i];
        double w_prev = std::sqrt(2.0 * std::max(out.level_energy[0] - p, 0.0));
        double r = 0.0, q = 0.0, o = 0.0;
        for (std::size_t k = 0; k + 1 < K; ++k) {
            const double w = std::sqrt(2.0 * std::max(out.level_energy[k + 1] - p, 0.0));
            r += u[k] * 2.0 * (w - w_prev);
            q += u[k] * (w * w * w - w_prev * w_prev * w_prev) / 3.0;
            if (w > v_max) o += u[k] * 2.0 * (w - std::max(w_prev, v_max));
            w_prev = w;
        }
        out.rho[i] = r;
        kin[i] = q;
        outside[i] = o;
    }
    double pot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.mass += out.rho[i] * h;
        out.kinetic += kin[i] * h;
        pot += phi.values[i] * out.rho[i] * h;
        out.outside_mass += outside[i] * h;
    }
    out.energy = out.kinetic + pot;
    return out;
}

double inverse_measure_integral(const MonotoneProfile& profile, const Potential& phi,
                                const std::vector<double>& level_energy) {
    const auto b = profile.breakpoints();
    const auto u = profile.values();
    const double h = d_theta_of(phi);
    auto primitive = [&](double e) {
        double s = 0.0;
        for (double p : phi.values) {
            const double x = std::max(e - p, 0.0);
            s += x * std::sqrt(x);
        }
        return 4.0 * std::numbers::sqrt2 / 3.0 * s * h;
    };
    double total = 0.0;
    double prim_prev = primitive(level_energy[0]);
    for (std::size_t k = 0; k + 1 < profile.size(); ++k) {
        const double prim = primitive(level_energy[k + 1]);
        total += u[k] * (level_energy[k + 1] * b[k + 1] - level_energy[k] * b[k] - (prim - prim_prev));
        prim_prev = prim;
    }
    return total;
}

double beta_overlap(const DistributionField& f, const DistributionField& g, double t) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    auto a = f.values();
    auto b = g.values();
    std::size_t count = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] <= t && t < b[k]) ++count;
    return static_cast<double>(count) * f.grid().cell_area();
}

double beta_integral(const DistributionField& f, const DistributionField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    auto a = f.values();
    auto b = g.values();
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::max(b[k] - a[k], 0.0);
    return s * f.grid().cell_area();
}

double convex_B(const Potential& phi, double mu) {
    if (mu < 0.0) throw InvalidArgument("B_phi needs mu >= 0");
    if (mu == 0.0) return 0.0;
    const double e = sublevel_measure_inverse(phi, mu);
    double s = 0.0;
    for (double p : phi.values) {
        const double w = std::sqrt(2.0 * std::max(e - p, 0.0));
        s += w * w * w / 3.0 + 2.0 * p * w;
    }
    return s * d_theta_of(phi);
}

double equimeasurability_defect(const DistributionField& f, const DistributionField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    const auto a = sorted_values(f);
    const auto b = sorted_values(g);
    auto gap = [&](double s) {
        const auto ca = static_cast<long long>(count_above(a, s));
        const auto cb = static_cast<long long>(count_above(b, s));
        return static_cast<double>(std::llabs(ca - cb));
    };
    double worst = gap(0.0);
    for (double s : a) worst = std::max(worst, gap(s));
    for (double s : b) worst = std::max(worst, gap(s));
    return worst * f.grid().cell_area();
}

EquimeasurableResult equimeasurable_minimize(const DistributionField& f0, double damping, double tol,
                                             std::size_t max_iter) {
    if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const auto& grid = f0.grid();
    const MonotoneProfile prof = decreasing_profile(f0);
    Potential phi = solve_potential(f0);

    EquimeasurableResult out;
    double residual = HUGE_VAL;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const RearrangedMoments mom = rearranged_moments(prof, phi, grid.v_max());
        Potential next = solve_potential(mom.rho);
        out.hamiltonian_history.push_back(mom.kinetic - field_energy(next));
        out.reduced_history.push_back(mom.energy + field_energy(phi));
        residual = 0.0;
        for (std::size_t i = 0; i < phi.values.size(); ++i)
            residual = std::max(residual, std::abs(next.values[i] - phi.values[i]));
        if (!std::isfinite(residual)) throw NonConvergence("rearrangement iteration diverged", residual);
        if (residual <= tol) {
            const auto lo = std::min_element(next.values.begin(), next.values.end()) - next.values.begin();
            const long long shift = lo - static_cast<long long>(grid.n_theta() / 2);
            out.state.field = rearrange_with_energy(f0, phi).shifted(shift);
            out.state.potential = next.shifted(shift);
            out.state.fixed_point_residual = residual;
            out.state.iterations = it;
            out.state.discarded_tail_mass = mom.outside_mass;
            return out;
        }
        for (std::size_t i = 0; i < phi.values.size(); ++i) {
            phi.values[i] += damping * (next.values[i] - phi.values[i]);
            phi.derivative[i] += damping * (next.derivative[i] - phi.derivative[i]);
        }
    }
    throw NonConvergence("rearrangement iteration hit " + std::to_string(max_iter) + " iterations", residual);
}

} // namespace hmfp
