#include "hmfp/functionals.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/interaction.hpp"
#include "hmfp/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace hmfp {

namespace {

// Midpoint quadrature of w(v_j) * g(f_ij), reduced per theta row.
template <class G>
double moment(const DistributionField& f, const std::vector<double>& w, G g) {
    const auto& grid = f.grid();
    const std::size_t nt = grid.n_theta(), nv = grid.n_v();
    std::vector<double> rows(nt);
    auto vals = f.values();
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(nt); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double s = 0.0;
        for (std::size_t j = 0; j < nv; ++j) s += w[j] * g(vals[i * nv + j]);
        rows[i] = s;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return total * grid.cell_area();
}

std::vector<double> v_power(const PhaseGrid& g, int k, double scale) {
    std::vector<double> w(g.n_v());
    for (std::size_t j = 0; j < g.n_v(); ++j) w[j] = scale * std::pow(g.v(j), k);
    return w;
}

auto identity = [](double x) { return x; };

} // namespace

const std::string& diagnostics_csv_header() {
    static const std::string h = "time,mass,momentum,kinetic,potential_energy,hamiltonian,casimir,l_infinity";
    return h;
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.time, r.mass, r.momentum,
                  r.kinetic, r.potential_energy, r.hamiltonian, r.casimir, r.l_infinity);
    os << buf << '\n';
}

DiagnosticsRecord parse_csv_row(const std::string& line) {
    DiagnosticsRecord r;
    double* fields[] = {&r.time,        &r.mass,    &r.momentum, &r.kinetic, &r.potential_energy,
                        &r.hamiltonian, &r.casimir, &r.l_infinity};
    std::istringstream is(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(is, cell, ',')) {
        if (k >= 8) throw IoError("too many columns in diagnostics row");
        try {
            *fields[k++] = std::stod(cell);
        } catch (const std::exception&) {
            throw IoError("bad number '" + cell + "' in diagnostics row");
        }
    }
    if (k != 8) throw IoError("diagnostics row needs 8 columns");
    return r;
}

double mass(const DistributionField& f) { return integrate(f); }

double momentum(const DistributionField& f) { return moment(f, v_power(f.grid(), 1, 1.0), identity); }

double kinetic_energy(const DistributionField& f) { return moment(f, v_power(f.grid(), 2, 0.5), identity); }

double energy_moment(const DistributionField& f, const Potential& phi) {
    const auto& g = f.grid();
    std::vector<double> rows(g.n_theta());
    kernels::omp::row_sums(f.values(), g.n_v(), rows);
    double pot = 0.0;
    for (std::size_t i = 0; i < g.n_theta(); ++i) pot += phi.values[i] * rows[i];
    return kinetic_energy(f) + pot * g.cell_area();
}

double hamiltonian(const DistributionField& f) { return kinetic_energy(f) - field_energy(solve_potential(f)); }

double casimir_integral(const DistributionField& f, const CasimirSpec& spec) {
    return moment(f, std::vector<double>(f.grid().n_v(), 1.0), [&](double x) { return spec.j(x); });
}

double free_energy_J(const DistributionField& f, const CasimirSpec& spec) {
    return hamiltonian(f) + casimir_integral(f, spec);
}

DiagnosticsRecord diagnostics(const DistributionField& f, const CasimirSpec& spec, double time) {
    DiagnosticsRecord r;
    r.time = time;
    r.mass = mass(f);
    r.momentum = momentum(f);
    r.kinetic = kinetic_energy(f);
    r.potential_energy = field_energy(solve_potential(f));
    r.hamiltonian = r.kinetic - r.potential_energy;
    r.casimir = casimir_integral(f, spec);
    r.l_infinity = f.max_value();
    return r;
}

OrbitalDistance orbital_distance(const DistributionField& f, const DistributionField& g) {
    if (!(f.grid() == g.grid())) throw GridMismatch();
    const auto& grid = f.grid();
    std::vector<double> w(grid.n_v());
    for (std::size_t j = 0; j < grid.n_v(); ++j) w[j] = 1.0 + grid.v(j) * grid.v(j);
    std::vector<double> d(grid.n_theta());
#pragma omp parallel for schedule(static)
    for (long long mm = 0; mm < static_cast<long long>(grid.n_theta()); ++mm) {
        const auto m = static_cast<std::size_t>(mm);
        d[m] = kernels::serial::weighted_abs_diff(f.values(), g.values(), w, m);
    }
    OrbitalDistance best{std::numeric_limits<double>::infinity(), 0.0, 0};
    for (std::size_t m = 0; m < d.size(); ++m)
        if (d[m] < best.distance) best = {d[m], grid.theta(m), m};
    best.distance *= grid.cell_area();
    return best;
}

double relative_entropy(const DistributionField& f, const DistributionField& f0) {
    if (!(f.grid() == f0.grid())) throw GridMismatch();
    auto a = f.values();
    auto b = f0.values();
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0) continue;
        if (b[k] == 0.0) throw InvalidArgument("relative entropy: f0 vanishes where f is positive");
        s += a[k] * std::log(a[k] / b[k]);
    }
    return s * f.grid().cell_area();
}

KullbackGap csiszar_kullback_gap(const DistributionField& f, const DistributionField& f0) {
    const double m = mass(f), m0 = mass(f0);
    if (std::abs(m - m0) > 1e-8 * std::max(m, m0)) throw InvalidArgument("csiszar-kullback needs matching masses");
    const double d = l1_distance(f, f0);
    return {d * d, 2.0 * m * relative_entropy(f, f0)};
}

} // namespace hmfp
