#pragma once

#include "hmfp/casimir.hpp"
#include "hmfp/grid.hpp"

#include <iosfwd>
#include <string>

namespace hmfp {

struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double kinetic = 0.0;
    double potential_energy = 0.0; // half the squared L2 norm of phi'
    double hamiltonian = 0.0;      // kinetic - potential_energy
    double casimir = 0.0;
    double l_infinity = 0.0;
};

const std::string& diagnostics_csv_header();
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);
DiagnosticsRecord parse_csv_row(const std::string& line);

double mass(const DistributionField& f);
double momentum(const DistributionField& f);
double kinetic_energy(const DistributionField& f);
/// Integral of (v^2/2 + phi) f, the microscopic-energy moment.
double energy_moment(const DistributionField& f, const Potential& phi);

double hamiltonian(const DistributionField& f);
double casimir_integral(const DistributionField& f, const CasimirSpec& spec);
double free_energy_J(const DistributionField& f, const CasimirSpec& spec);

DiagnosticsRecord diagnostics(const DistributionField& f, const CasimirSpec& spec, double time);

struct OrbitalDistance {
    double distance = 0.0;
    double shift = 0.0; // in [0, 2pi)
    std::size_t shift_cells = 0;
};

/// Minimum over cyclic theta shifts s of the weighted L1 distance between
/// f(. + s, .) and g. Ties go to the smallest shift.
OrbitalDistance orbital_distance(const DistributionField& f, const DistributionField& g);

/// Integral of f ln(f / f0). Throws InvalidArgument where f > 0 but f0 = 0.
double relative_entropy(const DistributionField& f, const DistributionField& f0);

struct KullbackGap {
    double lhs = 0.0; // squared L1 distance
    double rhs = 0.0; // 2 M times the relative entropy
};

/// Throws InvalidArgument on support violation or masses differing by more than 1e-8 relative.
KullbackGap csiszar_kullback_gap(const DistributionField& f, const DistributionField& f0);

} // namespace hmfp
