#pragma once

#include "hmfp/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hmfp {

/// Spatial density rho(theta_i) = integral of f over v, at theta nodes.
struct Density {
    double mass(double d_theta) const;
    std::vector<double> values;
};

/// Periodic interaction kernel, reduced to [-pi, pi] before evaluation.
double kernel_W(double theta);
/// Its derivative, -theta/2pi + sign(theta)/2 on the reduced argument (0 at the kink).
double kernel_W_prime(double theta);

/// Node tables of the band-limited kernel used by the discrete convolution.
/// w[l] and w_prime[l] are the kernel and its derivative at theta = l * d_theta,
/// truncated to the Fourier modes 1 <= m < n/2 that the grid resolves.
struct KernelTables {
    std::vector<double> w;
    std::vector<double> w_prime;
};

/// Cached per n_theta; thread safe.
const KernelTables& kernel_tables(std::size_t n_theta);

Density density(const DistributionField& f);

/// Zero-mean potential of a field, by periodic convolution of rho with the
/// kernel tables; the derivative comes from the derivative table.
Potential solve_potential(const DistributionField& f);
Potential solve_potential(std::span<const double> rho);

/// Second-order finite-difference solve of phi'' = rho - mean(rho), with a
/// centred-difference derivative. Used as an independent cross-check.
Potential solve_potential_fd(std::span<const double> rho);

/// max_i |(phi[i+1] - 2 phi[i] + phi[i-1]) / d_theta^2 - (rho[i] - mean(rho))|
double poisson_residual(const Potential& phi, std::span<const double> rho);

/// Half the squared L2 norm of phi', by the theta node rule.
double field_energy(const Potential& phi);

} // namespace hmfp
