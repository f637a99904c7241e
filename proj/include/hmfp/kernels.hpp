#pragma once

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. Both reduce per theta row first and then
// combine the row partials in index order, so their results agree bit for bit.

#include <cstddef>
#include <span>

namespace hmfp::kernels {

enum class Interp { linear, cubic };

struct TransportLoss {
    double boundary = 0.0; // raw sum of samples pushed past |v| = v_max
    double clipped = 0.0;  // raw sum added by clipping negative cubic overshoot
};

#define HMFP_KERNEL_SET                                                                              \
    /* out[i] = sum_j values[i * n_v + j] */                                                       \
    void row_sums(std::span<const double> values, std::size_t n_v, std::span<double> out);         \
    /* sum_i sum_j weight[j] * |f(i + shift, j) - g(i, j)|, shift cyclic in i */                   \
    double weighted_abs_diff(std::span<const double> f, std::span<const double> g,                 \
                             std::span<const double> weight, std::size_t shift);                   \
    /* out[l] = sum_k table[(l - k) mod n] * rho[k] */                                             \
    void circular_convolve(std::span<const double> table, std::span<const double> rho,             \
                           std::span<double> out);                                                 \
    /* out(i, j) = in(theta_i - v_j * dt, v_j), periodic in theta */                              \
    TransportLoss advect_theta(std::span<const double> in, std::span<double> out, std::size_t n_theta, \
                               std::span<const double> v, double dt, double d_theta, Interp interp); \
    /* out(i, j) = in(theta_i, v_j + force[i] * dt), zero beyond the velocity box */               \
    TransportLoss advect_v(std::span<const double> in, std::span<double> out, std::size_t n_v,     \
                           std::span<const double> force, double dt, double d_v, Interp interp);

namespace serial {
HMFP_KERNEL_SET
}

namespace omp {
HMFP_KERNEL_SET
}

#undef HMFP_KERNEL_SET

/// Worker count used by the omp kernels; 1 when OpenMP is unavailable.
int max_threads();
void set_threads(int n);

} // namespace hmfp::kernels
