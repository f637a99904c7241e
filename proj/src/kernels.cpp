#include "hmfp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hmfp::kernels {

namespace {

struct Stencil {
    long long base; // index of the first node used
    double w[4];
    int width;
};

// Departure point at node position (origin + s) for s real.
Stencil stencil_at(double s, Interp interp) {
    const double fl = std::floor(s);
    const double t = s - fl;
    const auto k = static_cast<long long>(fl);
    if (interp == Interp::linear) return {k, {1.0 - t, t, 0.0, 0.0}, 2};
    return {k - 1,
            {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
             -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0},
            4};
}

inline long long wrap(long long i, long long n) {
    long long r = i % n;
    return r < 0 ? r + n : r;
}

std::vector<Stencil> theta_stencils(std::span<const double> v, double dt, double d_theta, Interp interp) {
    std::vector<Stencil> st(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) st[j] = stencil_at(-v[j] * dt / d_theta, interp);
    return st;
}

inline double theta_row(std::span<const double> in, std::span<double> out, std::size_t i, std::size_t n_theta,
                        std::size_t n_v, const std::vector<Stencil>& st) {
    double clipped = 0.0;
    const auto n = static_cast<long long>(n_theta);
    for (std::size_t j = 0; j < n_v; ++j) {
        const Stencil& s = st[j];
        double acc = 0.0;
        for (int q = 0; q < s.width; ++q) {
            const auto src = static_cast<std::size_t>(wrap(static_cast<long long>(i) + s.base + q, n));
            acc += s.w[q] * in[src * n_v + j];
        }
        if (acc < 0.0) {
            clipped -= acc;
            acc = 0.0;
        }
        out[i * n_v + j] = acc;
    }
    return clipped;
}

// Raw sum pushed out of the box and raw sum added by clipping.
inline TransportLoss v_row(std::span<const double> in, std::span<double> out, std::size_t i, std::size_t n_v,
                           double shift, Interp interp) {
    const auto nv = static_cast<long long>(n_v);
    const double* src = in.data() + i * n_v;
    double* dst = out.data() + i * n_v;
    double before = 0.0, after = 0.0, clipped = 0.0;
    for (std::size_t j = 0; j < n_v; ++j) before += src[j];
    if (!std::isfinite(shift)) {
        std::fill(dst, dst + n_v, std::nan(""));
        return {std::nan(""), 0.0};
    }
    if (std::abs(shift) > static_cast<double>(n_v) + 4.0) {
        std::fill(dst, dst + n_v, 0.0);
        return {before, 0.0};
    }
    const Stencil s = stencil_at(shift, interp);
    for (long long j = 0; j < nv; ++j) {
        double acc = 0.0;
        for (int q = 0; q < s.width; ++q) {
            const long long k = j + s.base + q;
            if (k >= 0 && k < nv) acc += s.w[q] * src[k];
        }
        after += acc;
        if (acc < 0.0) {
            clipped -= acc;
            acc = 0.0;
        }
        dst[j] = acc;
    }
    return {before - after, clipped};
}

} // namespace

namespace serial {

void row_sums(std::span<const double> values, std::size_t n_v, std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_v; ++j) s += values[i * n_v + j];
        out[i] = s;
    }
}

double weighted_abs_diff(std::span<const double> f, std::span<const double> g, std::span<const double> weight,
                         std::size_t shift) {
    const std::size_t n_v = weight.size();
    const std::size_t n_theta = f.size() / n_v;
    double total = 0.0;
    for (std::size_t i = 0; i < n_theta; ++i) {
        const std::size_t fi = (i + shift) % n_theta;
        double s = 0.0;
        for (std::size_t j = 0; j < n_v; ++j) s += weight[j] * std::abs(f[fi * n_v + j] - g[i * n_v + j]);
        total += s;
    }
    return total;
}

void circular_convolve(std::span<const double> table, std::span<const double> rho, std::span<double> out) {
    const std::size_t n = rho.size();
    for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += table[(l + n - k) % n] * rho[k];
        out[l] = s;
    }
}

TransportLoss advect_theta(std::span<const double> in, std::span<double> out, std::size_t n_theta,
                           std::span<const double> v, double dt, double d_theta, Interp interp) {
    const auto st = theta_stencils(v, dt, d_theta, interp);
    TransportLoss loss;
    for (std::size_t i = 0; i < n_theta; ++i) loss.clipped += theta_row(in, out, i, n_theta, v.size(), st);
    return loss;
}

TransportLoss advect_v(std::span<const double> in, std::span<double> out, std::size_t n_v,
                       std::span<const double> force, double dt, double d_v, Interp interp) {
    TransportLoss loss;
    for (std::size_t i = 0; i < force.size(); ++i) {
        const auto r = v_row(in, out, i, n_v, force[i] * dt / d_v, interp);
        loss.boundary += r.boundary;
        loss.clipped += r.clipped;
    }
    return loss;
}

} // namespace serial

namespace omp {

void row_sums(std::span<const double> values, std::size_t n_v, std::span<double> out) {
    const auto n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        double s = 0.0;
        for (std::size_t j = 0; j < n_v; ++j) s += values[i * n_v + j];
        out[i] = s;
    }
}

double weighted_abs_diff(std::span<const double> f, std::span<const double> g, std::span<const double> weight,
                         std::size_t shift) {
    const std::size_t n_v = weight.size();
    const std::size_t n_theta = f.size() / n_v;
    std::vector<double> rows(n_theta);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n_theta); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const std::size_t fi = (i + shift) % n_theta;
        double s = 0.0;
        for (std::size_t j = 0; j < n_v; ++j) s += weight[j] * std::abs(f[fi * n_v + j] - g[i * n_v + j]);
        rows[i] = s;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
}

void circular_convolve(std::span<const double> table, std::span<const double> rho, std::span<double> out) {
    const std::size_t n = rho.size();
#pragma omp parallel for schedule(static)
    for (long long ll = 0; ll < static_cast<long long>(n); ++ll) {
        const auto l = static_cast<std::size_t>(ll);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += table[(l + n - k) % n] * rho[k];
        out[l] = s;
    }
}

TransportLoss advect_theta(std::span<const double> in, std::span<double> out, std::size_t n_theta,
                           std::span<const double> v, double dt, double d_theta, Interp interp) {
    const auto st = theta_stencils(v, dt, d_theta, interp);
    std::vector<double> clipped(n_theta, 0.0);
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(n_theta); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        clipped[i] = theta_row(in, out, i, n_theta, v.size(), st);
    }
    TransportLoss loss;
    for (double c : clipped) loss.clipped += c;
    return loss;
}

TransportLoss advect_v(std::span<const double> in, std::span<double> out, std::size_t n_v,
                       std::span<const double> force, double dt, double d_v, Interp interp) {
    std::vector<TransportLoss> rows(force.size());
#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(force.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        rows[i] = v_row(in, out, i, n_v, force[i] * dt / d_v, interp);
    }
    TransportLoss loss;
    for (const auto& r : rows) {
        loss.boundary += r.boundary;
        loss.clipped += r.clipped;
    }
    return loss;
}

} // namespace omp

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace hmfp::kernels
