#include "hmfp/interaction.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/kernels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace hmfp {

namespace {

using std::numbers::pi;

double reduce(double theta) {
    double r = std::remainder(theta, two_pi);
    return r;
}

KernelTables build_tables(std::size_t n) {
    std::vector<double> c(n), s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = two_pi * static_cast<double>(k) / static_cast<double>(n);
        c[k] = std::cos(a);
        s[k] = std::sin(a);
    }
    KernelTables t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    const std::size_t m_max = (n + 1) / 2; // exclusive; drops the Nyquist mode for even n
    for (std::size_t l = 0; l < n; ++l) {
        double w = 0.0, wp = 0.0;
        for (std::size_t m = m_max - 1; m >= 1; --m) {
            const std::size_t idx = (m * l) % n;
            const double md = static_cast<double>(m);
            w += c[idx] / (md * md);
            wp += s[idx] / md;
        }
        t.w[l] = -w / pi;
        t.w_prime[l] = wp / pi;
    }
    return t;
}

void remove_mean(std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

} // namespace

double Density::mass(double d_theta) const { return std::accumulate(values.begin(), values.end(), 0.0) * d_theta; }

double kernel_W(double theta) {
    const double t = reduce(theta);
    return -t * t / (4.0 * pi) + std::abs(t) / 2.0 - pi / 6.0;
}

double kernel_W_prime(double theta) {
    const double t = reduce(theta);
    const double sgn = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    return -t / (2.0 * pi) + sgn / 2.0;
}

const KernelTables& kernel_tables(std::size_t n_theta) {
    static std::mutex mtx;
    static std::map<std::size_t, std::unique_ptr<KernelTables>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[n_theta];
    if (!slot) slot = std::make_unique<KernelTables>(build_tables(n_theta));
    return *slot;
}

Density density(const DistributionField& f) {
    const auto& g = f.grid();
    Density rho{std::vector<double>(g.n_theta())};
    kernels::omp::row_sums(f.values(), g.n_v(), rho.values);
    for (double& r : rho.values) r *= g.d_v();
    return rho;
}

Potential solve_potential(const DistributionField& f) { return solve_potential(density(f).values); }

Potential solve_potential(std::span<const double> rho) {
    const std::size_t n = rho.size();
    if (n < 2) throw InvalidArgument("density needs at least two theta nodes");
    const auto& tab = kernel_tables(n);
    const double h = two_pi / static_cast<double>(n);
    Potential phi{std::vector<double>(n), std::vector<double>(n)};
    kernels::omp::circular_convolve(tab.w, rho, phi.values);
    kernels::omp::circular_convolve(tab.w_prime, rho, phi.derivative);
    for (std::size_t l = 0; l < n; ++l) {
        phi.values[l] *= h;
        phi.derivative[l] *= h;
    }
    remove_mean(phi.values);
    return phi;
}

Potential solve_potential_fd(std::span<const double> rho) {
    const std::size_t n = rho.size();
    if (n < 3) throw InvalidArgument("density needs at least three theta nodes");
    const double h = two_pi / static_cast<double>(n);
    const double mean = std::accumulate(rho.begin(), rho.end(), 0.0) / static_cast<double>(n);
    std::vector<double> r(n);
    for (std::size_t l = 0; l < n; ++l) r[l] = h * h * (rho[l] - mean);

    // Shoot from phi_0 = 0, phi_1 = 0; phi_n depends affinely on phi_1 with slope n.
    std::vector<double> phi(n + 1, 0.0);
    for (std::size_t l = 1; l < n; ++l) phi[l + 1] = 2.0 * phi[l] - phi[l - 1] + r[l];
    const double s = -phi[n] / static_cast<double>(n);
    for (std::size_t l = 0; l <= n; ++l) phi[l] += s * static_cast<double>(l);
    phi.resize(n);
    remove_mean(phi);

    Potential out{phi, std::vector<double>(n)};
    for (std::size_t l = 0; l < n; ++l)
        out.derivative[l] = (phi[(l + 1) % n] - phi[(l + n - 1) % n]) / (2.0 * h);
    return out;
}

double poisson_residual(const Potential& phi, std::span<const double> rho) {
    const std::size_t n = rho.size();
    const double h = two_pi / static_cast<double>(n);
    const double mean = std::accumulate(rho.begin(), rho.end(), 0.0) / static_cast<double>(n);
    double worst = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        const double d2 = (phi.values[(l + 1) % n] - 2.0 * phi.values[l] + phi.values[(l + n - 1) % n]) / (h * h);
        worst = std::max(worst, std::abs(d2 - (rho[l] - mean)));
    }
    return worst;
}

double field_energy(const Potential& phi) {
    const double h = two_pi / static_cast<double>(phi.derivative.size());
    double s = 0.0;
    for (double d : phi.derivative) s += d * d;
    return 0.5 * s * h;
}

} // namespace hmfp
