#include "hmfp/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

namespace k = hmfp::kernels;

namespace {

struct Data {
    Data(std::size_t nt, std::size_t nv, std::uint64_t seed)
        : nt(nt), nv(nv), f(nt * nv), g(nt * nv), v(nv), w(nv), force(nt), rho(nt), table(nt) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& x : f) x = u(rng);
        for (auto& x : g) x = u(rng);
        for (std::size_t j = 0; j < nv; ++j) {
            v[j] = -6.0 + (static_cast<double>(j) + 0.5) * 12.0 / static_cast<double>(nv);
            w[j] = 1.0 + v[j] * v[j];
        }
        for (std::size_t i = 0; i < nt; ++i) {
            force[i] = 3.0 * (u(rng) - 0.5);
            rho[i] = u(rng);
            table[i] = std::cos(0.7 * static_cast<double>(i)) + u(rng);
        }
    }
    std::size_t nt, nv;
    std::vector<double> f, g, v, w, force, rho, table;
};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

} // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
    k::set_threads(4);
    for (auto [nt, nv] : {std::pair<std::size_t, std::size_t>{8, 8}, {37, 53}, {128, 96}}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            Data d(nt, nv, seed);
            std::vector<double> a(nt), b(nt);
            k::serial::row_sums(d.f, nv, a);
            k::omp::row_sums(d.f, nv, b);
            CHECK(same_bits(a, b));

            for (std::size_t shift : {std::size_t{0}, std::size_t{1}, nt - 1})
                CHECK(same_bits(k::serial::weighted_abs_diff(d.f, d.g, d.w, shift),
                                k::omp::weighted_abs_diff(d.f, d.g, d.w, shift)));

            k::serial::circular_convolve(d.table, d.rho, a);
            k::omp::circular_convolve(d.table, d.rho, b);
            CHECK(same_bits(a, b));

            for (auto ip : {k::Interp::linear, k::Interp::cubic}) {
                std::vector<double> x(nt * nv), y(nt * nv);
                const double dth = 2.0 * M_PI / static_cast<double>(nt);
                const auto la = k::serial::advect_theta(d.f, x, nt, d.v, 0.13, dth, ip);
                const auto lb = k::omp::advect_theta(d.f, y, nt, d.v, 0.13, dth, ip);
                CHECK(same_bits(x, y));
                CHECK(same_bits(la.clipped, lb.clipped));

                const auto va = k::serial::advect_v(d.f, x, nv, d.force, 0.3, 12.0 / static_cast<double>(nv), ip);
                const auto vb = k::omp::advect_v(d.f, y, nv, d.force, 0.3, 12.0 / static_cast<double>(nv), ip);
                CHECK(same_bits(x, y));
                CHECK(same_bits(va.boundary, vb.boundary));
                CHECK(same_bits(va.clipped, vb.clipped));
            }
        }
    }
    CHECK(k::max_threads() == 4);
}

TEST_CASE("reference kernels against direct formulas") {
    Data d(16, 12, 5);
    std::vector<double> out(16);
    k::serial::circular_convolve(d.table, d.rho, out);
    for (std::size_t l = 0; l < 16; ++l) {
        double s = 0.0;
        for (std::size_t m = 0; m < 16; ++m) s += d.table[(l + 16 * 4 - m) % 16] * d.rho[m];
        CHECK(out[l] == doctest::Approx(s).epsilon(1e-14));
    }

    double direct = 0.0;
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 12; ++j) direct += d.w[j] * std::abs(d.f[((i + 3) % 16) * 12 + j] - d.g[i * 12 + j]);
    CHECK(k::serial::weighted_abs_diff(d.f, d.g, d.w, 3) == doctest::Approx(direct).epsilon(1e-14));

    // integer shifts are exact permutations for both stencils
    std::vector<double> x(16 * 12);
    std::vector<double> v(12, 0.0);
    v[4] = 2.0;
    for (auto ip : {k::Interp::linear, k::Interp::cubic}) {
        k::serial::advect_theta(d.f, x, 16, v, 1.0, 2.0, ip);
        for (std::size_t i = 0; i < 16; ++i) {
            CHECK(x[i * 12 + 4] == doctest::Approx(d.f[((i + 15) % 16) * 12 + 4]).epsilon(1e-15));
            CHECK(x[i * 12 + 0] == d.f[i * 12 + 0]);
        }
    }

    // a shift of the whole box empties every row into the boundary
    std::vector<double> force(16, 1e9);
    const auto loss = k::serial::advect_v(d.f, x, 12, force, 1.0, 1.0, k::Interp::linear);
    double total = 0.0;
    for (double y : d.f) total += y;
    CHECK(loss.boundary == doctest::Approx(total).epsilon(1e-14));
    for (double y : x) CHECK(y == 0.0);
}
