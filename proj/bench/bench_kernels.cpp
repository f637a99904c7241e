#include "hmfp/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace k = hmfp::kernels;

namespace {

struct Data {
    explicit Data(std::size_t n) : n(n), f(n * n), g(n * n), out(n * n), v(n), w(n), force(n), rho(n), table(n) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& x : f) x = u(rng);
        for (auto& x : g) x = u(rng);
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = -8.0 + (static_cast<double>(j) + 0.5) * 16.0 / static_cast<double>(n);
            w[j] = 1.0 + v[j] * v[j];
            force[j] = std::sin(0.1 * static_cast<double>(j));
            rho[j] = u(rng);
            table[j] = std::cos(0.3 * static_cast<double>(j));
        }
    }
    std::size_t n;
    std::vector<double> f, g, out, v, w, force, rho, table;
};

template <bool Parallel>
void bm_advect_theta(benchmark::State& st) {
    Data d(static_cast<std::size_t>(st.range(0)));
    const double dth = 2.0 * M_PI / static_cast<double>(d.n);
    for (auto _ : st) {
        auto r = Parallel ? k::omp::advect_theta(d.f, d.out, d.n, d.v, 0.05, dth, k::Interp::linear)
                          : k::serial::advect_theta(d.f, d.out, d.n, d.v, 0.05, dth, k::Interp::linear);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void bm_advect_v(benchmark::State& st) {
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        auto r = Parallel ? k::omp::advect_v(d.f, d.out, d.n, d.force, 0.05, 1.0 / 16.0, k::Interp::cubic)
                          : k::serial::advect_v(d.f, d.out, d.n, d.force, 0.05, 1.0 / 16.0, k::Interp::cubic);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void bm_weighted_abs_diff(benchmark::State& st) {
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        double r = Parallel ? k::omp::weighted_abs_diff(d.f, d.g, d.w, 3) : k::serial::weighted_abs_diff(d.f, d.g, d.w, 3);
        benchmark::DoNotOptimize(r);
    }
}

template <bool Parallel>
void bm_circular_convolve(benchmark::State& st) {
    Data d(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        if (Parallel)
            k::omp::circular_convolve(d.table, d.rho, d.v);
        else
            k::serial::circular_convolve(d.table, d.rho, d.v);
        benchmark::DoNotOptimize(d.v.data());
    }
}

} // namespace

BENCHMARK(bm_advect_theta<false>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_advect_theta<true>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_advect_v<false>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_advect_v<true>)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_weighted_abs_diff<false>)->Arg(256);
BENCHMARK(bm_weighted_abs_diff<true>)->Arg(256);
BENCHMARK(bm_circular_convolve<false>)->Arg(256)->Arg(1024);
BENCHMARK(bm_circular_convolve<true>)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
