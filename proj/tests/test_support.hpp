#pragma once

#include "hmfp/grid.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace hmfp::testing {

inline DistributionField sample(const PhaseGrid& g, const std::function<double(double, double)>& fn) {
    std::vector<double> vals(g.size());
    for (std::size_t i = 0; i < g.n_theta(); ++i)
        for (std::size_t j = 0; j < g.n_v(); ++j) vals[g.index(i, j)] = fn(g.theta(i), g.v(j));
    return DistributionField(g, std::move(vals));
}

/// Smooth positive field: a few theta-modulated Gaussian beams whose bulk
/// sits inside |v| < spread.
struct RandomBeams {
    RandomBeams(std::uint64_t seed, double spread) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int n = 1 + static_cast<int>(u(rng) * 3.0);
        for (int b = 0; b < n; ++b) {
            Beam beam;
            beam.weight = 0.2 + u(rng);
            beam.center = (2.0 * u(rng) - 1.0) * 0.4 * spread;
            beam.width = (0.08 + 0.12 * u(rng)) * spread;
            beam.mod = 0.9 * u(rng);
            beam.phase = two_pi * u(rng);
            beam.mode = 1 + static_cast<int>(u(rng) * 2.0);
            beams.push_back(beam);
        }
    }
    double operator()(double theta, double v) const {
        double s = 0.0;
        for (const auto& b : beams) {
            const double z = (v - b.center) / b.width;
            s += b.weight * std::exp(-0.5 * z * z) * (1.0 + b.mod * std::cos(b.mode * theta - b.phase));
        }
        return s;
    }
    struct Beam {
        double weight, center, width, mod, phase;
        int mode;
    };
    std::vector<Beam> beams;
};

inline DistributionField random_field(const PhaseGrid& g, std::uint64_t seed, double spread) {
    return sample(g, RandomBeams(seed, spread));
}

/// Rough cell noise: independent uniform samples times a smooth envelope.
inline DistributionField noisy_field(const PhaseGrid& g, std::uint64_t seed, double spread) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return sample(g, [&](double, double v) { return std::exp(-0.5 * v * v / (spread * spread)) * (0.05 + u(rng)); });
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace hmfp::testing
