#include "hmfp/experiment.hpp"
#include "hmfp/functionals.hpp"
#include "hmfp/interaction.hpp"
#include "hmfp/rearrangement.hpp"
#include "hmfp/steady_states.hpp"
#include "hmfp/vlasov.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

using namespace hmfp;
using hmfp::testing::random_field;
using hmfp::testing::sample;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double gauss_legendre(const std::function<double(double)>& fn, double a, double b, int pieces) {
    static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640, 0.9061798459386640};
    static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                0.2369268850561891};
    double s = 0.0;
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int k = 0; k < 5; ++k) s += w[k] * fn(c + 0.5 * h * x[k]) * 0.5 * h;
    }
    return s;
}

Outcome closed_form_multipliers() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fine = make_grid(8, 65536, 2.0);
    const auto two = solve_multipliers_two(fine, zero_potential(8), CasimirSpec::power(2.0),
                                           {4 * pi * sqrt2 / 3, 8 * pi * sqrt2 / 15});
    const double dl = std::abs(two.lambda - 1.0), dmu = std::abs(*two.mu + 1.0);
    const double lam = solve_lambda_one(make_grid(16, 256, 8.0), zero_potential(16), CasimirSpec::entropy(),
                                        2 * pi * std::sqrt(2 * pi));
    const double secs = seconds_since(t0);
    return {dl <= 1e-7 && dmu <= 1e-7 && std::abs(lam) <= 1e-9 && secs < 1.0,
            fmt("|lambda-1| %.2e |mu+1| %.2e entropy |lambda| %.2e in %.2fs", dl, dmu, std::abs(lam), secs)};
}

Outcome monotone_chain() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = make_grid(128, 128, 6.0);
    const auto s = CasimirSpec::power(2.0);
    double worst_chain = -HUGE_VAL, worst_identity = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto f = random_field(g, seed, 2.5);
        const auto phi = solve_potential(f);
        const auto red = reduced_functional(g, phi, s, {mass(f), casimir_integral(f, s)});
        const double hF = hamiltonian(red.profile);
        worst_chain = std::max({worst_chain, hF - red.value, red.value - hamiltonian(f)});
        const auto phiF = solve_potential(red.profile);
        double gap = 0.0;
        for (std::size_t i = 0; i < g.n_theta(); ++i) {
            const double d = phiF.derivative[i] - phi.derivative[i];
            gap += 0.5 * d * d * g.d_theta();
        }
        worst_identity = std::max(worst_identity, std::abs(red.value - hF - gap));
    }
    const double secs = seconds_since(t0);
    return {worst_chain <= 1e-8 && worst_identity <= 1e-8 && secs < 30.0,
            fmt("worst chain violation %.2e, identity error %.2e in %.1fs", worst_chain, worst_identity, secs)};
}

Outcome equimeasurability() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto coarse = make_grid(32, 64, 6.0), fine = make_grid(64, 128, 6.0);
    auto band = [](const PhaseGrid& g) { return 8.0 * static_cast<double>(g.n_theta()) * g.cell_area(); };
    // worst defect over the ensemble on each grid
    double worst[2] = {0.0, 0.0}, worst_band = 0.0;
    int k = 0;
    for (const auto* g : {&coarse, &fine}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto f = random_field(*g, seed, 2.0);
            for (const auto& phi : {solve_potential(f), zero_potential(g->n_theta())}) {
                const double d = equimeasurability_defect(f, rearrange_with_energy(f, phi));
                worst[k] = std::max(worst[k], d);
                worst_band = std::max(worst_band, d / band(*g));
            }
        }
        ++k;
    }
    const double ratio = worst[1] / worst[0];
    const double secs = seconds_since(t0);
    return {worst_band <= 1.0 && ratio <= 0.5 * (1.0 + 1e-9) && secs < 60.0,
            fmt("worst defect / band %.3f, refinement ratio of worst defect %.4f in %.1fs", worst_band, ratio, secs)};
}

Outcome energy_identity() {
    const auto g = make_grid(16, 32, 6.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto f = random_field(g, seed + 100, 2.0);
        const auto phi = solve_potential(f);
        const auto prof = decreasing_profile(f);
        const auto mom = rearranged_moments(prof, phi);
        double rhs = 0.0;
        const auto b = prof.breakpoints();
        const auto u = prof.values();
        for (std::size_t k = 0; k + 1 < prof.size(); ++k)
            rhs += u[k] * gauss_legendre([&](double s) { return sublevel_measure_inverse(phi, s); }, b[k], b[k + 1], 256);
        const double by_parts = inverse_measure_integral(prof, phi, mom.level_energy);
        worst = std::max({worst, std::abs(mom.energy - rhs) / std::abs(rhs), std::abs(by_parts - rhs) / std::abs(rhs)});
    }
    return {worst <= 1e-6, fmt("worst relative gap %.2e", worst)};
}

Outcome measure_bounds() {
    double worst = -HUGE_VAL;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto phi = solve_potential(random_field(make_grid(64, 64, 4.0), seed + 200, 2.0));
        for (int k = 0; k < 100; ++k) {
            const double s = 0.01 * std::pow(1e4, k / 99.0);
            const auto [lo, hi] = inverse_measure_bounds(phi, s);
            const double e = sublevel_measure_inverse(phi, s);
            worst = std::max({worst, lo - e, e - hi});
        }
    }
    double b0 = 0.0;
    const auto z = zero_potential(32);
    for (double m : {0.1, 1.0, 5.0, 20.0, 80.0})
        b0 = std::max(b0, std::abs(convex_B(z, m) - m * m * m / (96 * pi * pi)) / (m * m * m / (96 * pi * pi)));
    return {worst <= 1e-12 && b0 <= 1e-10, fmt("worst bound violation %.2e, B_0 relative error %.2e", worst, b0)};
}

Outcome conservation() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = make_grid(256, 256, 8.0);
    const auto f0 = sample(g, [](double, double v) { return std::exp(-v * v / 2) / std::sqrt(2 * pi); });
    const auto e = CasimirSpec::entropy();
    const double m0 = mass(f0), h0 = hamiltonian(f0), c0 = casimir_integral(f0, e);
    double dm = 0.0, dh = 0.0, dc = 0.0;
    evolve(f0, {0.05, 10.0, Interp::cubic, 1, true}, [&](std::size_t, double, const DistributionField& f) {
        dm = std::max(dm, std::abs(mass(f) - m0) / m0);
        dh = std::max(dh, std::abs(hamiltonian(f) - h0) / std::abs(h0));
        dc = std::max(dc, std::abs(casimir_integral(f, e) - c0) / std::abs(c0));
    });
    const double secs = seconds_since(t0);
    return {dm <= 1e-12 && dh <= 1e-6 && dc <= 1e-3 && secs < 300.0,
            fmt("mass %.2e hamiltonian %.2e casimir %.2e in %.1fs", dm, dh, dc, secs)};
}

Outcome orbital_stability() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto g = make_grid(256, 256, 8.0);
    const auto e = CasimirSpec::entropy();
    const auto f0 = self_consistent_solve(g, e, {7.0, {}}, cosine_potential(256, 0.5), {0.5, 1e-12, 10000}).field;
    double sup[2] = {0.0, 0.0};
    bool bounded = true;
    const double eta[2] = {1e-3, 2e-3};
    for (int k = 0; k < 2; ++k) {
        const auto start = perturb(f0, {PerturbationKind::density_bump, eta[k], 1, true}, e);
        evolve(start, {0.05, 10.0, Interp::cubic, 1, true}, [&](std::size_t, double, const DistributionField& f) {
            sup[k] = std::max(sup[k], orbital_distance(f, f0).distance);
        });
        bounded = bounded && sup[k] <= 20.0 * eta[k];
    }
    const double ratio = sup[1] / sup[0];
    const double secs = seconds_since(t0);
    return {bounded && ratio >= 0.5 && ratio <= 4.0 && secs < 600.0,
            fmt("sup d %.4f (eta 1e-3) %.4f (eta 2e-3), ratio %.2f in %.1fs", sup[0], sup[1], ratio, secs)};
}

Outcome euler_lagrange() {
    double residual = 0.0, mu_gap = 0.0;
    auto check = [&](const PhaseGrid& g, const CasimirSpec& s, const ConstraintSet& c, const Potential& seed) {
        const auto r = self_consistent_solve(g, s, c, seed, {0.5, 1e-12, 10000});
        const auto phi = solve_potential(r.field);
        const auto rebuilt = build_F_phi(g, phi, s, solve_multipliers(g, phi, s, c));
        residual = std::max(residual, hmfp::testing::max_abs_diff(rebuilt.values(), r.field.values()));
        if (c.mj) mu_gap = std::max(mu_gap, std::abs(mu_from_identity(r.field, s) / *r.multipliers.mu - 1.0));
    };
    check(make_grid(64, 128, 8.0), CasimirSpec::entropy(), {10.0, {}}, cosine_potential(64, 0.5));
    check(make_grid(64, 128, 8.0), CasimirSpec::entropy(), {3.0, {}}, zero_potential(64));
    check(make_grid(64, 256, 4.0), CasimirSpec::power(2.0), {12.0, {}}, cosine_potential(64, 0.5));
    check(make_grid(8, 65536, 2.0), CasimirSpec::power(2.0), {4 * pi * sqrt2 / 3, 8 * pi * sqrt2 / 15}, zero_potential(8));
    return {residual <= 1e-8 && mu_gap <= 1e-6, fmt("worst residual %.2e, mu identity relative gap %.2e", residual, mu_gap)};
}

Outcome splitting_order() {
    const auto g = make_grid(128, 128, 6.0);
    const auto f0 = sample(g, [](double th, double v) { return std::exp(-v * v / 2) / std::sqrt(2 * pi) * (1 + 0.5 * std::cos(th)); });
    auto run = [&](double dt) { return evolve(f0, {dt, 2.0, Interp::cubic, 1000000, true}).final_field; };
    const auto ref = run(0.05);
    const double e1 = l1_distance(run(0.4), ref), e2 = l1_distance(run(0.2), ref), e3 = l1_distance(run(0.1), ref);
    const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
    return {std::min(p1, p2) >= 1.8, fmt("errors %.2e %.2e %.2e, orders %.2f", e1, e2, e3, p1) +
                                         fmt(" %.2f", p2)};
}

Outcome kullback_jensen() {
    const auto g = make_grid(16, 64, 5.0);
    double ck = -HUGE_VAL, jensen = -HUGE_VAL;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto f = random_field(g, seed + 300, 2.0);
        auto f0 = random_field(g, seed + 400, 2.0);
        f0 *= mass(f) / mass(f0);
        const auto gap = csiszar_kullback_gap(f, f0);
        ck = std::max(ck, (gap.lhs - gap.rhs) / std::max(1.0, gap.rhs));
        const double mf = mass(f), m0 = mass(f0);
        jensen = std::max(jensen, mf * (std::log(mf) - std::log(m0)) - relative_entropy(f, f0));
    }
    return {ck <= 1e-10 && jensen <= 1e-10, fmt("worst CK margin %.2e, worst Jensen margin %.2e", -ck, -jensen)};
}

} // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"closed-form multipliers", closed_form_multipliers},
        {"monotone chain and norm identity", monotone_chain},
        {"equimeasurability", equimeasurability},
        {"energy moment identity", energy_identity},
        {"sublevel measure bounds", measure_bounds},
        {"conservation under flow", conservation},
        {"orbital stability", orbital_stability},
        {"euler-lagrange residual", euler_lagrange},
        {"splitting order", splitting_order},
        {"csiszar-kullback and jensen", kullback_jensen},
    };
    int failed = 0;
    int n = 1;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n++, name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
