#include "hmfp/experiment.hpp"

#include "hmfp/errors.hpp"
#include "hmfp/functionals.hpp"
#include "hmfp/interaction.hpp"
#include "hmfp/rearrangement.hpp"
#include "hmfp/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>

namespace hmfp {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw IoError("cannot write " + p.string());
    return os;
}

const fs::path& require_input(const std::optional<fs::path>& input, const char* command) {
    if (!input) throw ConfigError(std::string(command) + " needs --input <snapshot>");
    return *input;
}

PhaseGrid grid_of(const ExperimentConfig& ec) { return make_grid(ec.n_theta, ec.n_v, ec.v_max); }

ConstraintSet require_constraints(const ExperimentConfig& ec) {
    if (!ec.constraints) throw ConfigError("missing config key 'constraints.m1'");
    return *ec.constraints;
}

SteadyStateResult build_steady(const ExperimentConfig& ec, const CasimirSpec& spec,
                               const std::optional<fs::path>& input) {
    if (ec.steady_method == "equimeasurable") {
        const Snapshot s = load_snapshot(require_input(input, "equimeasurable steady"));
        return equimeasurable_minimize(s.field, ec.solver.damping, ec.solver.tol, ec.solver.max_iter).state;
    }
    const PhaseGrid grid = grid_of(ec);
    return self_consistent_solve(grid, spec, require_constraints(ec), cosine_potential(ec.n_theta, ec.seed_amplitude),
                                 ec.solver);
}

void write_report(std::ostream& os, const SteadyStateResult& r, const CasimirSpec& spec) {
    os << "lambda = " << fmt(r.multipliers.lambda) << '\n';
    os << "mu = " << (r.multipliers.mu ? fmt(*r.multipliers.mu) : std::string("none")) << '\n';
    os << "fixed_point_residual = " << fmt(r.fixed_point_residual) << '\n';
    os << "iterations = " << r.iterations << '\n';
    os << "mass = " << fmt(mass(r.field)) << '\n';
    os << "casimir = " << fmt(casimir_integral(r.field, spec)) << '\n';
    os << "hamiltonian = " << fmt(hamiltonian(r.field)) << '\n';
    os << "free_energy = " << fmt(free_energy_J(r.field, spec)) << '\n';
    os << "discarded_tail_mass = " << fmt(r.discarded_tail_mass) << '\n';
}

} // namespace

ExperimentConfig experiment_config(const Config& c) {
    ExperimentConfig ec;
    ec.n_theta = c.count_or("grid.n_theta", ec.n_theta);
    ec.n_v = c.count_or("grid.n_v", ec.n_v);
    ec.v_max = c.number_or("grid.v_max", ec.v_max);
    ec.casimir = c.string_or("casimir", ec.casimir);
    if (c.has("constraints.m1")) ec.constraints = ConstraintSet{c.number("constraints.m1"), c.optional_number("constraints.mj")};
    else if (c.has("constraints.mj")) throw ConfigError("missing config key 'constraints.m1'");
    ec.solver.damping = c.number_or("solver.damping", ec.solver.damping);
    ec.solver.tol = c.number_or("solver.tol", ec.solver.tol);
    ec.solver.max_iter = c.count_or("solver.max_iter", ec.solver.max_iter);
    ec.seed_amplitude = c.number_or("seed.amplitude", ec.seed_amplitude);
    ec.steady_method = c.string_or("steady.method", ec.steady_method);
    if (ec.steady_method != "variational" && ec.steady_method != "equimeasurable")
        throw ConfigError("steady.method must be variational or equimeasurable");

    const std::string kind = c.string_or("perturbation.kind", "density_bump");
    if (kind == "density_bump") ec.perturbation.kind = PerturbationKind::density_bump;
    else if (kind == "velocity_shift") ec.perturbation.kind = PerturbationKind::velocity_shift;
    else if (kind == "random_noise") ec.perturbation.kind = PerturbationKind::random_noise;
    else throw ConfigError("perturbation.kind must be density_bump, velocity_shift or random_noise");
    ec.perturbation.amplitude = c.number_or("perturbation.amplitude", 0.0);
    if (ec.perturbation.amplitude < 0.0) throw ConfigError("perturbation.amplitude must be nonnegative");
    ec.perturbation.seed = c.count_or("perturbation.seed", 1);
    ec.perturbation.renormalize = c.flag_or("perturbation.renormalize", false);

    ec.evolve.dt = c.number_or("evolve.dt", ec.evolve.dt);
    ec.evolve.t_end = c.number_or("evolve.t_end", ec.evolve.t_end);
    const std::string interp = c.string_or("evolve.interpolation", "linear");
    if (interp == "linear") ec.evolve.interpolation = Interp::linear;
    else if (interp == "cubic") ec.evolve.interpolation = Interp::cubic;
    else throw ConfigError("evolve.interpolation must be linear or cubic");
    ec.evolve.record_every = c.count_or("evolve.record_every", 1);
    if (ec.evolve.record_every == 0) throw ConfigError("evolve.record_every must be positive");
    ec.snapshot_every = c.count_or("evolve.snapshot_every", 0);

    const std::string phi = c.string_or("rearrange.phi", "self");
    if (phi != "self" && phi != "zero") throw ConfigError("rearrange.phi must be self or zero");
    ec.rearrange_self = phi == "self";
    ec.output_dir = c.string_or("output.dir", "runs");
    return ec;
}

DistributionField perturb(const DistributionField& f0, const Perturbation& p, const CasimirSpec& spec) {
    const auto& g = f0.grid();
    DistributionField out = f0;
    switch (p.kind) {
    case PerturbationKind::density_bump:
        for (std::size_t i = 0; i < g.n_theta(); ++i)
            for (auto& x : out.row(i)) x *= std::max(0.0, 1.0 + p.amplitude * std::cos(g.theta(i)));
        break;
    case PerturbationKind::velocity_shift: {
        const std::vector<double> push(g.n_theta(), -p.amplitude);
        out = advect_v(f0, push, 1.0);
        break;
    }
    case PerturbationKind::random_noise: {
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<double> u(1.0 - p.amplitude, 1.0 + p.amplitude);
        for (auto& x : out.values()) x = std::max(0.0, x * u(rng));
        break;
    }
    }
    if (p.renormalize) {
        ConstraintSet c{mass(f0), std::nullopt};
        if (spec.h3()) c.mj = casimir_integral(f0, spec);
        out = renormalize_to_constraints(out, spec, c).field;
    }
    return out;
}

fs::path run_directory(const ExperimentConfig& ec, const Config& config, const std::string& command,
                       const std::optional<fs::path>& input) {
    const std::string key = command + "\n" + (input ? input->string() : std::string()) + "\n" + config.canonical();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
    const fs::path dir = ec.output_dir / std::string(hex, 12);
    std::error_code err;
    fs::create_directories(dir, err);
    if (err) throw IoError("cannot create " + dir.string() + ": " + err.message());
    return dir;
}

int cmd_steady(const Config& config, const std::optional<fs::path>& input, std::ostream& log) {
    const ExperimentConfig ec = experiment_config(config);
    const CasimirSpec spec = CasimirSpec::parse(ec.casimir);
    const SteadyStateResult r = build_steady(ec, spec, input);
    const fs::path dir = run_directory(ec, config, "steady", input);
    save_snapshot(dir / "steady.snap", r.field, 0.0);
    auto os = open_out(dir / "report.txt");
    write_report(os, r, spec);
    write_report(log, r, spec);
    log << "output = " << dir.string() << '\n';
    return 0;
}

int cmd_evolve(const Config& config, const std::optional<fs::path>& input, std::ostream& log) {
    const ExperimentConfig ec = experiment_config(config);
    const CasimirSpec spec = CasimirSpec::parse(ec.casimir);
    const Snapshot s0 = load_snapshot(require_input(input, "evolve"));
    const fs::path dir = run_directory(ec, config, "evolve", input);
    auto csv = open_out(dir / "diagnostics.csv");
    csv << diagnostics_csv_header() << '\n';
    std::size_t records = 0;
    const auto summary = evolve(s0.field, ec.evolve, [&](std::size_t step, double t, const DistributionField& f) {
        write_csv_row(csv, diagnostics(f, spec, s0.time + t));
        if (ec.snapshot_every > 0 && records % ec.snapshot_every == 0)
            save_snapshot(dir / ("snap_" + std::to_string(step) + ".snap"), f, s0.time + t);
        ++records;
    });
    save_snapshot(dir / "final.snap", summary.final_field, s0.time + summary.final_time);
    log << "steps = " << summary.steps << '\n';
    log << "boundary_loss = " << fmt(summary.losses.boundary_loss) << '\n';
    log << "clipped_mass = " << fmt(summary.losses.clipped_mass) << '\n';
    log << "output = " << dir.string() << '\n';
    return 0;
}

int cmd_stability(const Config& config, const std::optional<fs::path>& input, std::ostream& log) {
    const ExperimentConfig ec = experiment_config(config);
    const CasimirSpec spec = CasimirSpec::parse(ec.casimir);
    const DistributionField f0 = input ? load_snapshot(*input).field : build_steady(ec, spec, std::nullopt).field;
    const DistributionField start = perturb(f0, ec.perturbation, spec);
    const fs::path dir = run_directory(ec, config, "stability", input);
    auto csv = open_out(dir / "stability.csv");
    csv << "time,orbital_distance,shift,mass,hamiltonian,casimir\n";
    double sup = 0.0;
    evolve(start, ec.evolve, [&](std::size_t, double t, const DistributionField& f) {
        const auto d = orbital_distance(f, f0);
        sup = std::max(sup, d.distance);
        csv << fmt(t) << ',' << fmt(d.distance) << ',' << fmt(d.shift) << ',' << fmt(mass(f)) << ','
            << fmt(hamiltonian(f)) << ',' << fmt(casimir_integral(f, spec)) << '\n';
    });
    auto summary = open_out(dir / "summary.txt");
    summary << "sup_distance = " << fmt(sup) << '\n';
    log << "sup_distance = " << fmt(sup) << '\n';
    log << "output = " << dir.string() << '\n';
    return 0;
}

int cmd_rearrange(const Config& config, const std::optional<fs::path>& input, std::ostream& log) {
    const ExperimentConfig ec = experiment_config(config);
    const Snapshot s = load_snapshot(require_input(input, "rearrange"));
    const Potential phi = ec.rearrange_self ? solve_potential(s.field) : zero_potential(s.field.grid().n_theta());
    const DistributionField out = rearrange_with_energy(s.field, phi);
    const fs::path dir = run_directory(ec, config, "rearrange", input);
    save_snapshot(dir / "rearranged.snap", out, s.time);
    auto rep = open_out(dir / "report.txt");
    for (std::ostream* os : {static_cast<std::ostream*>(&rep), &log}) {
        *os << "phi = " << (ec.rearrange_self ? "self" : "zero") << '\n';
        *os << "equimeasurability_defect = " << fmt(equimeasurability_defect(s.field, out)) << '\n';
        *os << "mass_in = " << fmt(mass(s.field)) << '\n';
        *os << "mass_out = " << fmt(mass(out)) << '\n';
    }
    log << "output = " << dir.string() << '\n';
    return 0;
}

int cmd_diag(const Config& config, const std::optional<fs::path>& input, std::ostream& log) {
    const ExperimentConfig ec = experiment_config(config);
    const CasimirSpec spec = CasimirSpec::parse(ec.casimir);
    const Snapshot s = load_snapshot(require_input(input, "diag"));
    const fs::path dir = run_directory(ec, config, "diag", input);
    auto csv = open_out(dir / "diagnostics.csv");
    const auto rec = diagnostics(s.field, spec, s.time);
    csv << diagnostics_csv_header() << '\n';
    write_csv_row(csv, rec);
    log << diagnostics_csv_header() << '\n';
    write_csv_row(log, rec);
    log << "output = " << dir.string() << '\n';
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NonConvergence*>(&e)) return 2;
    if (dynamic_cast<const SolverAbort*>(&e)) return 3;
    return 1;
}

int run_command(const std::string& command, const Config& config, const std::optional<fs::path>& input,
                std::ostream& log, std::ostream& err) {
    try {
        if (command == "steady") return cmd_steady(config, input, log);
        if (command == "evolve") return cmd_evolve(config, input, log);
        if (command == "stability") return cmd_stability(config, input, log);
        if (command == "rearrange") return cmd_rearrange(config, input, log);
        if (command == "diag") return cmd_diag(config, input, log);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("sweep must look like key=v1,v2,...");
    std::pair<std::string, std::vector<std::string>> out{spec.substr(0, eq), {}};
    std::string rest = spec.substr(eq + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (item.empty()) throw ConfigError("empty value in sweep '" + spec + "'");
        out.second.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace hmfp
