#pragma once

#include "hmfp/casimir.hpp"
#include "hmfp/config.hpp"
#include "hmfp/grid.hpp"
#include "hmfp/steady_states.hpp"
#include "hmfp/vlasov.hpp"

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hmfp {

enum class PerturbationKind { density_bump, velocity_shift, random_noise };

struct Perturbation {
    PerturbationKind kind = PerturbationKind::density_bump;
    double amplitude = 0.0;
    std::uint64_t seed = 1;
    bool renormalize = false;
};

struct ExperimentConfig {
    std::size_t n_theta = 128;
    std::size_t n_v = 128;
    double v_max = 8.0;
    std::string casimir = "entropy";
    std::optional<ConstraintSet> constraints;
    FixedPointOptions solver;
    double seed_amplitude = 0.0;
    std::string steady_method = "variational";
    Perturbation perturbation;
    SolverConfig evolve;
    std::size_t snapshot_every = 0; // in records; 0 disables
    bool rearrange_self = true;
    std::filesystem::path output_dir = "runs";
};

/// Validates every key it reads; unknown keys are ignored.
ExperimentConfig experiment_config(const Config& config);

/// Deterministic perturbation of f0. Perturbed fields are renormalized to
/// the mass (and, for h3 casimirs, the casimir) of f0 when requested.
DistributionField perturb(const DistributionField& f0, const Perturbation& p, const CasimirSpec& spec);

/// output_dir / first 12 hex digits of the hash of command, input and config.
std::filesystem::path run_directory(const ExperimentConfig& ec, const Config& config, const std::string& command,
                                    const std::optional<std::filesystem::path>& input);

int cmd_steady(const Config& config, const std::optional<std::filesystem::path>& input, std::ostream& log);
int cmd_evolve(const Config& config, const std::optional<std::filesystem::path>& input, std::ostream& log);
int cmd_stability(const Config& config, const std::optional<std::filesystem::path>& input, std::ostream& log);
int cmd_rearrange(const Config& config, const std::optional<std::filesystem::path>& input, std::ostream& log);
int cmd_diag(const Config& config, const std::optional<std::filesystem::path>& input, std::ostream& log);

/// 1 config or I/O, 2 nonconvergence, 3 solver abort.
int exit_code_for(const std::exception& e);

/// Runs one command, catching library errors into exit codes reported on err.
int run_command(const std::string& command, const Config& config,
                const std::optional<std::filesystem::path>& input, std::ostream& log, std::ostream& err);

/// Splits "key=v1,v2,..." into the key and its values.
std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& spec);

} // namespace hmfp
