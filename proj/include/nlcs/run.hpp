#pragma once

#include <string>

#include "nlcs/nonlinearity.hpp"
#include "nlcs/states.hpp"

namespace nlcs {

/// Everything a command run needs, defaults matching the CLI's. The same
/// struct drives all four subcommands; fields irrelevant to a subcommand are
/// ignored by it but still validated.
struct RunConfig {
    enum class Command { state, sweep, series, verify };

    Command command = Command::sweep;
    NonlinearityKind kind = NonlinearityKind::trapped_ion;
    std::string table_path;
    double eta = 0.2;
    double beta_re = 0.5;
    double beta_im = 0.0;
    double beta_min = 0.02;
    double beta_max = 1.0;
    int beta_steps = 50;
    StateFamily family = StateFamily::displacement;
    int nmax = 4096;
    double tail_tol = 1e-16;
    double denom_epsilon = 1e-12;
    int dim = 32; // verify battery dimension
};

/// Outcome of one command: the text payload (CSV or report), a one-line
/// diagnostic for stderr when nonzero, and the process exit code
/// (0 ok, 1 invalid config or verification failure, 2 numerical abort).
struct RunResult {
    int exit_code = 0;
    std::string output;
    std::string diagnostic;
};

RunResult run(const RunConfig& config);

// Thresholds of the oracle verification battery.
inline constexpr double kCommutatorThreshold = 1e-10;
inline constexpr double kEigenThreshold = 1e-9;
inline constexpr double kBchThreshold = 1e-8;
inline constexpr double kNormalOrderingThreshold = 1e-10;

/// Every oracle cross-check at one (spec, beta, dim): the five safe-block
/// commutator residuals, the eigenstate residual of the closed-form
/// expansion, the overlap deficits between both matrix exponentials and their
/// closed-form expansions, and the normal-ordering identity residual.
struct VerifyOutcome {
    double comm_n_a = 0.0;
    double comm_n_a_dag = 0.0;
    double comm_a_a_dag = 0.0;
    double comm_a_b_dag = 0.0;
    double comm_b_a_dag = 0.0;
    double eigen_residual = 0.0;
    double bch_deficit_direct = 0.0;
    double bch_deficit_dual = 0.0;
    double normal_ordering = 0.0;
    bool pass = false;
};

VerifyOutcome verify_battery(const NonlinearitySpec& spec, std::complex<double> beta, int dim,
                             const TruncationPolicy& policy = {});

} // namespace nlcs
