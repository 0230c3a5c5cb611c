#include "nlcs/run.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nlcs/analysis.hpp"
#include "nlcs/errors.hpp"
#include "nlcs/oracle.hpp"
#include "text.hpp"

namespace nlcs {

namespace {

std::string kind_token(const RunConfig& config) {
    switch (config.kind) {
    case NonlinearityKind::identity: return "identity";
    case NonlinearityKind::trapped_ion: return "trapped-ion";
    case NonlinearityKind::table: return "table:" + config.table_path;
    }
    return "?";
}

std::string command_token(RunConfig::Command command) {
    switch (command) {
    case RunConfig::Command::state: return "state";
    case RunConfig::Command::sweep: return "sweep";
    case RunConfig::Command::series: return "series";
    case RunConfig::Command::verify: return "verify";
    }
    return "?";
}

// Every output starts with the full effective configuration so a result file
// is self-describing and reruns are reproducible from the file alone.
std::string echo_line(const RunConfig& config) {
    std::string line = "# nlcs " + command_token(config.command);
    line += " nonlinearity=" + kind_token(config);
    line += " eta=" + fmt_g(config.eta);
    switch (config.command) {
    case RunConfig::Command::state:
        line += config.family == StateFamily::displacement ? " family=displacement"
                                                           : " family=eigenstate";
        line += " beta=" + fmt_g(config.beta_re) + " beta_im=" + fmt_g(config.beta_im);
        line += " nmax=" + std::to_string(config.nmax);
        line += " tail_tol=" + fmt_g(config.tail_tol);
        break;
    case RunConfig::Command::sweep:
        line += " family=displacement";
        line += " beta_min=" + fmt_g(config.beta_min) + " beta_max=" + fmt_g(config.beta_max);
        line += " beta_steps=" + std::to_string(config.beta_steps);
        line += " nmax=" + std::to_string(config.nmax);
        line += " tail_tol=" + fmt_g(config.tail_tol);
        break;
    case RunConfig::Command::series:
        line += " beta=" + fmt_g(config.beta_re);
        line += " nmax=" + std::to_string(config.nmax);
        line += " tail_tol=" + fmt_g(config.tail_tol);
        break;
    case RunConfig::Command::verify:
        line += " beta=" + fmt_g(config.beta_re) + " beta_im=" + fmt_g(config.beta_im);
        line += " dim=" + std::to_string(config.dim);
        break;
    }
    line += " denom_epsilon=" + fmt_g(config.denom_epsilon);
    line += "\n";
    return line;
}

void validate(const RunConfig& config) {
    if (config.beta_steps < 1) throw InvalidArgument("config: beta_steps must be >= 1");
    if (!(config.beta_min <= config.beta_max))
        throw InvalidArgument("config: beta_min must be <= beta_max");
    if (!(config.eta >= 0.0)) throw InvalidArgument("config: eta must be >= 0");
    if (config.nmax < 8) throw InvalidArgument("config: nmax must be >= 8");
    if (!(config.tail_tol > 0.0)) throw InvalidArgument("config: tail_tol must be > 0");
    if (!(config.denom_epsilon > 0.0)) throw InvalidArgument("config: denom_epsilon must be > 0");
    if (config.kind == NonlinearityKind::table && config.table_path.empty())
        throw InvalidArgument("config: table nonlinearity requires a path");
    if (config.command == RunConfig::Command::verify && config.dim < 8)
        throw InvalidArgument("config: verify needs dim >= 8");
    if (config.family == StateFamily::eigenstate &&
        (config.command == RunConfig::Command::sweep || config.command == RunConfig::Command::series))
        throw InvalidArgument(
            "config: the series indicators are defined for the displacement family only");
    if ((config.command == RunConfig::Command::series ||
         config.command == RunConfig::Command::sweep) &&
        config.beta_im != 0.0)
        throw InvalidArgument("config: the series indicators require real beta");
}

NonlinearitySpec make_spec(const RunConfig& config) {
    switch (config.kind) {
    case NonlinearityKind::identity: return NonlinearitySpec::identity();
    case NonlinearityKind::trapped_ion:
        return NonlinearitySpec::trapped_ion(config.eta, config.denom_epsilon);
    case NonlinearityKind::table:
        return NonlinearitySpec::table_from_file(config.table_path, config.denom_epsilon);
    }
    throw InvalidArgument("config: unknown nonlinearity kind");
}

TruncationPolicy make_policy(const RunConfig& config) {
    TruncationPolicy policy;
    policy.max_order = config.nmax;
    policy.tail_tol = config.tail_tol;
    return policy;
}

std::vector<double> make_grid(const RunConfig& config) {
    std::vector<double> grid;
    grid.reserve(config.beta_steps);
    if (config.beta_steps == 1) {
        grid.push_back(config.beta_min);
        return grid;
    }
    const double step = (config.beta_max - config.beta_min) / (config.beta_steps - 1);
    for (int k = 0; k < config.beta_steps; ++k)
        grid.push_back(k == config.beta_steps - 1 ? config.beta_max : config.beta_min + k * step);
    return grid;
}

RunResult run_state(const RunConfig& config) {
    const auto spec = make_spec(config);
    const std::complex<double> amplitude{config.beta_re, config.beta_im};
    const auto state = config.family == StateFamily::displacement
                           ? build_displacement_state(spec, amplitude, make_policy(config))
                           : build_eigenstate(spec, amplitude, make_policy(config));
    return {0, echo_line(config) + render_state_csv(state), ""};
}

RunResult run_sweep(const RunConfig& config) {
    const auto spec = make_spec(config);
    const auto grid = make_grid(config);
    const auto records = sweep(spec, grid, make_policy(config));
    RunResult result{0, echo_line(config) + render_sweep_csv(records, spec), ""};
    const bool any_ok =
        std::any_of(records.begin(), records.end(),
                    [](const SweepRecord& r) { return r.status == SweepStatus::ok; });
    if (!any_ok) {
        result.exit_code = 2;
        result.diagnostic = "error: no sweep row succeeded; first failure: " +
                            (records.empty() ? std::string("empty grid") : records.front().message);
    }
    return result;
}

RunResult run_series(const RunConfig& config) {
    const auto spec = make_spec(config);
    const auto policy = make_policy(config);
    const double beta = config.beta_re;
    const auto ser = series(spec, beta, policy);
    const auto state = build_displacement_state(spec, beta, policy);
    const auto recon = reconcile_series(ser, moments_direct(state), beta);

    std::string out = echo_line(config);
    out += "# series\n";
    out += "name,value\n";
    out += "I1," + fmt_g(ser.I1) + "\n";
    out += "I2," + fmt_g(ser.I2) + "\n";
    out += "I3," + fmt_g(ser.I3) + "\n";
    out += "I4," + fmt_g(ser.I4) + "\n";
    out += "I5," + fmt_g(ser.I5) + "\n";
    out += "terms_used," + std::to_string(ser.terms_used) + "\n";
    out += "# reconciliation\n";
    out += "identity,direct,predicted,residual,skipped\n";
    for (const auto& row : recon.rows) {
        out += row.label + "," + fmt_g(row.direct) + "," + fmt_g(row.predicted) + "," +
               fmt_g(row.residual) + "," + (row.skipped ? "yes" : "no") + "\n";
    }
    out += std::string("# flagged_reading=") +
           (recon.flagged == A4Reading::power_counting ? "power_counting" : "as_printed") + "\n";
    return {0, out, ""};
}

RunResult run_verify(const RunConfig& config) {
    const auto spec = make_spec(config);
    const std::complex<double> beta{config.beta_re, config.beta_im};
    const auto outcome = verify_battery(spec, beta, config.dim, make_policy(config));

    std::string out = echo_line(config);
    auto line = [&out](const std::string& name, double value, double threshold) {
        out += name + "=" + fmt_g(value) + " threshold=" + fmt_g(threshold) +
               (value < threshold ? " status=pass" : " status=fail") + "\n";
    };
    line("comm_N_A", outcome.comm_n_a, kCommutatorThreshold);
    line("comm_N_Adag", outcome.comm_n_a_dag, kCommutatorThreshold);
    line("comm_A_Adag", outcome.comm_a_a_dag, kCommutatorThreshold);
    line("comm_A_Bdag", outcome.comm_a_b_dag, kCommutatorThreshold);
    line("comm_B_Adag", outcome.comm_b_a_dag, kCommutatorThreshold);
    line("eigen_residual", outcome.eigen_residual, kEigenThreshold);
    line("bch_deficit_direct", outcome.bch_deficit_direct, kBchThreshold);
    line("bch_deficit_dual", outcome.bch_deficit_dual, kBchThreshold);
    line("normal_ordering", outcome.normal_ordering, kNormalOrderingThreshold);
    out += std::string("verdict=") + (outcome.pass ? "pass" : "fail") + "\n";
    return {outcome.pass ? 0 : 1, out,
            outcome.pass ? "" : "error: verification battery has failing residuals"};
}

} // namespace

VerifyOutcome verify_battery(const NonlinearitySpec& spec, std::complex<double> beta, int dim,
                             const TruncationPolicy& policy) {
    if (dim < 8) throw InvalidArgument("verify_battery: dim must be >= 8");
    VerifyOutcome outcome;

    const auto fam = build_operators(spec, dim);
    const auto comm = check_commutators(fam);
    outcome.comm_n_a = comm.n_with_a;
    outcome.comm_n_a_dag = comm.n_with_a_dag;
    outcome.comm_a_a_dag = comm.a_with_a_dag;
    outcome.comm_a_b_dag = comm.a_with_b_dag;
    outcome.comm_b_a_dag = comm.b_with_a_dag;

    const auto eigen_state = build_eigenstate(spec, beta, policy);
    const auto displacement_state = build_displacement_state(spec, beta, policy);
    const auto eigen_vec = embed(eigen_state, dim);
    const auto displacement_vec = embed(displacement_state, dim);

    outcome.eigen_residual = eigen_residual(eigen_vec, spec, beta, dim);
    outcome.bch_deficit_direct =
        1.0 - overlap(displace_exact(spec, beta, DisplacementKind::direct, dim), displacement_vec);
    outcome.bch_deficit_dual =
        1.0 - overlap(displace_exact(spec, beta, DisplacementKind::dual, dim), eigen_vec);

    using W = Ladder;
    const std::vector<W> a2a2dag{W::lower, W::lower, W::raise, W::raise};
    const std::vector<W> a2dag_a2{W::raise, W::raise, W::lower, W::lower};
    const std::vector<W> ada{W::raise, W::lower};
    const auto value = quadratic_form(displacement_vec, a2a2dag) -
                       quadratic_form(displacement_vec, a2dag_a2) -
                       4.0 * quadratic_form(displacement_vec, ada) - 2.0;
    outcome.normal_ordering = std::abs(value);

    outcome.pass = comm.max_residual() < kCommutatorThreshold &&
                   outcome.eigen_residual < kEigenThreshold &&
                   outcome.bch_deficit_direct < kBchThreshold &&
                   outcome.bch_deficit_dual < kBchThreshold &&
                   outcome.normal_ordering < kNormalOrderingThreshold;
    return outcome;
}

RunResult run(const RunConfig& config) {
    try {
        validate(config);
        switch (config.command) {
        case RunConfig::Command::state: return run_state(config);
        case RunConfig::Command::sweep: return run_sweep(config);
        case RunConfig::Command::series: return run_series(config);
        case RunConfig::Command::verify: return run_verify(config);
        }
        throw InvalidArgument("config: unknown subcommand");
    } catch (const SingularDenominator& e) {
        return {2, "", std::string("error: ") + e.what()};
    } catch (const Divergence& e) {
        return {2, "", std::string("error: ") + e.what()};
    } catch (const ZeroNonlinearity& e) {
        return {2, "", std::string("error: ") + e.what()};
    } catch (const TailOverflow& e) {
        return {2, "", std::string("error: ") + e.what()};
    } catch (const std::exception& e) {
        return {1, "", std::string("error: ") + e.what()};
    }
}

} // namespace nlcs
