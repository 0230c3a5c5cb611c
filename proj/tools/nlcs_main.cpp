// Command-line front end. All numerics live behind the C API; this file only
// parses flags, forwards a run config, and routes the text output.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlcs.h"

namespace {

struct Options {
    std::string nonlinearity = "trapped-ion";
    double eta = 0.2;
    double beta = 0.5;
    double beta_im = 0.0;
    double beta_min = 0.02;
    double beta_max = 1.0;
    int beta_steps = 50;
    std::string family = "displacement";
    int nmax = 4096;
    double tail_tol = 1e-16;
    double denom_epsilon = 1e-12;
    int dim = 32;
    std::string output;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--nonlinearity", opt.nonlinearity,
                    "identity | trapped-ion | table:<path>")
        ->capture_default_str();
    cmd->add_option("--eta", opt.eta, "Lamb-Dicke parameter for trapped-ion")
        ->capture_default_str();
    cmd->add_option("--nmax", opt.nmax, "truncation order cap")->capture_default_str();
    cmd->add_option("--tail_tol", opt.tail_tol, "relative tail tolerance")->capture_default_str();
    cmd->add_option("--denom_epsilon", opt.denom_epsilon,
                    "guard threshold for the trapped-ion denominator")
        ->capture_default_str();
    cmd->add_option("--output", opt.output, "write to file instead of standard output");
}

int fill_kind(const Options& opt, nlcs_run_config& config, std::string& table_path) {
    if (opt.nonlinearity == "identity") {
        config.kind = NLCS_KIND_IDENTITY;
    } else if (opt.nonlinearity == "trapped-ion") {
        config.kind = NLCS_KIND_TRAPPED_ION;
    } else if (opt.nonlinearity.rfind("table:", 0) == 0) {
        config.kind = NLCS_KIND_TABLE;
        table_path = opt.nonlinearity.substr(6);
        config.table_path = table_path.c_str();
    } else {
        std::cerr << "error: unknown nonlinearity '" << opt.nonlinearity
                  << "' (expected identity, trapped-ion, or table:<path>)\n";
        return 1;
    }
    return 0;
}

int execute(int command, const Options& opt) {
    nlcs_run_config config = nlcs_run_config_default(command);
    std::string table_path;
    if (fill_kind(opt, config, table_path) != 0) return 1;
    config.eta = opt.eta;
    config.beta_re = opt.beta;
    config.beta_im = opt.beta_im;
    config.beta_min = opt.beta_min;
    config.beta_max = opt.beta_max;
    config.beta_steps = opt.beta_steps;
    config.family = opt.family == "eigenstate" ? NLCS_FAMILY_EIGENSTATE : NLCS_FAMILY_DISPLACEMENT;
    config.nmax = opt.nmax;
    config.tail_tol = opt.tail_tol;
    config.denom_epsilon = opt.denom_epsilon;
    config.dim = opt.dim;

    char* output = nullptr;
    char* diagnostic = nullptr;
    int code = nlcs_run(&config, &output, &diagnostic);

    if (diagnostic && diagnostic[0] != '\0') std::cerr << diagnostic << "\n";
    if (output && output[0] != '\0') {
        if (opt.output.empty()) {
            std::cout << output;
        } else {
            std::ofstream file(opt.output, std::ios::binary);
            if (!file) {
                std::cerr << "error: cannot open '" << opt.output << "' for writing\n";
                code = code == 0 ? 1 : code;
            } else {
                file << output;
            }
        }
    }
    nlcs_string_free(output);
    nlcs_string_free(diagnostic);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear coherent state toolkit"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* state = app.add_subcommand("state", "build one state and print its expansion");
    state->add_option("--beta", opt.beta, "amplitude (real part)")->capture_default_str();
    state->add_option("--beta_im", opt.beta_im, "amplitude (imaginary part)")->capture_default_str();
    state->add_option("--family", opt.family, "displacement | eigenstate")
        ->check(CLI::IsMember({"displacement", "eigenstate"}))
        ->capture_default_str();
    add_common(state, opt);

    CLI::App* sweep = app.add_subcommand("sweep", "indicator sweep over a beta grid (CSV)");
    sweep->add_option("--beta_min", opt.beta_min, "grid start")->capture_default_str();
    sweep->add_option("--beta_max", opt.beta_max, "grid end")->capture_default_str();
    sweep->add_option("--beta_steps", opt.beta_steps, "grid point count")->capture_default_str();
    add_common(sweep, opt);

    CLI::App* series = app.add_subcommand("series", "moment series and reconciliation at one beta");
    series->add_option("--beta", opt.beta, "amplitude (real)")->capture_default_str();
    add_common(series, opt);

    CLI::App* verify = app.add_subcommand("verify", "run the operator-algebra verification battery");
    verify->add_option("--beta", opt.beta, "amplitude used by the expansion checks")
        ->capture_default_str();
    verify->add_option("--beta_im", opt.beta_im, "amplitude (imaginary part)")->capture_default_str();
    verify->add_option("--dim", opt.dim, "truncated basis dimension")->capture_default_str();
    add_common(verify, opt);

    CLI11_PARSE(app, argc, argv);

    if (state->parsed()) return execute(NLCS_CMD_STATE, opt);
    if (sweep->parsed()) return execute(NLCS_CMD_SWEEP, opt);
    if (series->parsed()) return execute(NLCS_CMD_SERIES, opt);
    return execute(NLCS_CMD_VERIFY, opt);
}
