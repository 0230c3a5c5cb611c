#include "nlcs.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "nlcs/analysis.hpp"
#include "nlcs/errors.hpp"
#include "nlcs/run.hpp"

struct nlcs_spec {
    nlcs::NonlinearitySpec impl;
};

struct nlcs_state {
    nlcs::StateExpansion impl;
};

namespace {

thread_local std::string g_last_error;

nlcs_status classify(const std::exception& e) {
    g_last_error = e.what();
    if (dynamic_cast<const nlcs::SingularDenominator*>(&e)) return NLCS_ERR_SINGULAR_DENOMINATOR;
    if (dynamic_cast<const nlcs::ZeroNonlinearity*>(&e)) return NLCS_ERR_ZERO_NONLINEARITY;
    if (dynamic_cast<const nlcs::Divergence*>(&e)) return NLCS_ERR_DIVERGENCE;
    if (dynamic_cast<const nlcs::TailOverflow*>(&e)) return NLCS_ERR_TAIL_OVERFLOW;
    if (dynamic_cast<const nlcs::InvalidArgument*>(&e)) return NLCS_ERR_INVALID_ARGUMENT;
    return NLCS_ERR_INTERNAL;
}

template <typename Fn> nlcs_status guarded(Fn&& fn) {
    try {
        fn();
        return NLCS_OK;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return NLCS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        return classify(e);
    }
}

nlcs_status invalid(const char* msg) {
    g_last_error = msg;
    return NLCS_ERR_INVALID_ARGUMENT;
}

nlcs::TruncationPolicy to_policy(const nlcs_truncation* policy) {
    nlcs::TruncationPolicy out;
    if (policy) {
        out.initial_floor = policy->initial_floor;
        out.max_order = policy->max_order;
        out.tail_tol = policy->tail_tol;
    }
    return out;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlcs_spec* make_spec(nlcs::NonlinearitySpec&& spec) {
    return new (std::nothrow) nlcs_spec{std::move(spec)};
}

} // namespace

extern "C" {

const char* nlcs_last_error(void) { return g_last_error.c_str(); }

nlcs_spec* nlcs_spec_identity(void) { return make_spec(nlcs::NonlinearitySpec::identity()); }

nlcs_spec* nlcs_spec_trapped_ion(double eta) {
    nlcs_spec* out = nullptr;
    guarded([&] { out = make_spec(nlcs::NonlinearitySpec::trapped_ion(eta)); });
    return out;
}

nlcs_spec* nlcs_spec_table(const double* values, int count) {
    if (!values || count < 1) {
        invalid("nlcs_spec_table: need at least one value");
        return nullptr;
    }
    nlcs_spec* out = nullptr;
    guarded([&] {
        out = make_spec(nlcs::NonlinearitySpec::table(std::vector<double>(values, values + count)));
    });
    return out;
}

nlcs_spec* nlcs_spec_table_file(const char* path) {
    if (!path) {
        invalid("nlcs_spec_table_file: null path");
        return nullptr;
    }
    nlcs_spec* out = nullptr;
    guarded([&] { out = make_spec(nlcs::NonlinearitySpec::table_from_file(path)); });
    return out;
}

nlcs_status nlcs_spec_set_denom_epsilon(nlcs_spec* spec, double eps) {
    if (!spec) return invalid("nlcs_spec_set_denom_epsilon: null spec");
    if (!(eps > 0.0)) return invalid("nlcs_spec_set_denom_epsilon: eps must be > 0");
    return guarded([&] {
        switch (spec->impl.kind()) {
        case nlcs::NonlinearityKind::identity:
            break;
        case nlcs::NonlinearityKind::trapped_ion:
            spec->impl = nlcs::NonlinearitySpec::trapped_ion(spec->impl.eta(), eps);
            break;
        case nlcs::NonlinearityKind::table: {
            std::vector<double> values;
            values.reserve(spec->impl.max_level());
            for (int k = 1; k <= spec->impl.max_level(); ++k) values.push_back(spec->impl.f(k));
            spec->impl = nlcs::NonlinearitySpec::table(std::move(values), eps);
            break;
        }
        }
    });
}

void nlcs_spec_free(nlcs_spec* spec) { delete spec; }

nlcs_status nlcs_f_value(const nlcs_spec* spec, int n, double* out) {
    if (!spec || !out) return invalid("nlcs_f_value: null argument");
    return guarded([&] { *out = spec->impl.f(n); });
}

nlcs_status nlcs_f_factorial(const nlcs_spec* spec, int n, int* sign_out, double* log_magnitude_out) {
    if (!spec || !sign_out || !log_magnitude_out) return invalid("nlcs_f_factorial: null argument");
    return guarded([&] {
        const auto v = spec->impl.f_factorial(n);
        *sign_out = v.sign;
        *log_magnitude_out = v.sign == 0 ? 0.0 : v.log_magnitude;
    });
}

nlcs_truncation nlcs_truncation_default(void) {
    const nlcs::TruncationPolicy d;
    return {d.initial_floor, d.max_order, d.tail_tol};
}

nlcs_status nlcs_state_build(const nlcs_spec* spec, nlcs_family family, double amplitude_re,
                             double amplitude_im, const nlcs_truncation* policy, nlcs_state** out) {
    if (!spec || !out) return invalid("nlcs_state_build: null argument");
    return guarded([&] {
        const std::complex<double> amplitude{amplitude_re, amplitude_im};
        auto state = family == NLCS_FAMILY_DISPLACEMENT
                         ? nlcs::build_displacement_state(spec->impl, amplitude, to_policy(policy))
                         : nlcs::build_eigenstate(spec->impl, amplitude, to_policy(policy));
        *out = new nlcs_state{std::move(state)};
    });
}

void nlcs_state_free(nlcs_state* state) { delete state; }

int nlcs_state_truncation_order(const nlcs_state* state) {
    return state ? state->impl.truncation_n() : -1;
}

double nlcs_state_tail_estimate(const nlcs_state* state) {
    return state ? state->impl.tail_estimate() : -1.0;
}

double nlcs_state_norm_log(const nlcs_state* state) {
    return state ? state->impl.norm_log() : 0.0;
}

nlcs_status nlcs_state_coefficient(const nlcs_state* state, int n, double* re, double* im) {
    if (!state || !re || !im) return invalid("nlcs_state_coefficient: null argument");
    return guarded([&] {
        const auto c = state->impl.coefficient(n);
        *re = c.real();
        *im = c.imag();
    });
}

nlcs_status nlcs_state_moments(const nlcs_state* state, nlcs_moments* out) {
    if (!state || !out) return invalid("nlcs_state_moments: null argument");
    return guarded([&] {
        const auto m = nlcs::moments_direct(state->impl);
        out->mean_a_re = m.mean_a.real();
        out->mean_a_im = m.mean_a.imag();
        out->mean_a2_re = m.mean_a2.real();
        out->mean_a2_im = m.mean_a2.imag();
        out->mean_a4_re = m.mean_a4.real();
        out->mean_a4_im = m.mean_a4.imag();
        out->nbar = m.nbar;
        out->a2dag_a2 = m.a2dag_a2;
    });
}

nlcs_status nlcs_series_eval(const nlcs_spec* spec, double beta, const nlcs_truncation* policy,
                             nlcs_series* out) {
    if (!spec || !out) return invalid("nlcs_series_eval: null argument");
    return guarded([&] {
        const auto s = nlcs::series(spec->impl, beta, to_policy(policy));
        out->I1 = s.I1;
        out->I2 = s.I2;
        out->I3 = s.I3;
        out->I4 = s.I4;
        out->I5 = s.I5;
        out->terms_used = s.terms_used;
    });
}

nlcs_status nlcs_squeezing_report(const nlcs_spec* spec, double beta, const nlcs_truncation* policy,
                                  nlcs_report* out) {
    if (!spec || !out) return invalid("nlcs_squeezing_report: null argument");
    return guarded([&] {
        const auto pol = to_policy(policy);
        const auto ser = nlcs::series(spec->impl, beta, pol);
        const auto state = nlcs::build_displacement_state(spec->impl, beta, pol);
        const auto rep = nlcs::squeezing_report(ser, nlcs::moments_direct(state), beta);
        out->F1 = rep.F1;
        out->G1 = rep.G1;
        out->F2_printed = rep.F2_printed;
        out->G2_printed = rep.G2_printed;
        out->var_X1 = rep.var_X1;
        out->var_Y1 = rep.var_Y1;
        out->var_X2 = rep.var_X2;
        out->var_Y2 = rep.var_Y2;
        out->comm_bound = rep.comm_bound;
        out->has_g2 = rep.g2_true.has_value() ? 1 : 0;
        out->g2_true = rep.g2_true.value_or(std::nan(""));
        out->g2_printed = rep.g2_printed.value_or(std::nan(""));
        out->squeezed_X1 = rep.squeezed_X1 ? 1 : 0;
        out->squeezed_Y1 = rep.squeezed_Y1 ? 1 : 0;
        out->squeezed_X2 = rep.squeezed_X2 ? 1 : 0;
        out->squeezed_Y2 = rep.squeezed_Y2 ? 1 : 0;
        out->sub_poissonian = rep.sub_poissonian ? 1 : 0;
    });
}

nlcs_status nlcs_verify(const nlcs_spec* spec, double beta, int dim, nlcs_verify_result* out) {
    if (!spec || !out) return invalid("nlcs_verify: null argument");
    return guarded([&] {
        const auto v = nlcs::verify_battery(spec->impl, beta, dim);
        out->comm_n_a = v.comm_n_a;
        out->comm_n_a_dag = v.comm_n_a_dag;
        out->comm_a_a_dag = v.comm_a_a_dag;
        out->comm_a_b_dag = v.comm_a_b_dag;
        out->comm_b_a_dag = v.comm_b_a_dag;
        out->eigen_residual = v.eigen_residual;
        out->bch_deficit_direct = v.bch_deficit_direct;
        out->bch_deficit_dual = v.bch_deficit_dual;
        out->normal_ordering = v.normal_ordering;
        out->pass = v.pass ? 1 : 0;
    });
}

nlcs_run_config nlcs_run_config_default(int command) {
    const nlcs::RunConfig d;
    nlcs_run_config out;
    out.command = command;
    out.kind = NLCS_KIND_TRAPPED_ION;
    out.table_path = nullptr;
    out.eta = d.eta;
    out.beta_re = d.beta_re;
    out.beta_im = d.beta_im;
    out.beta_min = d.beta_min;
    out.beta_max = d.beta_max;
    out.beta_steps = d.beta_steps;
    out.family = NLCS_FAMILY_DISPLACEMENT;
    out.nmax = d.nmax;
    out.tail_tol = d.tail_tol;
    out.denom_epsilon = d.denom_epsilon;
    out.dim = d.dim;
    return out;
}

int nlcs_run(const nlcs_run_config* config, char** output, char** diagnostic) {
    if (output) *output = nullptr;
    if (diagnostic) *diagnostic = nullptr;
    if (!config || !output || !diagnostic) {
        g_last_error = "nlcs_run: null argument";
        if (diagnostic) *diagnostic = dup_string("error: null argument");
        if (output) *output = dup_string("");
        return 1;
    }

    nlcs::RunConfig rc;
    switch (config->command) {
    case NLCS_CMD_STATE: rc.command = nlcs::RunConfig::Command::state; break;
    case NLCS_CMD_SWEEP: rc.command = nlcs::RunConfig::Command::sweep; break;
    case NLCS_CMD_SERIES: rc.command = nlcs::RunConfig::Command::series; break;
    case NLCS_CMD_VERIFY: rc.command = nlcs::RunConfig::Command::verify; break;
    default:
        *output = dup_string("");
        *diagnostic = dup_string("error: unknown command");
        return 1;
    }
    switch (config->kind) {
    case NLCS_KIND_IDENTITY: rc.kind = nlcs::NonlinearityKind::identity; break;
    case NLCS_KIND_TRAPPED_ION: rc.kind = nlcs::NonlinearityKind::trapped_ion; break;
    case NLCS_KIND_TABLE: rc.kind = nlcs::NonlinearityKind::table; break;
    default:
        *output = dup_string("");
        *diagnostic = dup_string("error: unknown nonlinearity kind");
        return 1;
    }
    if (config->table_path) rc.table_path = config->table_path;
    rc.eta = config->eta;
    rc.beta_re = config->beta_re;
    rc.beta_im = config->beta_im;
    rc.beta_min = config->beta_min;
    rc.beta_max = config->beta_max;
    rc.beta_steps = config->beta_steps;
    rc.family = config->family == NLCS_FAMILY_EIGENSTATE ? nlcs::StateFamily::eigenstate
                                                         : nlcs::StateFamily::displacement;
    rc.nmax = config->nmax;
    rc.tail_tol = config->tail_tol;
    rc.denom_epsilon = config->denom_epsilon;
    rc.dim = config->dim;

    nlcs::RunResult result;
    try {
        result = nlcs::run(rc);
    } catch (const std::exception& e) {
        result = {1, "", std::string("error: ") + e.what()};
    }
    if (!result.diagnostic.empty()) g_last_error = result.diagnostic;
    *output = dup_string(result.output);
    *diagnostic = dup_string(result.diagnostic);
    if (!*output || !*diagnostic) {
        g_last_error = "out of memory";
        return 1;
    }
    return result.exit_code;
}

void nlcs_string_free(char* s) { std::free(s); }

} // extern "C"
