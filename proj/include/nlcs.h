/* nlcs.h - C interface to the nonlinear-coherent-state toolkit.
 *
 * All functions are thread-compatible: handles are immutable after creation
 * and may be shared across threads; error messages are thread-local.
 * Every function that can fail returns an nlcs_status; out-parameters are
 * written only on NLCS_OK.
 */
#ifndef NLCS_H
#define NLCS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlcs_status {
    NLCS_OK = 0,
    NLCS_ERR_INVALID_ARGUMENT = 1,
    NLCS_ERR_SINGULAR_DENOMINATOR = 2,
    NLCS_ERR_ZERO_NONLINEARITY = 3,
    NLCS_ERR_DIVERGENCE = 4,
    NLCS_ERR_TAIL_OVERFLOW = 5,
    NLCS_ERR_IO = 6,
    NLCS_ERR_INTERNAL = 7
} nlcs_status;

typedef enum nlcs_family {
    NLCS_FAMILY_EIGENSTATE = 0,
    NLCS_FAMILY_DISPLACEMENT = 1
} nlcs_family;

/* Opaque handles. */
typedef struct nlcs_spec nlcs_spec;
typedef struct nlcs_state nlcs_state;

/* Human-readable message for the most recent failure on this thread. */
const char* nlcs_last_error(void);

/* ---- nonlinearity specifications ------------------------------------- */

nlcs_spec* nlcs_spec_identity(void);
nlcs_spec* nlcs_spec_trapped_ion(double eta);
/* values[k] holds f(k+1), k = 0 .. count-1. */
nlcs_spec* nlcs_spec_table(const double* values, int count);
nlcs_spec* nlcs_spec_table_file(const char* path);
nlcs_status nlcs_spec_set_denom_epsilon(nlcs_spec* spec, double eps);
void nlcs_spec_free(nlcs_spec* spec);

nlcs_status nlcs_f_value(const nlcs_spec* spec, int n, double* out);
/* f(n)! as sign (-1/0/+1) and ln|value|. */
nlcs_status nlcs_f_factorial(const nlcs_spec* spec, int n, int* sign_out, double* log_magnitude_out);

/* ---- state construction ----------------------------------------------- */

typedef struct nlcs_truncation {
    int initial_floor; /* starting order floor */
    int max_order;     /* hard cap before divergence is declared */
    double tail_tol;   /* relative tail weight tolerance */
} nlcs_truncation;

nlcs_truncation nlcs_truncation_default(void);

nlcs_status nlcs_state_build(const nlcs_spec* spec, nlcs_family family,
                             double amplitude_re, double amplitude_im,
                             const nlcs_truncation* policy /* NULL for defaults */,
                             nlcs_state** out);
void nlcs_state_free(nlcs_state* state);

int nlcs_state_truncation_order(const nlcs_state* state);
double nlcs_state_tail_estimate(const nlcs_state* state);
double nlcs_state_norm_log(const nlcs_state* state);
/* c_n; exact zero beyond the truncation order. */
nlcs_status nlcs_state_coefficient(const nlcs_state* state, int n, double* re, double* im);

/* ---- analysis ---------------------------------------------------------- */

typedef struct nlcs_moments {
    double mean_a_re, mean_a_im;
    double mean_a2_re, mean_a2_im;
    double mean_a4_re, mean_a4_im;
    double nbar;
    double a2dag_a2;
} nlcs_moments;

nlcs_status nlcs_state_moments(const nlcs_state* state, nlcs_moments* out);

typedef struct nlcs_series {
    double I1, I2, I3, I4, I5;
    int terms_used;
} nlcs_series;

/* The displacement-state moment series at real beta. */
nlcs_status nlcs_series_eval(const nlcs_spec* spec, double beta,
                             const nlcs_truncation* policy, nlcs_series* out);

typedef struct nlcs_report {
    double F1, G1, F2_printed, G2_printed;
    double var_X1, var_Y1, var_X2, var_Y2, comm_bound;
    int has_g2;                 /* 0 for vacuum: g2 undefined, fields below NaN */
    double g2_true, g2_printed;
    int squeezed_X1, squeezed_Y1, squeezed_X2, squeezed_Y2, sub_poissonian;
} nlcs_report;

/* Full indicator report for the displacement state at real beta. */
nlcs_status nlcs_squeezing_report(const nlcs_spec* spec, double beta,
                                  const nlcs_truncation* policy, nlcs_report* out);

/* ---- oracle verification ---------------------------------------------- */

typedef struct nlcs_verify_result {
    double comm_n_a;        /* [N,A]+A          safe-block max residual */
    double comm_n_a_dag;    /* [N,A']-A'                                */
    double comm_a_a_dag;    /* [A,A']-diag rhs                          */
    double comm_a_b_dag;    /* [A,B']-1                                 */
    double comm_b_a_dag;    /* [B,A']-1                                 */
    double eigen_residual;  /* ||(A-alpha)|alpha>||, closed-form state  */
    double bch_deficit_direct; /* 1 - overlap(exp, closed form), both exponentials */
    double bch_deficit_dual;
    double normal_ordering; /* <a^2 a'^2> - <a'^2 a^2> - 4<a'a> - 2     */
    int pass;
} nlcs_verify_result;

nlcs_status nlcs_verify(const nlcs_spec* spec, double beta, int dim, nlcs_verify_result* out);

/* ---- command surface (what the CLI prints) ----------------------------- */

typedef enum nlcs_command {
    NLCS_CMD_STATE = 0,
    NLCS_CMD_SWEEP = 1,
    NLCS_CMD_SERIES = 2,
    NLCS_CMD_VERIFY = 3
} nlcs_command;

typedef enum nlcs_kind {
    NLCS_KIND_IDENTITY = 0,
    NLCS_KIND_TRAPPED_ION = 1,
    NLCS_KIND_TABLE = 2
} nlcs_kind;

typedef struct nlcs_run_config {
    int command;            /* nlcs_command */
    int kind;               /* nlcs_kind */
    const char* table_path; /* required for NLCS_KIND_TABLE */
    double eta;
    double beta_re, beta_im;
    double beta_min, beta_max;
    int beta_steps;
    int family;             /* nlcs_family; `state` only */
    int nmax;
    double tail_tol;
    double denom_epsilon;
    int dim;                /* `verify` only */
} nlcs_run_config;

/* Defaults for the given command (trapped-ion eta=0.2, displacement family,
 * beta 0.5, grid 0.02..1 in 50 steps, nmax 4096, tail_tol 1e-16,
 * denom_epsilon 1e-12, dim 32). */
nlcs_run_config nlcs_run_config_default(int command);

/* Execute one command. Returns the process exit code (0 ok, 1 invalid config
 * or verification failure, 2 numerical abort). *output receives the full
 * text payload, *diagnostic the one-line stderr message (empty when clean);
 * both are malloc'd, free with nlcs_string_free, and both are written even
 * on failure. */
int nlcs_run(const nlcs_run_config* config, char** output, char** diagnostic);
void nlcs_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NLCS_H */
