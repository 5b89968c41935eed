/* Public C interface to the variable-horizon coupling library.
 *
 * All entry points return a vhcm_status; on failure vhcm_last_error() gives
 * a thread-local message describing what went wrong. Handles are opaque and
 * must be released with their matching destroy function.
 */
#ifndef VHCM_H
#define VHCM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vhcm_status {
    VHCM_OK = 0,
    VHCM_ERROR = 1,       /* unexpected failure */
    VHCM_BAD_CONFIG = 2,  /* configuration / argument error */
    VHCM_NUMERIC = 3,     /* numerical failure (singular system, ...) */
    VHCM_IO = 4           /* file not found / unreadable / unwritable */
} vhcm_status;

const char* vhcm_version(void);

/* Thread-local message for the most recent failing call. */
const char* vhcm_last_error(void);

/* ---- configuration ----------------------------------------------------- */

typedef struct vhcm_config_s vhcm_config;

vhcm_status vhcm_config_default(vhcm_config** out);
vhcm_status vhcm_config_load(const char* path, vhcm_config** out);
vhcm_status vhcm_config_set(vhcm_config* cfg, const char* key, const char* value);
/* Returns NULL for unknown keys. The string stays valid until the next call
 * on the same config. */
const char* vhcm_config_get(vhcm_config* cfg, const char* key);
vhcm_status vhcm_config_save(const vhcm_config* cfg, const char* path);
void vhcm_config_destroy(vhcm_config* cfg);

/* ---- pipeline commands -------------------------------------------------- */

/* Writes dataset.csv and generate_report.txt into out_dir. */
vhcm_status vhcm_generate(const vhcm_config* cfg, const char* out_dir);

/* Trains on a dataset file; writes model.bin, model.bin.meta, history.csv and
 * metrics.txt into out_dir. */
vhcm_status vhcm_train(const vhcm_config* cfg, const char* dataset_path, const char* out_dir);

/* Classifies one load. Exactly one of load_expr / load_csv must be non-NULL:
 * either a textual load description ("f1 x_jump=0.71", terms joined with +)
 * or a CSV of sampled load values. Writes per-node labels to out_csv. */
vhcm_status vhcm_predict(const char* model_path, const char* load_expr, const char* load_csv,
                         const char* out_csv);

/* Runs the predict -> post-process -> coupled-solve -> error-gate loop for
 * every load expression listed in specs_path (one per line) and writes the
 * report plus solution CSVs into out_dir. */
vhcm_status vhcm_verify(const char* model_path, const char* specs_path, const char* out_dir);

/* Renders SVG plots for whichever inputs are non-NULL. */
vhcm_status vhcm_report(const char* history_csv, const char* metrics_txt, const char* verify_dir,
                        const char* out_dir);

/* ---- direct numerical access -------------------------------------------- */

/* Grid, material and boundary conditions bundled into one problem handle.
 * bc is "dirichlet:<v>,dirichlet:<v>" or "dirichlet:<v>,neumann:<g>". */
typedef struct vhcm_problem_s vhcm_problem;

vhcm_status vhcm_problem_create(double length, int n, int m, double modulus, double area,
                                const char* bc, vhcm_problem** out);
void vhcm_problem_destroy(vhcm_problem* problem);

int vhcm_problem_nodes(const vhcm_problem* problem);

/* Samples a textual load expression at the n+1 grid nodes. */
vhcm_status vhcm_sample_load(const vhcm_problem* problem, const char* load_expr, double* values);

/* Coupled solve. labels is one int per node (0 local, 1 nonlocal); NULL means
 * fully local. Pass the fully-nonlocal labelling (interior nodes 1) to get
 * the reference solution. */
vhcm_status vhcm_solve_coupled(const vhcm_problem* problem, const int* labels, const double* load,
                               double* displacement);

/* Fully nonlocal reference solve. */
vhcm_status vhcm_solve_reference(const vhcm_problem* problem, const double* load, double* displacement);

/* Relative l2 error between two nodal vectors; degenerate (zero-norm)
 * references yield the absolute norm of `test` and set *degenerate to 1 when
 * the pointer is given. */
vhcm_status vhcm_relative_error(const double* reference, const double* test, int len, double* error,
                                int* degenerate);

/* Post-prediction cleanup of a 0/1 label vector (in place). */
vhcm_status vhcm_post_process(int* labels, int len, int m);

#ifdef __cplusplus
}
#endif

#endif /* VHCM_H */
