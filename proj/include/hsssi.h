/* C interface of the hsssi library: heavy-tailed particle systems, their
 * occupation-time functionals and the stable H-sssi limit laws.
 *
 * Conventions: every function returns a status code; outputs are written
 * through pointers. Handles are opaque and freed by the matching _free
 * call. hsssi_last_error() describes the most recent failure on the calling
 * thread. Strings returned through char** are owned by the caller and
 * released with hsssi_string_free().
 */
#ifndef HSSSI_H
#define HSSSI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hsssi_status {
  HSSSI_OK = 0,
  HSSSI_ERR_INVALID_ARGUMENT = 1,
  HSSSI_ERR_VALIDATION = 2,
  HSSSI_ERR_RUNTIME = 3,
  HSSSI_ERR_IO = 4
} hsssi_status;

const char* hsssi_version(void);
const char* hsssi_last_error(void);
void hsssi_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Levy model handle. JSON spec:
 *   {"kind":"pure-stable","beta":1.5}
 *   {"kind":"rv-density","beta":1.5,"f":"log"}                        */
typedef struct hsssi_model hsssi_model;
hsssi_status hsssi_model_create(const char* json_spec, hsssi_model** out);
void hsssi_model_free(hsssi_model* m);
hsssi_status hsssi_model_psi(const hsssi_model* m, double z, double* out);
hsssi_status hsssi_model_psi_scaled(const hsssi_model* m, double T, double z,
                                    double* out);

/* ------------------------------------------------------------------ */
/* Test function handle. JSON spec mirrors the experiment config "phi"
 * object: {"kind":"haar"}, {"kind":"indicator","terms":[...]},
 * {"kind":"gaussian-diff",...} or {"kind":"heavy-pair",...}.          */
typedef struct hsssi_phi hsssi_phi;
hsssi_status hsssi_phi_create(const char* json_spec, hsssi_phi** out);
void hsssi_phi_free(hsssi_phi* p);
hsssi_status hsssi_phi_eval(const hsssi_phi* p, double y, double* out);
hsssi_status hsssi_phi_integral(const hsssi_phi* p, double* out);
hsssi_status hsssi_phi_fourier(const hsssi_phi* p, double w, double* re, double* im);

/* Second-order constant c(phi). convention: "sqrt-pi-inverse" (default,
 * the empirically confirmed one), "proposition2" or "plain-l2".
 * Returns HSSSI_ERR_VALIDATION when the defining integral diverges.   */
hsssi_status hsssi_c_phi(const hsssi_phi* p, const hsssi_model* m,
                         const char* convention, double* value, double* integral);

/* ------------------------------------------------------------------ */
/* Scalar operations.                                                  */

/* Exact local-time moment E L_t(x)^n of the standard beta-stable motion. */
hsssi_status hsssi_local_time_moment(double beta, double t, double x, int n,
                                     double* out);

/* Hurst exponent; family is one of "first-order", "second-order",
 * "heavy-symmetric", "heavy-asymmetric".                               */
hsssi_status hsssi_hurst(const char* family, double alpha, double beta, double gamma1,
                         double gamma2, double* out);

/* Theorem normalizations (scale, C_T, D_T) at level T with the given
 * slowly-varying presets ("constant", "log", "iterated-log").          */
hsssi_status hsssi_normalization(const char* family, double T, double alpha,
                                 double beta, double gamma_min, const char* f_preset,
                                 const char* L_preset, const char* g1_preset,
                                 double* scale, double* C_T, double* D_T);

/* ------------------------------------------------------------------ */
/* Config-driven operations. The config JSON schema is documented in the
 * README; unknown keys are rejected and a seed is mandatory.           */

/* Validates a full experiment config; on HSSSI_ERR_VALIDATION the report
 * lists one violation per line.                                       */
hsssi_status hsssi_validate_config(const char* config_json, char** report);

/* Runs an experiment end to end, writing artifacts into out_dir and
 * returning the summary JSON. check_failures receives the number of
 * failed acceptance checks (0 when everything passed).                 */
hsssi_status hsssi_run_experiment(const char* config_json, const char* out_dir,
                                  char** summary_json, int* check_failures);

/* Simulates one trajectory and writes the binary dump (little-endian
 * header dt/horizon/count, then count float64 positions).              */
hsssi_status hsssi_simulate_path_dump(const char* model_json, double horizon,
                                      double dt, uint64_t seed, uint64_t stream,
                                      const char* out_file);

/* Draws one particle field and writes CSV rows (x, z) after a schema
 * header. request: {"alpha":..,"epsilon":..,"L":{"preset":..},
 * "window":[lo,hi],"seed":..,"stream":..}                              */
hsssi_status hsssi_sample_particles_csv(const char* request_json,
                                        const char* out_file);

/* Limit-law characteristic function on a theta grid. request:
 *   {"family":"first-order","alpha":..,"beta":..,"gamma1":..,"gamma2":..,
 *    "kappa":..,"theta":[...],"coeffs":[...],"times":[...],"seed":..,
 *    "pool":{...}}
 * result: {"theta":[...],"re":[...],"im":[...],"se":[...],"inner_J":..}  */
hsssi_status hsssi_cf_limit(const char* request_json, char** result_json);

/* Compares a sample JSONL stream against a stored CF target CSV.
 * request: {"samples":"file.jsonl","target":"file.csv","coeffs":[...],
 *           "times":[...],"k_sigma":3.0,"fit_scale":true,"alpha":1.5}
 * result: {"sup_distance":..,"pass":..,"fitted_scale":..}              */
hsssi_status hsssi_compare(const char* request_json, char** result_json);

/* Aggregates every summary.json under dir into one report JSON.        */
hsssi_status hsssi_report_run_dir(const char* dir, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HSSSI_H */
