/* C interface of the igabeam library. All functions return an igab_status;
 * on failure igab_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Handles are opaque and owned by
 * the caller, who releases them with the matching *_free function. */
#ifndef IGABEAM_H
#define IGABEAM_H

#include <stddef.h>

#if defined(IGABEAM_BUILDING_LIBRARY)
#define IGAB_API __attribute__((visibility("default")))
#else
#define IGAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum igab_status {
  IGAB_OK = 0,
  IGAB_ERR_INVALID_ARGUMENT = 1, /* bad parameter or configuration value */
  IGAB_ERR_PARSE = 2,            /* malformed configuration text */
  IGAB_ERR_IO = 3,               /* file could not be read or written */
  IGAB_ERR_SOLVER = 4,           /* the time integration failed */
  IGAB_ERR_BUFFER_TOO_SMALL = 5, /* output buffer too small; see the size out-parameter */
  IGAB_ERR_INTERNAL = 6
} igab_status;

typedef enum igab_variant {
  IGAB_VARIANT_CN_NL = 0, /* consistent mass, Newton on the rotational balance */
  IGAB_VARIANT_LU_NL = 1, /* lumped predictor-multicorrector with Newton */
  IGAB_VARIANT_LU_L = 2   /* lumped, linearized rotational balance */
} igab_variant;

typedef struct igab_scenario igab_scenario;
typedef struct igab_sim igab_sim;

typedef struct igab_step_stats {
  int newton_iterations;
  int corrector_passes;
} igab_step_stats;

typedef struct igab_run_summary {
  long steps;
  double final_time;
  double final_probe_displacement[3];
  long newton_iterations_total;
  long single_newton_steps;
  int newton_iterations_max;
  long corrector_passes_total;
  double max_orthonormality_error;
  double wall_seconds;
} igab_run_summary;

IGAB_API const char* igab_version(void);
IGAB_API const char* igab_last_error(void);
IGAB_API const char* igab_status_string(igab_status status);
IGAB_API igab_status igab_parse_variant(const char* name, igab_variant* out);

/* Scenarios */
IGAB_API igab_status igab_scenario_from_json(const char* json_text, igab_scenario** out);
IGAB_API igab_status igab_scenario_from_file(const char* path, igab_scenario** out);
IGAB_API igab_status igab_scenario_preset(const char* name, igab_scenario** out);
IGAB_API igab_status igab_scenario_set_variant(igab_scenario* scenario, igab_variant variant);
IGAB_API igab_status igab_scenario_set_total_time(igab_scenario* scenario, double seconds);
/* Writes the JSON echo (NUL-terminated) into buf; *size receives the needed size including the NUL.
 * buf may be NULL with capacity 0 to query the size. */
IGAB_API igab_status igab_scenario_to_json(const igab_scenario* scenario, char* buf, size_t capacity, size_t* size);
IGAB_API void igab_scenario_free(igab_scenario* scenario);

/* Step-by-step simulation */
IGAB_API igab_status igab_sim_create(const igab_scenario* scenario, igab_sim** out);
IGAB_API igab_status igab_sim_step(igab_sim* sim, long steps, igab_step_stats* last);
IGAB_API igab_status igab_sim_time(const igab_sim* sim, double* time);
IGAB_API igab_status igab_sim_displacement(const igab_sim* sim, double u, double out[3]);
IGAB_API igab_status igab_sim_linear_momentum(const igab_sim* sim, double out[3]);
IGAB_API igab_status igab_sim_angular_momentum(const igab_sim* sim, const double origin[3], double out[3]);
IGAB_API void igab_sim_free(igab_sim* sim);

/* Drivers. Each writes its CSV and JSON files into out_dir (created if missing). */
IGAB_API igab_status igab_run(const igab_scenario* scenario, const char* out_dir, igab_run_summary* summary);
/* variant_override < 0 keeps the variants listed in the study file. */
IGAB_API igab_status igab_converge(const char* study_path, int variant_override, const char* out_dir, int verbose);
/* boundaries: comma-separated pairs from {dd, dn, nn}. */
IGAB_API igab_status igab_spectral(const int* degrees, size_t num_degrees, const int* ns, size_t num_ns,
                                   const char* boundaries, const char* out_dir);
IGAB_API igab_status igab_spectral_radius(int degree, int n, const char* boundary, double* rho);
IGAB_API igab_status igab_bench(const char* matrix_path, int variant_override, const char* out_dir, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* IGABEAM_H */
