/* C interface to the frictionless-cooling synthesis library.
 *
 * Every function returns an fc_status. On failure the thread-local message
 * from fc_last_error() describes what went wrong. Objects are opaque handles
 * released with the matching *_destroy function; destroy functions accept NULL.
 * All quantities are in rescaled oscillator units (hbar = m = omega0 = 1).
 */
#ifndef FCOOL_FCOOL_H
#define FCOOL_FCOOL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FCOOL_BUILDING_LIBRARY)
#    define FCOOL_API __declspec(dllexport)
#  else
#    define FCOOL_API __declspec(dllimport)
#  endif
#else
#  define FCOOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fc_status {
  FC_OK = 0,
  FC_ERR_INVALID_ARGUMENT = 1,
  FC_ERR_DOMAIN = 2,
  FC_ERR_INFEASIBLE = 3,
  FC_ERR_UNSUPPORTED_REGION = 4,
  FC_ERR_CONVERGENCE = 5,
  FC_ERR_INCONSISTENCY = 6,
  FC_ERR_RESOLUTION = 7,
  FC_ERR_BOUNDARY = 8,
  FC_ERR_MAXIMUM_PRINCIPLE = 9,
  FC_ERR_PARSE = 10,
  FC_ERR_INTERNAL = 11
} fc_status;

typedef enum fc_bound_mode { FC_BOUND_UNBOUNDED = 0, FC_BOUND_SYMMETRIC_UNIT = 1 } fc_bound_mode;
typedef enum fc_method { FC_METHOD_RK4 = 0, FC_METHOD_RK45 = 1 } fc_method;
typedef enum fc_segment_kind { FC_SEGMENT_IMPULSE = 0, FC_SEGMENT_BANG = 1, FC_SEGMENT_SINGULAR = 2 } fc_segment_kind;
typedef enum fc_pde_protocol {
  FC_PDE_BANG_BANG = 0,
  FC_PDE_BANG_SINGULAR_BANG = 1,
  FC_PDE_UNBOUNDED = 2
} fc_pde_protocol;

typedef struct fc_problem fc_problem;
typedef struct fc_protocol fc_protocol;
typedef struct fc_trajectory fc_trajectory;
typedef struct fc_text fc_text;

FCOOL_API const char* fc_status_string(fc_status status);
FCOOL_API const char* fc_last_error(void);
FCOOL_API const char* fc_version(void);

/* Owned text (JSON/CSV documents). */
FCOOL_API const char* fc_text_data(const fc_text* text);
FCOOL_API size_t fc_text_size(const fc_text* text);
FCOOL_API void fc_text_destroy(fc_text* text);

/* Problems. has_horizon = 0 leaves the final time free. */
FCOOL_API fc_status fc_problem_create(double gamma, int has_horizon, double horizon, fc_bound_mode mode,
                                      fc_problem** out);
FCOOL_API void fc_problem_destroy(fc_problem* problem);
FCOOL_API double fc_problem_gamma(const fc_problem* problem);
FCOOL_API int fc_problem_horizon(const fc_problem* problem, double* horizon);
FCOOL_API fc_bound_mode fc_problem_bound_mode(const fc_problem* problem);

/* Protocols. */
typedef struct fc_segment {
  fc_segment_kind kind;
  double value;    /* impulse weight, or bang control (+1/-1); unused for singular */
  double duration; /* zero for impulses */
} fc_segment;

FCOOL_API fc_status fc_protocol_create(fc_protocol** out);
FCOOL_API void fc_protocol_destroy(fc_protocol* protocol);
FCOOL_API fc_status fc_protocol_add_impulse(fc_protocol* protocol, double weight);
FCOOL_API fc_status fc_protocol_add_bang(fc_protocol* protocol, double u, double duration);
FCOOL_API fc_status fc_protocol_add_singular(fc_protocol* protocol, double duration);
FCOOL_API size_t fc_protocol_segment_count(const fc_protocol* protocol);
FCOOL_API fc_status fc_protocol_segment(const fc_protocol* protocol, size_t index, fc_segment* out);
FCOOL_API double fc_protocol_duration(const fc_protocol* protocol);

/* JSON documents {gamma, horizon, bound_mode, segments[]}. */
FCOOL_API fc_status fc_document_parse(const char* json, size_t length, fc_problem** problem, fc_protocol** protocol);
FCOOL_API fc_status fc_document_write(const fc_problem* problem, const fc_protocol* protocol, fc_text** out);

/* Unbounded control: impulse - singular - impulse. */
typedef struct fc_unbounded_summary {
  double gamma;
  double horizon;
  double B;
  double c;
  double initial_weight;
  double final_weight;
  double terminal_velocity;
  double average_energy;
} fc_unbounded_summary;

FCOOL_API fc_status fc_unbounded_synthesize(double gamma, double horizon, fc_unbounded_summary* summary,
                                            fc_protocol** protocol /* nullable */);
FCOOL_API fc_status fc_unbounded_energy(double gamma, double horizon, double* energy);
FCOOL_API fc_status fc_free_time_optimum(double gamma, double* horizon, double* c);
FCOOL_API fc_status fc_singular_state(double gamma, double horizon, double t, double* x1, double* x2);

/* Bounded control |u| <= 1. */
typedef struct fc_min_time_summary {
  double T1;
  double T2;
  double T_min;
  double x1_joint;
} fc_min_time_summary;

typedef struct fc_bounded_summary {
  double gamma;
  double horizon;
  double c;
  double T1;
  double T2;
  double T3;
  double x1_a;
  double x1_b;
  double average_energy;
} fc_bounded_summary;

FCOOL_API fc_status fc_min_time(double gamma, fc_min_time_summary* summary, fc_protocol** protocol /* nullable */);
FCOOL_API fc_status fc_bounded_synthesize(double gamma, double horizon, fc_bounded_summary* summary,
                                          fc_protocol** protocol /* nullable */);
FCOOL_API fc_status fc_bounded_state(double gamma, double horizon, double t, double* x1, double* x2);
FCOOL_API fc_status fc_joint_above_c0_arc(double gamma, int* above);

/* Ermakov integration. */
typedef struct fc_integrator_config {
  fc_method method;
  double step;      /* <= 0 selects min(1e-4, T / 1e5) */
  double tolerance; /* RK45 only */
  uint64_t max_steps;
  uint64_t record_every;
} fc_integrator_config;

typedef struct fc_sample {
  double t;
  double x1;
  double x2;
  double u;
  double running_cost;
} fc_sample;

typedef struct fc_boundary_report {
  double initial_position;
  double initial_velocity;
  double final_position;
  double final_velocity;
} fc_boundary_report;

FCOOL_API void fc_integrator_config_default(fc_integrator_config* cfg);
FCOOL_API fc_status fc_simulate(const fc_problem* problem, const fc_protocol* protocol,
                                const fc_integrator_config* cfg /* nullable */, fc_trajectory** out);
FCOOL_API void fc_trajectory_destroy(fc_trajectory* trajectory);
FCOOL_API size_t fc_trajectory_size(const fc_trajectory* trajectory);
FCOOL_API fc_status fc_trajectory_sample(const fc_trajectory* trajectory, size_t index, fc_sample* out);
FCOOL_API double fc_trajectory_cost(const fc_trajectory* trajectory);
FCOOL_API double fc_trajectory_average_energy(const fc_trajectory* trajectory);
FCOOL_API fc_status fc_trajectory_boundary(const fc_trajectory* trajectory, double gamma, fc_boundary_report* out);
FCOOL_API fc_status fc_trajectory_residual(const fc_trajectory* trajectory, const fc_protocol* protocol,
                                           double* residual);
FCOOL_API fc_status fc_trajectory_write_csv(const fc_trajectory* trajectory, fc_text** out);

/* Reports. all_passed is set to 1 when every check holds. */
FCOOL_API fc_status fc_pmp_report(double gamma, int has_horizon, double horizon, size_t samples, uint64_t seed,
                                  fc_text** json, int* all_passed);

typedef struct fc_schrodinger_options {
  double gamma;
  unsigned level;
  size_t points;
  double half_width; /* 0 selects 10 gamma */
  size_t steps;      /* 0 selects 2e5 */
  fc_pde_protocol protocol;
  double horizon;    /* fixed-time protocols only */
  int rectangular_impulses;
  unsigned n_max;
  const double* snapshot_times;
  size_t snapshot_count;
} fc_schrodinger_options;

FCOOL_API void fc_schrodinger_options_default(fc_schrodinger_options* options);
FCOOL_API fc_status fc_schrodinger_run(const fc_schrodinger_options* options, fc_text** json,
                                       fc_text** snapshots_csv /* nullable */, int* all_passed);

typedef struct fc_verify_options {
  double gamma;
  fc_integrator_config integrator;
  const char* protocol_json; /* nullable */
  size_t protocol_json_length;
  int schrodinger;
  fc_schrodinger_options schrodinger_options;
  uint64_t seed;
} fc_verify_options;

FCOOL_API void fc_verify_options_default(fc_verify_options* options);
FCOOL_API fc_status fc_verify(const fc_verify_options* options, fc_text** json, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* FCOOL_FCOOL_H */
