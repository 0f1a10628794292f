#ifndef NEEDLEKIT_NEEDLEKIT_H
#define NEEDLEKIT_NEEDLEKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef NK_BUILDING_LIBRARY
#    define NK_API __declspec(dllexport)
#  else
#    define NK_API __declspec(dllimport)
#  endif
#else
#  define NK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nk_status {
  NK_OK = 0,
  NK_ERR_INVALID_ARGUMENT = 1,
  NK_ERR_PRECONDITION = 2,
  NK_ERR_INFINITE_MASS = 3,
  NK_ERR_FINITE_MASS = 4,
  NK_ERR_DEGENERATE = 5,
  NK_ERR_PARSE = 6,
  NK_ERR_IO = 7,
  NK_ERR_UNSUPPORTED = 8,
  NK_ERR_INTERNAL = 9
} nk_status;

/* Message of the last failing call on this thread; "" after a success. */
NK_API const char* nk_last_error(void);
NK_API const char* nk_status_name(nk_status status);
NK_API const char* nk_version(void);

/* Strings returned through char** are owned by the caller. */
NK_API void nk_string_free(char* s);

/* ---- one-dimensional spaces and sets ---------------------------------- */

typedef struct nk_space nk_space;
typedef struct nk_set nk_set;

NK_API nk_status nk_space_from_json(const char* json, nk_space** out);
/* 1-D model spec, e.g. {"kind": "log_linear", "h": 2}. */
NK_API nk_status nk_space_from_model(const char* model_json, nk_space** out);
NK_API nk_status nk_space_to_json(const nk_space* space, char** out);
NK_API nk_status nk_space_domain(const nk_space* space, double* lo, double* hi);
NK_API void nk_space_free(nk_space* space);

NK_API nk_status nk_set_from_json(const char* json, nk_set** out);
NK_API nk_status nk_set_to_json(const nk_set* set, char** out);
NK_API void nk_set_free(nk_set* set);

/* NK_ERR_INFINITE_MASS when the set meets a non-decaying tail. */
NK_API nk_status nk_mass(const nk_space* space, const nk_set* set, double* out);
NK_API nk_status nk_log_mass(const nk_space* space, const nk_set* set, double* out);
NK_API nk_status nk_minkowski_content(const nk_space* space, const nk_set* set, double* out);
NK_API nk_status nk_log_minkowski_content(const nk_space* space, const nk_set* set, double* out);

typedef struct nk_entropy_report {
  double h;
  double estimator_slope;
  double r1;
  double r2;
} nk_entropy_report;

/* window may be NULL (default) or point at {r1, r2}. */
NK_API nk_status nk_volume_entropy(const nk_space* space, double x0, const double* window,
                                   nk_entropy_report* out);

typedef struct nk_check {
  double lhs;
  double rhs;
  int holds;
} nk_check;

NK_API nk_status nk_entropy_growth_check(const nk_space* space, double x0, double r, double delta,
                                         double eps, double tol, nk_check* out);

/* minimizer_json may be NULL; receives "null" when the infimum is not attained. */
NK_API nk_status nk_cheeger_constant(const nk_space* space, double* mu, int* attained,
                                     char** minimizer_json);
NK_API nk_status nk_left_half_line_ratio(const nk_space* space, double b, double* out);
NK_API nk_status nk_isoperimetric_profile(const nk_space* space, double v, double* out);
NK_API nk_status nk_milman_profile(double diameter, double v, double* out);

NK_API nk_status nk_lemma41_check(const nk_space* space, const nk_set* omega, double h, double R,
                                  nk_check* out);
/* Full report as JSON; never fails on violated preconditions, which are listed. */
NK_API nk_status nk_lemma42_report(const nk_space* space, const nk_set* omega, double h,
                                   double eps, double L, double R, char** out_json);
/* Built-in admissible instances as a JSON array. */
NK_API nk_status nk_lemma42_instances(double eps, char** out_json);

typedef struct nk_rigidity {
  int rigid;
  double b;
  int affine;
} nk_rigidity;

NK_API nk_status nk_rigidity_1d(const nk_space* space, nk_rigidity* out);

typedef struct nk_growth {
  double mass_ratio;
  double expected_ratio;
  double content_ratio;
  int holds;
} nk_growth;

NK_API nk_status nk_neighborhood_growth_check(const nk_space* space, const nk_set* omega,
                                              double sigma, double tol, nk_growth* out);

/* ---- displacement interpolation --------------------------------------- */

typedef struct nk_density nk_density;

/* key selects a wrapped entry such as "density0"; NULL means "density". */
NK_API nk_status nk_density_from_json(const nk_space* reference, const char* json, const char* key,
                                      nk_density** out);
NK_API nk_status nk_density_uniform(const nk_space* reference, const nk_set* set, nk_density** out);
NK_API void nk_density_free(nk_density* density);
NK_API nk_status nk_entropy(const nk_density* density, double* out);

/* t may be NULL for the default grid {0, 0.1, ..., 1}. csv rows: t,entropy,bound,violation. */
NK_API nk_status nk_convexity_check(const nk_space* space, const nk_density* mu0,
                                    const nk_density* mu1, const double* t, size_t nt,
                                    size_t quantiles, double* max_violation, char** csv);
NK_API nk_status nk_intermediate_set(const nk_set* omega, const nk_set* b, double t, nk_set** out);
/* csv rows: t,lhs,rhs,violation. */
NK_API nk_status nk_brunn_minkowski_check(const nk_space* space, const nk_set* omega,
                                          const nk_set* b, const double* t, size_t nt, double tol,
                                          int* holds, char** csv);

/* ---- localization ----------------------------------------------------- */

typedef struct nk_discrete nk_discrete;
typedef struct nk_localization nk_localization;
typedef struct nk_strip nk_strip;

NK_API nk_status nk_discrete_from_json(const char* json, nk_discrete** out);
NK_API nk_status nk_discrete_to_json(const nk_discrete* space, char** out);
NK_API size_t nk_discrete_size(const nk_discrete* space);
NK_API void nk_discrete_free(nk_discrete* space);
/* Fills n entries of mask with 0/1. */
NK_API nk_status nk_mask_from_json(const char* json, size_t n, unsigned char* mask);

NK_API nk_status nk_localize(const nk_discrete* space, const unsigned char* omega, size_t center,
                             double radius, nk_localization** out);
NK_API void nk_localization_free(nk_localization* loc);
/* needle_id,point_id,arclength,phi,mass,logdensity */
NK_API nk_status nk_localization_needles_csv(const nk_localization* loc, char** out);
/* src,dst,mass,cost */
NK_API nk_status nk_localization_flows_csv(const nk_localization* loc, char** out);
/* Cost, dual checks, disintegration and per-needle diagnostics. */
NK_API nk_status nk_localization_summary_json(const nk_localization* loc, char** out);
NK_API nk_status nk_localization_counts(const nk_localization* loc, size_t* needles,
                                        size_t* branch_points);

typedef struct nk_transport_check {
  double lipschitz_excess;
  double slackness_gap;
  double marginal_error;
  double partition_error;
} nk_transport_check;

NK_API nk_status nk_localization_check(const nk_localization* loc, nk_transport_check* out);

/* position_tol < 0 selects the default (median chain gap). */
NK_API nk_status nk_split_detect(const nk_localization* loc, double h_tol, double dir_tol,
                                 double position_tol, int* splits, char** verdict_json);

NK_API nk_status nk_strip_from_model(const char* model_json, nk_strip** out);
NK_API void nk_strip_free(nk_strip* strip);
/* New handle; free with nk_discrete_free. */
NK_API nk_status nk_strip_space(const nk_strip* strip, nk_discrete** out);
NK_API nk_status nk_strip_omega(const nk_strip* strip, unsigned char* mask);
NK_API nk_status nk_strip_wedge(const nk_strip* strip, double tilt, unsigned char* mask);
/* center, radius, cut, masses, e_discrete and the ground-truth rows. */
NK_API nk_status nk_strip_info_json(const nk_strip* strip, char** out);

/* ---- randomized suites ------------------------------------------------ */

typedef struct nk_suite_options {
  uint64_t seed;
  size_t trials;
  double tol;
  unsigned threads;  /* 0: hardware concurrency; NEEDLEKIT_THREADS caps it */
  size_t quantiles;  /* 0: default 10000 */
} nk_suite_options;

/* name: "iso", "convexity", "brunn-minkowski", "lemma41", "growth", "rigidity".
   counterexample may be NULL; it receives NULL when no trial failed. */
NK_API nk_status nk_run_suite(const char* name, const nk_suite_options* options,
                              size_t* violations, double* worst, char** csv,
                              char** counterexample);

#ifdef __cplusplus
}
#endif

#endif
