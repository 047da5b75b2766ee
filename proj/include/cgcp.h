/*
 * cgcp - CP-decomposed Clebsch-Gordan tensor products for SO(3) features.
 *
 * C interface to the shared library. All objects are opaque handles created
 * and destroyed through these functions; every call returns CGCP_OK or a
 * negative error code, with a human-readable message available from
 * cgcp_last_error() (thread-local).
 *
 * Vector and matrix buffers are caller-allocated doubles. Concatenated
 * feature fields are laid out degree-ascending with multiplicity channels
 * outermost per block and components m = -l..l; batched matrices are
 * row-major with the multiplicity channel as the leading dimension.
 */
#ifndef CGCP_H
#define CGCP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef CGCP_API
#if defined(_WIN32)
#define CGCP_API
#else
#define CGCP_API __attribute__((visibility("default")))
#endif
#endif

#define CGCP_OK 0
#define CGCP_ERROR_ARGUMENT (-1)  /* invalid input (bad rank, dims, spec text) */
#define CGCP_ERROR_NUMERIC (-2)   /* numerical failure (non-finite values)     */
#define CGCP_ERROR_IO (-3)        /* file read/write failure                   */
#define CGCP_ERROR_INTERNAL (-4)  /* unexpected exception                      */

typedef struct cgcp_irreps cgcp_irreps;
typedef struct cgcp_cg_tensor cgcp_cg_tensor;
typedef struct cgcp_cp_factors cgcp_cp_factors;

CGCP_API const char* cgcp_version(void);
CGCP_API const char* cgcp_last_error(void);

/* ------------------------------------------------------------------ irreps */

/* Parses the text form "c0x0+c1x1+..." (e.g. "128x0+64x1"). */
CGCP_API int cgcp_irreps_parse(const char* text, cgcp_irreps** out);
/* Common multiplicity for every degree 0..max_degree. */
CGCP_API int cgcp_irreps_uniform(int multiplicity, int max_degree, cgcp_irreps** out);
CGCP_API int cgcp_irreps_dim(const cgcp_irreps* irreps, int* out_dim);
/* Writes the canonical text form; *len is in/out (needed size on failure). */
CGCP_API int cgcp_irreps_format(const cgcp_irreps* irreps, char* buf, size_t* len);
CGCP_API void cgcp_irreps_free(cgcp_irreps* irreps);

/* --------------------------------------------------------------- CG tensor */

/* Real-basis Clebsch-Gordan coefficient; exactly 0 outside the selection
 * rule |l1-l2| <= l3 <= l1+l2. */
CGCP_API int cgcp_cg_coefficient(int l1, int m1, int l2, int m2, int l3, int m3, double* out);

/* Sparse CG coefficient tensor for degrees 0..max_degree (max_degree <= 8).
 * path_limit 0 clamps output degrees to min(l1+l2, L); 1 keeps only paths
 * with l1+l2 <= L. */
CGCP_API int cgcp_cg_tensor_build(int max_degree, int path_limit, cgcp_cg_tensor** out);
CGCP_API int cgcp_cg_tensor_dim(const cgcp_cg_tensor* m, int* out_dim);          /* (L+1)^2 */
CGCP_API int cgcp_cg_tensor_nnz(const cgcp_cg_tensor* m, long long* out_nnz);
CGCP_API int cgcp_cg_tensor_path_count(const cgcp_cg_tensor* m, int* out_count);
/* Sparse text format: header "L d nnz", then "k i j value" lines. */
CGCP_API int cgcp_cg_tensor_export(const cgcp_cg_tensor* m, const char* path);
CGCP_API void cgcp_cg_tensor_free(cgcp_cg_tensor* m);

/* Exact path-wise product z_k = sum_ij M[k,i,j] x_i y_j; all lengths dim. */
CGCP_API int cgcp_exact_tp(const cgcp_cg_tensor* m, const double* x, const double* y, double* z);

/* Block-diagonal Wigner action of the rotation given as a quaternion
 * (w, x, y, z); out is dim x dim row-major. */
CGCP_API int cgcp_wigner_block(const cgcp_irreps* irreps, const double quat_wxyz[4], double* out);
/* Haar-uniform rotation number `index` of the stream `seed`. */
CGCP_API int cgcp_sample_rotation(unsigned long long seed, unsigned long long index,
                         double quat_wxyz[4]);

/* ------------------------------------------------------------- CP factors */

typedef struct {
  int max_iters;   /* default 500 */
  double tol;      /* default 1e-9 */
  int restarts;    /* default 8 */
  unsigned long long seed; /* default 42 */
} cgcp_fit_options;

CGCP_API void cgcp_fit_options_default(cgcp_fit_options* opts);

/* Alternating-least-squares CP fit of the CG tensor at the given rank.
 * rank must satisfy 1 <= rank <= dim^2 (the generic bound). */
CGCP_API int cgcp_cp_fit(const cgcp_cg_tensor* m, int rank, const cgcp_fit_options* opts,
                cgcp_cp_factors** out);
CGCP_API int cgcp_cp_factors_rank(const cgcp_cp_factors* f, int* out_rank);
CGCP_API int cgcp_cp_factors_fit(const cgcp_cp_factors* f, double* out_fit);
CGCP_API int cgcp_cp_factors_iterations(const cgcp_cp_factors* f, int* out_iters);
CGCP_API int cgcp_cp_factors_dims(const cgcp_cp_factors* f, int out_dims[3]); /* d3, d1, d2 */
/* .cpf container: JSON header line + column-major little-endian doubles. */
CGCP_API int cgcp_cp_factors_save(const cgcp_cp_factors* f, const char* path);
CGCP_API int cgcp_cp_factors_load(const char* path, cgcp_cp_factors** out);
CGCP_API void cgcp_cp_factors_free(cgcp_cp_factors* f);

/* Hadamard-form product z = A (B^T x . C^T y). */
CGCP_API int cgcp_cp_apply(const cgcp_cp_factors* f, const double* x, const double* y, double* z);
/* Row-wise product over `channels` rows (X: channels x d1, row-major). */
CGCP_API int cgcp_cp_apply_batched(const cgcp_cp_factors* f, int channels, const double* x,
                          const double* y, double* z);
/* Batched product followed by the shared c x c multiplicity mixing W. */
CGCP_API int cgcp_shared_weight_tp(const cgcp_cp_factors* f, int channels, const double* w,
                          const double* x, const double* y, double* z);

/* ------------------------------------------------- experiment entry points */

/* Each runner takes a JSON options object (all keys optional) and returns
 * newly allocated strings; free them with cgcp_string_free.
 *
 * verify:  {"L", "rotations", "pairs", "bound_samples", "multiplicity",
 *           "irreps", "lambda_trials", "universality_pairs", "radius",
 *           "seed", "corrupt_cg", "check"}
 * sweep:   {"L": [..], "schedules": [..], "samples", "rotations",
 *           "samples_per_rotation", "radius", "seed", "threads",
 *           "restarts", "max_iters", "tol"}
 * bench:   {"L": [..], "reps", "warmup", "seed", "fp32"}
 *
 * The returned JSON echoes the fully-resolved configuration. */
CGCP_API int cgcp_verify_run(const char* options_json, char** json_out, int* all_passed);
CGCP_API int cgcp_sweep_run(const char* options_json, char** csv_out, char** json_out);
CGCP_API int cgcp_bench_run(const char* options_json, char** csv_out, char** json_out);

CGCP_API void cgcp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CGCP_H */
