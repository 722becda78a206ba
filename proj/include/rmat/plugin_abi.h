/* C interface for externally supplied GL_N R-matrix families.
 *
 * A plugin is a shared library exporting the symbols below. The toolkit
 * loads it with `--family plugin:<path>` and certifies the family (AYBE,
 * skew-symmetry, unitarity) before use.
 *
 * Operators are written as 2*N^4 doubles: the N^2 x N^2 matrix in row-major
 * order over the slot multi-index (leftmost slot most significant), each
 * entry as (real, imaginary).
 */
#ifndef RMAT_PLUGIN_ABI_H
#define RMAT_PLUGIN_ABI_H

#ifdef __cplusplus
extern "C" {
#endif

#define RMAT_PLUGIN_ABI_VERSION 1

enum rmat_plugin_variant {
  RMAT_VARIANT_ELLIPTIC = 0,
  RMAT_VARIANT_TRIGONOMETRIC = 1,
  RMAT_VARIANT_RATIONAL = 2
};

struct rmat_plugin_info {
  int abi_version;  /* must be RMAT_PLUGIN_ABI_VERSION */
  int n;            /* matrix size N */
  int variant;      /* enum rmat_plugin_variant */
  double tau_re;    /* modulus, elliptic only */
  double tau_im;
  const char* name; /* static string */
};

/* Required. Returns 0 on success. */
typedef int (*rmat_plugin_describe_fn)(struct rmat_plugin_info* info);
/* Required. R^h(z); returns nonzero if (h, z) is a pole. */
typedef int (*rmat_plugin_eval_fn)(double h_re, double h_im, double z_re, double z_im,
                                   double* out);
/* Optional. Classical r-matrix r(z); same conventions. */
typedef int (*rmat_plugin_classical_fn)(double z_re, double z_im, double* out);

#define RMAT_PLUGIN_DESCRIBE_SYMBOL "rmat_plugin_describe"
#define RMAT_PLUGIN_EVAL_SYMBOL "rmat_plugin_eval"
#define RMAT_PLUGIN_CLASSICAL_SYMBOL "rmat_plugin_classical"

#ifdef __cplusplus
}
#endif

#endif /* RMAT_PLUGIN_ABI_H */
