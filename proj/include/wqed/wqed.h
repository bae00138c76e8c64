#ifndef WQED_WQED_H
#define WQED_WQED_H

#include <stddef.h>
#include <stdint.h>

#if defined(WQED_BUILDING_LIBRARY)
#define WQED_API __attribute__((visibility("default")))
#else
#define WQED_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wqed_status {
  WQED_OK = 0,
  WQED_ERR_INVALID_ARGUMENT = 1,
  WQED_ERR_DIMENSION = 2,
  WQED_ERR_DOMAIN = 3,
  WQED_ERR_SINGULAR = 4,
  WQED_ERR_CONVERGENCE = 5,
  WQED_ERR_IO = 6,
  WQED_ERR_CONFIG = 7,
  WQED_ERR_PARTIAL_FAILURE = 8,
  WQED_ERR_NULL_POINTER = 9,
  WQED_ERR_INTERNAL = 10
} wqed_status;

typedef enum wqed_parity { WQED_PARITY_EVEN = 0, WQED_PARITY_ODD = 1, WQED_PARITY_MIXED = 2 } wqed_parity;

typedef enum wqed_label {
  WQED_LABEL_SCATTERING = 0,
  WQED_LABEL_FERMIONIZED = 1,
  WQED_LABEL_BOUND_PAIR = 2,
  WQED_LABEL_EDGE_BOUND_PAIR = 3,
  WQED_LABEL_INTERACTION_LOCALIZED = 4,
  WQED_LABEL_DISTANT_BOUND = 5,
  WQED_LABEL_UNCLASSIFIED = 6
} wqed_label;

typedef enum wqed_distribution { WQED_UNIFORM = 0, WQED_GAUSSIAN = 1 } wqed_distribution;

/* Opaque handles. */
typedef struct wqed_config wqed_config;
typedef struct wqed_matrix wqed_matrix;
typedef struct wqed_spectrum wqed_spectrum;
typedef struct wqed_decomposition wqed_decomposition;

WQED_API const char* wqed_version(void);
WQED_API const char* wqed_status_string(wqed_status status);
/* Message of the last failed call on this thread ("" if none). */
WQED_API const char* wqed_last_error(void);

/* Array configuration: N atoms, phase, optional N-1 bond disorder values. */
WQED_API wqed_status wqed_config_create(size_t n_atoms, double phase, wqed_config** out);
WQED_API wqed_status wqed_config_set_disorder(wqed_config* cfg, const double* chi, size_t len);
WQED_API void wqed_config_destroy(wqed_config* cfg);

/* Dense complex matrices, row-major, interleaved (re, im). */
WQED_API wqed_status wqed_matrix_create(size_t rows, size_t cols, const double* interleaved, wqed_matrix** out);
WQED_API wqed_status wqed_matrix_shape(const wqed_matrix* m, size_t* rows, size_t* cols);
WQED_API wqed_status wqed_matrix_get(const wqed_matrix* m, size_t row, size_t col, double* re, double* im);
/* Copies rows*cols complex entries into `interleaved` (capacity `len` doubles). */
WQED_API wqed_status wqed_matrix_copy(const wqed_matrix* m, double* interleaved, size_t len);
WQED_API void wqed_matrix_destroy(wqed_matrix* m);

WQED_API wqed_status wqed_single_hamiltonian(const wqed_config* cfg, wqed_matrix** out);
WQED_API wqed_status wqed_pair_hamiltonian(const wqed_config* cfg, wqed_matrix** out);
WQED_API wqed_status wqed_oracle_hamiltonian(const wqed_config* cfg, wqed_matrix** out);

/* Eigen-decompositions. Pair spectra report per-excitation energies. */
WQED_API wqed_status wqed_eig_dense(const wqed_matrix* m, size_t max_dim, wqed_spectrum** out);
WQED_API wqed_status wqed_solve_single(const wqed_config* cfg, wqed_spectrum** out);
WQED_API wqed_status wqed_solve_pair(const wqed_config* cfg, size_t max_dim, wqed_spectrum** out);
WQED_API wqed_status wqed_spectrum_size(const wqed_spectrum* s, size_t* n);
WQED_API wqed_status wqed_spectrum_energy(const wqed_spectrum* s, size_t k, double* re, double* im);
WQED_API wqed_status wqed_spectrum_max_relative_residual(const wqed_spectrum* s, double* out);
/* Eigenvector k (length = dimension) as interleaved doubles. */
WQED_API wqed_status wqed_spectrum_vector(const wqed_spectrum* s, size_t k, double* interleaved, size_t len);
WQED_API void wqed_spectrum_destroy(wqed_spectrum* s);

typedef struct wqed_state_summary {
  double re_energy;
  double im_energy;
  double rho;
  double edge_mass;
  double com_ipr;
  double parity_score;
  wqed_parity parity;
  wqed_label label;
} wqed_state_summary;

/* Metrics of pair-spectrum state k with edge width w (0 = default). */
WQED_API wqed_status wqed_pair_state_summary(const wqed_spectrum* s, size_t k, size_t edge_width,
                                             wqed_state_summary* out);
/* N x N amplitude matrix of pair-spectrum state k. */
WQED_API wqed_status wqed_pair_state_amplitudes(const wqed_spectrum* s, size_t k, wqed_matrix** out);
WQED_API wqed_status wqed_parity_of_vector(const double* interleaved, size_t n, wqed_parity* label, double* score);
WQED_API wqed_status wqed_classify(double rho, double edge_mass, size_t n_atoms, wqed_label* out);

/* Unconjugated decomposition of a complex symmetric matrix. */
WQED_API wqed_status wqed_decompose(const wqed_matrix* psi, wqed_decomposition** out);
WQED_API wqed_status wqed_decomposition_size(const wqed_decomposition* d, size_t* n);
WQED_API wqed_status wqed_decomposition_term(const wqed_decomposition* d, size_t t, double* re_lambda,
                                             double* im_lambda, wqed_parity* parity, int* resolved);
WQED_API wqed_status wqed_decomposition_truncation_error(const wqed_decomposition* d, const wqed_matrix* psi,
                                                         size_t k, double* out);
WQED_API wqed_status wqed_decomposition_orthogonality_defect(const wqed_decomposition* d, double* out);
WQED_API void wqed_decomposition_destroy(wqed_decomposition* d);

WQED_API wqed_status wqed_fourier2d(const wqed_matrix* psi, wqed_matrix** out);
WQED_API wqed_status wqed_fourier_weight_near(const wqed_matrix* map, double k0, double radius, double* out);

/* Polariton analytics. law: 0 = Lambert W, 1 = asymptotic. */
WQED_API wqed_status wqed_dispersion_K(double re_eps, double im_eps, double phase, double* re_K, double* im_K);
WQED_API wqed_status wqed_dispersion_energy(double re_K, double im_K, double phase, double* re_eps,
                                            double* im_eps);
WQED_API wqed_status wqed_reflection(double re_K, double im_K, double phase, double* re_r, double* im_r);
WQED_API wqed_status wqed_fabry_perot_residual(double re_eps, double im_eps, size_t n_atoms, double phase,
                                               double* out);
WQED_API wqed_status wqed_lambert_w0(double x, double* out);
WQED_API wqed_status wqed_decay_prediction(size_t n_atoms, double phase, int law, double* out);

/* Disorder draws. */
WQED_API uint64_t wqed_realization_seed(uint64_t master_seed, size_t realization);
WQED_API wqed_status wqed_draw_disorder(double strength, size_t n, uint64_t seed, wqed_distribution dist,
                                        double* out);

/* Pipeline commands: spectrum | wavefunction | scaling | disorder. `config_json`
 * uses the CLI flag names as keys. `exit_code` receives the process exit code
 * the run implies (0 ok, 3 too many failed realizations, 4 replay mismatch).
 * wqed_last_report() returns a JSON summary of the last run on this thread. */
WQED_API wqed_status wqed_run(const char* command, const char* config_json, int* exit_code);
WQED_API wqed_status wqed_replay(const char* manifest_path, const char* out_dir, int* exit_code);
WQED_API const char* wqed_last_report(void);

#ifdef __cplusplus
}
#endif

#endif
