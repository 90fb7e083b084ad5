#ifndef QUON_H
#define QUON_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QuonStatus {
  QUON_STATUS_OK = 0,
  QUON_STATUS_INVALID_ARGUMENT = 1,
  QUON_STATUS_PARSE_ERROR = 2,
  QUON_STATUS_CAP_EXCEEDED = 3,
  QUON_STATUS_NULL_STATE = 4,
  QUON_STATUS_ILL_CONDITIONED = 5,
  QUON_STATUS_INSUFFICIENT_DATA = 6,
  QUON_STATUS_IO_ERROR = 7,
  QUON_STATUS_NULL_POINTER = 8,
  QUON_STATUS_BUFFER_TOO_SMALL = 9,
  QUON_STATUS_PANIC = 10,
} QuonStatus;

typedef enum QuonSector {
  QUON_SECTOR_SYMMETRIC = 0,
  QUON_SECTOR_ANTISYMMETRIC = 1,
  QUON_SECTOR_MIXED = 2,
} QuonSector;

/**
 * Band levels collected before a fit.
 */
typedef struct QuonBand QuonBand;

/**
 * Classified overlap spectrum.
 */
typedef struct QuonSpectrum QuonSpectrum;

/**
 * One eigenvalue cluster of a classified overlap matrix.
 */
typedef struct QuonCluster {
  enum QuonSector sector;
  /**
   * 1-based rank among mixed clusters; 0 otherwise.
   */
  size_t ordinal;
  double eigenvalue;
  size_t multiplicity;
  bool is_null;
} QuonCluster;

typedef struct QuonFit {
  double a;
  double q;
  double sse;
  double rms_residual;
  size_t evaluations;
  bool at_boundary;
} QuonFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Returns the buffer size
 * needed including the NUL; copies nothing when `len` is too small.
 */
size_t quon_last_error_message(char *buf, size_t len);

enum QuonStatus quon_q_bracket(uint32_t n, double q, double *out);

/**
 * Vacuum expectation value of an operator string such as `"a2 a1 ad2 ad1"`.
 */
enum QuonStatus quon_vev(const char *word, double q, double *out);

/**
 * Exact vacuum expectation value as a polynomial in `q`, e.g. `"1 + q"`.
 */
enum QuonStatus quon_vev_exact(const char *word, char *buf, size_t len, size_t *needed);

enum QuonStatus quon_oscillator_energy(uint32_t n, double hbar_omega, double q, double *out);

enum QuonStatus quon_rotor_energy(uint32_t l, double inertia_a, double q, double *out);

/**
 * Classifies the orderings of an occupancy such as `"1:1 2:1 3:1"` at `q`.
 */
enum QuonStatus quon_classify(const char *occupancy, double q, struct QuonSpectrum **out);

/**
 * Number of clusters; 0 for a null handle.
 */
size_t quon_spectrum_cluster_count(const struct QuonSpectrum *spectrum);

enum QuonStatus quon_spectrum_cluster(const struct QuonSpectrum *spectrum,
                                      size_t index,
                                      struct QuonCluster *out);

void quon_spectrum_free(struct QuonSpectrum *spectrum);

struct QuonBand *quon_band_new(void);

/**
 * Reads a band CSV (`l,energy_kev[,weight]`).
 */
enum QuonStatus quon_band_from_csv(const char *path, struct QuonBand **out);

/**
 * Appends a level; the band is validated when fitted.
 */
enum QuonStatus quon_band_push(struct QuonBand *band, uint32_t l, double energy, double weight);

size_t quon_band_len(const struct QuonBand *band);

void quon_band_free(struct QuonBand *band);

/**
 * Fits `(A, q)` with `q` searched in `[q_min, q_max]`.
 */
enum QuonStatus quon_fit_band(const struct QuonBand *band,
                              double q_min,
                              double q_max,
                              struct QuonFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUON_H */
