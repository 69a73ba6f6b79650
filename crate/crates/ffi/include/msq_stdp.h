#ifndef MSQ_STDP_H
#define MSQ_STDP_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsqStatus {
  MSQ_STATUS_OK = 0,
  MSQ_STATUS_NULL_POINTER = 1,
  MSQ_STATUS_INVALID_ARGUMENT = 2,
  MSQ_STATUS_CONFIG = 3,
  MSQ_STATUS_DEGENERATE = 4,
  MSQ_STATUS_ENGINE_DISAGREEMENT = 5,
  MSQ_STATUS_IO = 6,
  MSQ_STATUS_PANIC = 7,
} MsqStatus;

typedef enum MsqTripletVariant {
  MSQ_TRIPLET_VARIANT_PRE_POST_PRE = 0,
  MSQ_TRIPLET_VARIANT_POST_PRE_POST = 1,
} MsqTripletVariant;

typedef enum MsqPolarity {
  MSQ_POLARITY_POTENTIATE = 0,
  MSQ_POLARITY_DEPRESS = 1,
} MsqPolarity;

// Opaque parameter set: rule amplitudes, device constants, initial weight.
typedef struct MsqParams MsqParams;

// Opaque memristive synapse.
typedef struct MsqSynapse MsqSynapse;

// Opaque spike train.
typedef struct MsqTrain MsqTrain;

// Calibrated circuit constants (plain data).
typedef struct MsqCircuitParams {
  double v_j_peak;
  double v_i_peak;
  double g1;
  double g2;
  double tau_j;
  double tau_i1;
  double tau_i2;
  double slot_ms;
  uint32_t slots_per_frame;
  double delay_ms;
} MsqCircuitParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *msq_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *msq_version(void);

// Look up a compiled-in parameter set (`"visual-cortex"` or `"hippocampal"`)
// or, failing that, load a parameter file from that path.
//
// # Safety
// `name` must be a NUL-terminated string and `out` valid for writes.
enum MsqStatus msq_params_resolve(const char *name, struct MsqParams **out);

// Custom rule amplitudes and time constants on the default device.
//
// # Safety
// `out` must be valid for writes.
enum MsqStatus msq_params_new(double a2_plus,
                              double a3_plus,
                              double a2_minus,
                              double tau_j,
                              double tau_i1,
                              double tau_i2,
                              struct MsqParams **out);

// Override the device programming rates (weight units per second).
//
// # Safety
// `params` must come from this library.
enum MsqStatus msq_params_set_rates(struct MsqParams *params, double v_p, double v_d);

// Set the initial weight used by runs with these parameters.
//
// # Safety
// `params` must come from this library.
enum MsqStatus msq_params_set_w0(struct MsqParams *params, double w0);

// # Safety
// `params` must come from this library (or be null) and not be used afterwards.
void msq_params_free(struct MsqParams *params);

// Calibrated circuit constants for `params`.
//
// # Safety
// `params` must come from this library and `out` be valid for writes.
enum MsqStatus msq_params_calibrate(const struct MsqParams *params, struct MsqCircuitParams *out);

// Build a train from explicit spike times (ms, sorted ascending).
//
// # Safety
// `pre` / `post` must point at `n_pre` / `n_post` doubles (may be null when
// the count is 0) and `out` be valid for writes.
enum MsqStatus msq_train_new(const double *pre,
                             uintptr_t n_pre,
                             const double *post,
                             uintptr_t n_post,
                             double duration_ms,
                             struct MsqTrain **out);

// # Safety
// `out` must be valid for writes.
enum MsqStatus msq_train_pairing(double dt_ms,
                                 double rho_hz,
                                 uintptr_t repetitions,
                                 struct MsqTrain **out);

// # Safety
// `out` must be valid for writes.
enum MsqStatus msq_train_triplet(enum MsqTripletVariant variant,
                                 double dt1_ms,
                                 double dt2_ms,
                                 double rho_hz,
                                 uintptr_t repetitions,
                                 struct MsqTrain **out);

// # Safety
// `out` must be valid for writes.
enum MsqStatus msq_train_quadruplet(double t_ms,
                                    double rho_hz,
                                    uintptr_t repetitions,
                                    struct MsqTrain **out);

// Number of pre and post spikes in `train`.
//
// # Safety
// `train` must come from this library; outputs must be valid for writes.
enum MsqStatus msq_train_counts(const struct MsqTrain *train, uintptr_t *n_pre, uintptr_t *n_post);

// # Safety
// `train` must come from this library (or be null) and not be used afterwards.
void msq_train_free(struct MsqTrain *train);

// Total weight change of the algorithmic engine.
//
// # Safety
// Handles must come from this library; `out` must be valid for writes.
enum MsqStatus msq_run_model(const struct MsqParams *params,
                             const struct MsqTrain *train,
                             double *out_delta_w);

// Total weight change (final minus initial, clamp-aware) of the calibrated
// circuit engine.
//
// # Safety
// Handles must come from this library; `out` must be valid for writes.
enum MsqStatus msq_run_circuit(const struct MsqParams *params,
                               const struct MsqTrain *train,
                               double *out_delta_w);

// A synapse on the device of `params` at `weight`.
//
// # Safety
// `params` must come from this library; `out` must be valid for writes.
enum MsqStatus msq_synapse_new(const struct MsqParams *params,
                               double weight,
                               struct MsqSynapse **out);

// # Safety
// `syn` must come from this library.
enum MsqStatus msq_synapse_program(struct MsqSynapse *syn,
                                   enum MsqPolarity polarity,
                                   double pulse_width_s);

// # Safety
// `syn` must come from this library.
enum MsqStatus msq_synapse_apply_voltage(struct MsqSynapse *syn, double volts, double duration_s);

// # Safety
// `syn` must come from this library; `out` must be valid for writes.
enum MsqStatus msq_synapse_weight(const struct MsqSynapse *syn, double *out);

// # Safety
// `syn` must come from this library (or be null) and not be used afterwards.
void msq_synapse_free(struct MsqSynapse *syn);

// Normalized mean square error over `len` points.
//
// # Safety
// All arrays must hold `len` doubles; `out` must be valid for writes.
enum MsqStatus msq_nmse(const double *cir,
                        const double *model,
                        const double *sigma,
                        uintptr_t len,
                        double *out);

// Relative RMS deviation of `cir` from `model` over `len` points.
//
// # Safety
// Both arrays must hold `len` doubles; `out` must be valid for writes.
enum MsqStatus msq_relative_rms(const double *cir, const double *model, uintptr_t len, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MSQ_STDP_H */
