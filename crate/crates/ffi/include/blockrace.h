/* C interface to the blockrace library.
 *
 * Every function returns a brx_status; results are written through out
 * pointers. Handles are opaque and must be released with the matching _free
 * function. All functions are thread-safe; handles are immutable after
 * construction. Maintained by hand alongside crates/ffi/src/lib.rs.
 */

#ifndef BLOCKRACE_H
#define BLOCKRACE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum brx_status {
  BRX_OK = 0,
  BRX_NULL_POINTER = 1,
  BRX_INVALID_ARGUMENT = 2,
  BRX_INVALID_UTF8 = 3,
  BRX_IO_OR_PARSE = 4,
} brx_status;

/* Protocol variants. */
#define BRX_VARIANT_STANDARD 0
#define BRX_VARIANT_ORPHAN 1

/* Threshold outcome kinds. */
#define BRX_THRESHOLD_ROOT 0
#define BRX_THRESHOLD_NONE 1
#define BRX_THRESHOLD_IDENTICALLY_ZERO 2

/* Difficulty-adjustment rules for brx_simulate_longrun. */
#define BRX_DAA_NONE 0
#define BRX_DAA_STANDARD 1
#define BRX_DAA_ORPHAN 2

typedef struct brx_params brx_params;
typedef struct brx_strategy brx_strategy;

/* Per-cycle expectations and the profitability ratio. stderr is the Monte
 * Carlo standard error of gamma, 0 for exact reports. */
typedef struct brx_report {
  double gamma;
  double e_g;
  double e_h;
  double e_d;
  double e_tau;
  double e_reward;
  double stderr;
} brx_report;

/* q in (0,1), tau0 > 0 minutes, n0 >= 1 blocks, orphan_reward_x in [0,1]. */
brx_status brx_params_new(double q, double tau0, uint32_t n0,
                          double orphan_reward_x, brx_params **out);
void brx_params_free(brx_params *params);

brx_status brx_strategy_honest(brx_strategy **out);
brx_status brx_strategy_one_plus_two(brx_strategy **out);
/* Loads a word-rule CSV file (header: word,off_a,orph_a,orph_pub_a,off_h,orph_h). */
brx_status brx_strategy_from_file(const char *path, brx_strategy **out);
void brx_strategy_free(brx_strategy *strategy);

/* Exact profitability by complete cycle enumeration. */
brx_status brx_gamma_exact(const brx_strategy *strategy,
                           const brx_params *params, int variant,
                           brx_report *out);

/* Closed form q^2 (4 - q) / (1 + q + q^3) for the withhold-one,
 * lead-by-two strategy. */
brx_status brx_closed_form_gamma_one_plus_two(double q, double *out);

/* Smallest q in (0,1) where the strategy beats honest mining.
 * out_kind receives a BRX_THRESHOLD_* constant; out_q is set only for
 * BRX_THRESHOLD_ROOT. */
brx_status brx_threshold(const brx_strategy *strategy, int variant,
                         double orphan_reward_x, int *out_kind, double *out_q);

/* Monte Carlo profitability over n_cycles timed cycles at constant
 * difficulty. Bit-identical for a given seed regardless of thread count. */
brx_status brx_simulate_cycles(const brx_strategy *strategy,
                               const brx_params *params, uint64_t n_cycles,
                               uint64_t seed, int variant, brx_report *out);

/* Long-run simulation with difficulty retargeting. Requires
 * 1 <= warmup < n_epochs and replications >= 1. Writes the post-warmup
 * attacker revenue per tau0 of wall time and its standard error over
 * replication means. */
brx_status brx_simulate_longrun(const brx_strategy *strategy,
                                const brx_params *params, int daa,
                                uint32_t n_epochs, uint32_t warmup,
                                uint32_t replications, uint64_t seed,
                                double *out_revenue_per_tau0,
                                double *out_stderr);

#ifdef __cplusplus
}
#endif

#endif /* BLOCKRACE_H */
