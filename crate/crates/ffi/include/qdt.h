#ifndef QDT_H
#define QDT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum QdtStatus {
  QDT_STATUS_OK = 0,
  QDT_STATUS_NULL_POINTER = 1,
  QDT_STATUS_INVALID_UTF8 = 2,
  QDT_STATUS_PARSE_ERROR = 3,
  QDT_STATUS_OVERFLOW = 4,
  QDT_STATUS_INVALID_ARGUMENT = 5,
  QDT_STATUS_IO = 6,
  QDT_STATUS_OUT_OF_RANGE = 7,
  QDT_STATUS_PANIC = 8,
} QdtStatus;

typedef enum QdtGate {
  QDT_GATE_H = 0,
  QDT_GATE_X = 1,
  QDT_GATE_Y = 2,
  QDT_GATE_Z = 3,
  QDT_GATE_S = 4,
  QDT_GATE_D = 5,
  QDT_GATE_T = 6,
  QDT_GATE_I = 7,
} QdtGate;

typedef enum QdtAction {
  QDT_ACTION_BELIEVE_ALIVE = 1,
  QDT_ACTION_BELIEVE_DEAD = 2,
} QdtAction;

typedef enum QdtFitnessMode {
  QDT_FITNESS_MODE_EXPECTED = 0,
  QDT_FITNESS_MODE_SAMPLED = 1,
} QdtFitnessMode;

// Result of a genetic programming run.
typedef struct QdtEvolution QdtEvolution;

// A measurement history.
typedef struct QdtHistory QdtHistory;

// A seeded ChaCha8 random stream.
typedef struct QdtRng QdtRng;

// Enumerated strategies of a tree.
typedef struct QdtStrategyList QdtStrategyList;

// A parsed decision tree.
typedef struct QdtTree QdtTree;

typedef struct QdtStrategyInfo {
  uint64_t id;
  double weight;
  double p1;
  double p2;
} QdtStrategyInfo;

typedef struct QdtDecision {
  enum QdtAction action;
  // Probability of the chosen action.
  double belief;
  uint64_t strategy_id;
  double p1;
  double p2;
} QdtDecision;

typedef struct QdtRecord {
  uint64_t k;
  // 1 when the atom decayed (cat dead).
  uint8_t decayed;
  int64_t x;
  uint64_t v;
} QdtRecord;

typedef struct QdtGpConfig {
  size_t population_size;
  size_t generations;
  double crossover_probability;
  double mutation_probability;
  size_t min_depth;
  size_t max_depth;
  size_t elitism;
  size_t strategy_cap;
  enum QdtFitnessMode fitness_mode;
  // Nonzero weights records by empirical state frequency.
  uint8_t use_omega;
  uint64_t seed;
} QdtGpConfig;

typedef struct QdtGenerationStats {
  size_t generation;
  double best_fitness;
  double mean_fitness;
} QdtGenerationStats;

typedef struct QdtRunReport {
  size_t n;
  size_t successes;
  double success_rate;
  double total_value;
} QdtRunReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next `qdt_*` call on the same thread.
const char *qdt_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void qdt_string_free(char *s);

// Writes the gate's matrix as eight doubles: re/im pairs of m11, m12, m21, m22.
//
// # Safety
// `out` must point to 8 writable doubles.
enum QdtStatus qdt_gate_matrix(enum QdtGate gate, double *out);

// Beliefs `(p1, p2)` of an arbitrary matrix given as eight doubles in the
// layout of [`qdt_gate_matrix`].
//
// # Safety
// `m` must point to 8 readable doubles; `p1`, `p2` must be writable.
enum QdtStatus qdt_matrix_beliefs(const double *m, double *p1, double *p2);

// Parses tree text. On a parse error the message names the position.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum QdtStatus qdt_tree_parse(const char *text, struct QdtTree **out);

// # Safety
// `tree` must come from this library and not have been freed. Null is ignored.
void qdt_tree_free(struct QdtTree *tree);

// Canonical fully parenthesized text. Free with [`qdt_string_free`].
//
// # Safety
// `tree` must be a live handle; `out` must be writable.
enum QdtStatus qdt_tree_to_text(const struct QdtTree *tree, char **out);

// Depth of the tree, 0 for a null handle.
//
// # Safety
// `tree` must be a live handle or null.
size_t qdt_tree_depth(const struct QdtTree *tree);

// Number of strategies, saturating at `UINT64_MAX`; 0 for a null handle.
//
// # Safety
// `tree` must be a live handle or null.
uint64_t qdt_tree_strategy_count(const struct QdtTree *tree);

// Enumerates strategies, failing with `Overflow` when there are more than `cap`.
//
// # Safety
// `tree` must be a live handle; `out` must be writable.
enum QdtStatus qdt_tree_enumerate(const struct QdtTree *tree,
                                  size_t cap,
                                  struct QdtStrategyList **out);

// # Safety
// `list` must be a live handle or null.
size_t qdt_strategy_list_len(const struct QdtStrategyList *list);

// # Safety
// `list` must be a live handle; `out` must be writable.
enum QdtStatus qdt_strategy_list_get(const struct QdtStrategyList *list,
                                     size_t index,
                                     struct QdtStrategyInfo *out);

// Text of strategy `index`. Free with [`qdt_string_free`].
//
// # Safety
// `list` must be a live handle; `out` must be writable.
enum QdtStatus qdt_strategy_list_text(const struct QdtStrategyList *list, size_t index, char **out);

// # Safety
// `list` must come from this library and not have been freed. Null is ignored.
void qdt_strategy_list_free(struct QdtStrategyList *list);

struct QdtRng *qdt_rng_new(uint64_t seed);

// # Safety
// `rng` must come from this library and not have been freed. Null is ignored.
void qdt_rng_free(struct QdtRng *rng);

// Samples a strategy and an action from it.
//
// # Safety
// `tree` and `rng` must be live handles; `out` must be writable.
enum QdtStatus qdt_decide(const struct QdtTree *tree, struct QdtRng *rng, struct QdtDecision *out);

// # Safety
// `out` must be writable.
enum QdtStatus qdt_history_generate(size_t n,
                                    double decay_probability,
                                    uint64_t seed,
                                    struct QdtHistory **out);

// Builds a history from `n` decay flags (nonzero = decayed).
//
// # Safety
// `decays` must point to `n` readable bytes; `out` must be writable.
enum QdtStatus qdt_history_from_decays(const uint8_t *decays, size_t n, struct QdtHistory **out);

// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum QdtStatus qdt_history_read_csv(const char *path, struct QdtHistory **out);

// # Safety
// `history` must be a live handle; `path` a NUL-terminated string.
enum QdtStatus qdt_history_write_csv(const struct QdtHistory *history, const char *path);

// # Safety
// `history` must be a live handle or null.
size_t qdt_history_len(const struct QdtHistory *history);

// # Safety
// `history` must be a live handle; `omega1`, `omega2` writable.
enum QdtStatus qdt_history_frequencies(const struct QdtHistory *history,
                                       double *omega1,
                                       double *omega2);

// Record `index` (0-based).
//
// # Safety
// `history` must be a live handle; `out` writable.
enum QdtStatus qdt_history_record(const struct QdtHistory *history,
                                  size_t index,
                                  struct QdtRecord *out);

// # Safety
// `history` must come from this library and not have been freed. Null is ignored.
void qdt_history_free(struct QdtHistory *history);

// Fitness of `tree` on `history`, weighting records by state frequency.
// `rng` is only drawn from in sampled mode or when enumeration overflows.
//
// # Safety
// `tree`, `history`, `rng` must be live handles; `out` writable.
enum QdtStatus qdt_fitness(const struct QdtTree *tree,
                           const struct QdtHistory *history,
                           enum QdtFitnessMode mode,
                           size_t cap,
                           struct QdtRng *rng,
                           double *out);

struct QdtGpConfig qdt_gp_config_default(void);

// # Safety
// `config` and `history` must be valid; `out` writable.
enum QdtStatus qdt_evolve(const struct QdtGpConfig *config,
                          const struct QdtHistory *history,
                          struct QdtEvolution **out);

// # Safety
// `evolution` must be a live handle or null.
double qdt_evolution_best_fitness(const struct QdtEvolution *evolution);

// Copy of the best tree as a new handle.
//
// # Safety
// `evolution` must be a live handle; `out` writable.
enum QdtStatus qdt_evolution_best_tree(const struct QdtEvolution *evolution, struct QdtTree **out);

// # Safety
// `evolution` must be a live handle or null.
size_t qdt_evolution_generations(const struct QdtEvolution *evolution);

// # Safety
// `evolution` must be a live handle; `out` writable.
enum QdtStatus qdt_evolution_stats(const struct QdtEvolution *evolution,
                                   size_t index,
                                   struct QdtGenerationStats *out);

// Writes the generations CSV.
//
// # Safety
// `evolution` must be a live handle; `path` a NUL-terminated string.
enum QdtStatus qdt_evolution_write_csv(const struct QdtEvolution *evolution, const char *path);

// # Safety
// `evolution` must come from this library and not have been freed. Null is ignored.
void qdt_evolution_free(struct QdtEvolution *evolution);

// One decision per record with draws from ChaCha8 seeded by `seed`.
// `decisions_path` may be null; otherwise the decisions CSV is written there.
//
// # Safety
// `tree`, `history` must be live handles; `decisions_path` null or a
// NUL-terminated string; `out` writable.
enum QdtStatus qdt_simulate(const struct QdtTree *tree,
                            const struct QdtHistory *history,
                            uint64_t seed,
                            const char *decisions_path,
                            struct QdtRunReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QDT_H */
