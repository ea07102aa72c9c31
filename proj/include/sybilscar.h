/*
 * sybilscar — structure-based Sybil detection via local-rule propagation.
 *
 * C API over the propagation core. Objects are opaque handles created and
 * destroyed by the library; every fallible function returns a sybil_status
 * and leaves a human-readable message in sybil_last_error() on failure.
 * Status values mirror the CLI exit codes.
 */
#ifndef SYBILSCAR_H
#define SYBILSCAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SYBIL_API __declspec(dllexport)
#else
#define SYBIL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sybil_status {
    SYBIL_OK = 0,
    SYBIL_USAGE_ERROR = 2, /* invalid arguments or configuration */
    SYBIL_DATA_ERROR = 3,  /* missing/malformed files, inconsistent inputs */
    SYBIL_NUMERIC_ERROR = 4 /* non-finite values produced */
} sybil_status;

typedef struct sybil_graph sybil_graph;
typedef struct sybil_instance sybil_instance;
typedef struct sybil_training sybil_training;
typedef struct sybil_result sybil_result;

SYBIL_API const char* sybil_version(void);
/* Message for the most recent failure on this thread. */
SYBIL_API const char* sybil_last_error(void);

/* ---- graphs ------------------------------------------------------------ */

/* Loads a whitespace edge list ('#' comments); external ids are densified. */
SYBIL_API sybil_status sybil_graph_load(const char* path, sybil_graph** out);
SYBIL_API sybil_status sybil_graph_save(const sybil_graph* g, const char* path);
/* Sidecar "external_id dense_id" map from the most recent load. */
SYBIL_API sybil_status sybil_graph_save_id_map(const sybil_graph* g,
                                               const char* path);
SYBIL_API void sybil_graph_free(sybil_graph* g);

SYBIL_API uint32_t sybil_graph_node_count(const sybil_graph* g);
SYBIL_API uint64_t sybil_graph_edge_count(const sybil_graph* g);
SYBIL_API sybil_status sybil_graph_stats(const sybil_graph* g,
                                         double* avg_degree,
                                         uint32_t* max_degree);
SYBIL_API sybil_status sybil_graph_volume(const sybil_graph* g,
                                          const uint32_t* nodes, size_t count,
                                          uint64_t* out);

/* Random graph generators. */
SYBIL_API sybil_status sybil_graph_er(uint32_t nodes, double avg_degree,
                                      uint64_t seed, sybil_graph** out);
SYBIL_API sybil_status sybil_graph_pa(uint32_t nodes, uint32_t edges_per_node,
                                      uint64_t seed, sybil_graph** out);

/* ---- attack instances --------------------------------------------------- */

SYBIL_API sybil_status sybil_instance_replica(const sybil_graph* benign,
                                              uint64_t attack_edges,
                                              uint64_t seed,
                                              sybil_instance** out);
SYBIL_API sybil_status sybil_instance_join(const sybil_graph* benign,
                                           const sybil_graph* sybil_region,
                                           uint64_t attack_edges, uint64_t seed,
                                           sybil_instance** out);
/* Directory layout: graph.txt, labels.txt, attack_edges.txt. */
SYBIL_API sybil_status sybil_instance_save(const sybil_instance* inst,
                                           const char* dir);
SYBIL_API sybil_status sybil_instance_load(const char* dir,
                                           sybil_instance** out);
SYBIL_API void sybil_instance_free(sybil_instance* inst);

/* Borrowed view of the instance graph; valid while the instance lives. */
SYBIL_API const sybil_graph* sybil_instance_graph(const sybil_instance* inst);
SYBIL_API uint32_t sybil_instance_benign_count(const sybil_instance* inst);
SYBIL_API uint32_t sybil_instance_sybil_count(const sybil_instance* inst);
SYBIL_API uint64_t sybil_instance_attack_edge_count(const sybil_instance* inst);

/* ---- training sets ------------------------------------------------------ */

SYBIL_API sybil_status sybil_training_sample(const sybil_instance* inst,
                                             size_t count, uint64_t seed,
                                             sybil_training** out);
SYBIL_API sybil_status sybil_training_load(const char* path,
                                           const sybil_instance* inst,
                                           sybil_training** out);
SYBIL_API sybil_status sybil_training_save(const sybil_training* ts,
                                           const char* path);
/* Mislabels floor(tau*|side|) nodes of each side, tau in [0, 0.5]. */
SYBIL_API sybil_status sybil_training_noise(const sybil_training* ts,
                                            double tau, uint64_t seed,
                                            sybil_training** out);
SYBIL_API sybil_status sybil_training_balance(const sybil_training* ts,
                                              uint64_t seed,
                                              sybil_training** out);
SYBIL_API size_t sybil_training_benign_count(const sybil_training* ts);
SYBIL_API size_t sybil_training_sybil_count(const sybil_training* ts);
SYBIL_API void sybil_training_free(sybil_training* ts);

/* ---- engines ------------------------------------------------------------ */

/* Engine names: "sybilscar-c", "sybilscar-d", "sybilrank", "cia",
 * "sybilbelief", "mult-oracle". */

typedef struct sybil_engine_params {
    double theta;           /* residual prior magnitude, default 0.1 */
    double delta;           /* relative-error stop, default 1e-3 */
    int max_iters;          /* scar/lbp/oracle budget, default 20 */
    double w_hat;           /* <= 0: auto = 1 / (2 * avg_degree) */
    int w_hat_from_max;     /* auto uses max degree instead */
    double cia_alpha;       /* restart probability, default 0.15 */
    int rw_iters;           /* <= 0: ceil(log2 |V|) */
    double lbp_weight;      /* homophily strength, default 0.9 */
    double message_epsilon; /* message clamp, default 1e-10 */
    int exact_iterations;   /* run exactly max_iters, no early stop */
} sybil_engine_params;

SYBIL_API void sybil_engine_params_init(sybil_engine_params* params);

SYBIL_API sybil_status sybil_run(const char* engine, const sybil_graph* g,
                                 const sybil_training* ts,
                                 const sybil_engine_params* params, int threads,
                                 sybil_result** out);
/* Prior-driven engines only; `priors` holds one probability per node. */
SYBIL_API sybil_status sybil_run_with_priors(const char* engine,
                                             const sybil_graph* g,
                                             const double* priors, size_t count,
                                             const sybil_engine_params* params,
                                             int threads, sybil_result** out);

SYBIL_API const double* sybil_result_scores(const sybil_result* r,
                                            size_t* count);
SYBIL_API const double* sybil_result_relative_errors(const sybil_result* r,
                                                     size_t* count);
SYBIL_API int sybil_result_iterations(const sybil_result* r);
SYBIL_API int sybil_result_converged(const sybil_result* r);
SYBIL_API sybil_status sybil_result_save_scores(const sybil_result* r,
                                                const char* path);
SYBIL_API sybil_status sybil_result_save_trace(const sybil_result* r,
                                               const char* path);
SYBIL_API void sybil_result_free(sybil_result* r);

/* ---- metrics ------------------------------------------------------------ */

/* Scores CSV reader ("node_id,score"); free the buffer with
 * sybil_buffer_free. */
SYBIL_API sybil_status sybil_scores_load(const char* path, double** out,
                                         size_t* count);
/* Priors file reader ("node_id probability" per line); nodes absent from the
 * file get 0.5. Returns node_count values. */
SYBIL_API sybil_status sybil_priors_load(const char* path, uint32_t node_count,
                                         double** out, size_t* count);
SYBIL_API void sybil_buffer_free(double* buffer);

/* AUC over all instance nodes minus `exclude` (nullable). */
SYBIL_API sybil_status sybil_auc(const sybil_instance* inst,
                                 const double* scores, size_t count,
                                 const sybil_training* exclude, double* auc,
                                 size_t* n_pos, size_t* n_neg);
/* Fills k_total/interval fractions into `fractions` (caller-allocated). */
SYBIL_API sybil_status sybil_top_k_fractions(const sybil_instance* inst,
                                             const double* scores, size_t count,
                                             size_t k_total, size_t interval,
                                             double* fractions,
                                             size_t* interval_count);

/* ---- analysis ----------------------------------------------------------- */

typedef struct sybil_convergence_report {
    double spectral_radius;
    double inf_norm;
    int sufficient_ok; /* ||W||_inf < 1/2 */
    int necessary_ok;  /* rho(W) < 1/2 */
    int iterations_used;
    int power_converged;
} sybil_convergence_report;

/* weighting: "constant" (w_hat <= 0 selects the auto value) or "degree". */
SYBIL_API sybil_status sybil_check_convergence(const sybil_graph* g,
                                               const char* weighting,
                                               double w_hat,
                                               sybil_convergence_report* out);
SYBIL_API sybil_status sybil_suggest_constant_weight(const sybil_graph* g,
                                                     int use_avg, double* out);

typedef struct sybil_bound_report {
    uint64_t attack_edges;
    double avg_sybil_degree;
    uint64_t node_count;
    double bound; /* 2 * g * ceil(log2 |V|) / d(S) */
} sybil_bound_report;

SYBIL_API sybil_status sybil_security_bound(const sybil_instance* inst,
                                            sybil_bound_report* out);

/* Fast-mixing simulation; model is "er" or "pa". Reports the coefficient of
 * variation and the fraction of negative residuals over unlabeled benign
 * nodes. */
SYBIL_API sybil_status sybil_mixing_sim(const char* model,
                                        uint32_t region_nodes,
                                        double avg_degree,
                                        uint64_t attack_edges,
                                        uint32_t labeled_benign, uint64_t seed,
                                        double* coeff_variation,
                                        double* negative_fraction,
                                        uint32_t* sample_count);

/* ---- experiment drivers (write CSV files) ------------------------------- */

typedef struct sybil_sweep_spec {
    /* Instance source: base_graph_path for replica instances, otherwise
     * pair_model "er" or "pa" builds two synthetic regions. */
    const char* base_graph_path;
    const char* pair_model;
    uint32_t region_nodes;
    double er_avg_degree;
    uint32_t pa_edges_per_node;
    uint64_t attack_edges;
    size_t train_count;
    double noise_tau;
    const char* sweep_var; /* "attack-edges" | "tau" | "theta" */
    const double* values;
    size_t value_count;
    const char* const* engines;
    size_t engine_count;
    int repetitions;
    const uint64_t* seeds; /* NULL: 1..repetitions */
    size_t seed_count;
    sybil_engine_params params;
    int threads;
} sybil_sweep_spec;

SYBIL_API void sybil_sweep_spec_init(sybil_sweep_spec* spec);
SYBIL_API sybil_status sybil_run_sweep(const sybil_sweep_spec* spec,
                                       const char* csv_path);

SYBIL_API sybil_status sybil_run_trace(const sybil_graph* g,
                                       const sybil_training* ts,
                                       const char* const* engines,
                                       size_t engine_count,
                                       const sybil_engine_params* params,
                                       int iters, int threads,
                                       const char* csv_path);

SYBIL_API sybil_status sybil_run_bench(const uint64_t* edge_counts,
                                       size_t edge_count_count,
                                       const char* const* engines,
                                       size_t engine_count,
                                       const sybil_engine_params* params,
                                       int iters, double avg_degree,
                                       uint64_t seed, int repeats,
                                       const char* csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SYBILSCAR_H */
