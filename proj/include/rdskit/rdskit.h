/*
 * rdskit C API.
 *
 * Radial dispersion uncertainty scores for sampled LLM generations, the
 * evaluation protocol around them (AUROC, best-of-N), an OpenAI-compatible
 * embedding client and the file pipelines used by the rdskit CLI.
 *
 * Conventions:
 *   - Every fallible call returns rdskit_status; RDSKIT_OK is 0.
 *   - On failure, rdskit_last_error() describes the error for the calling
 *     thread until its next failing call.
 *   - Objects are opaque handles released with the matching _destroy call.
 *   - Embeddings are passed row-major: n rows of dim doubles.
 */
#ifndef RDSKIT_RDSKIT_H
#define RDSKIT_RDSKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RDSKIT_BUILDING)
#    define RDSKIT_API __declspec(dllexport)
#  else
#    define RDSKIT_API __declspec(dllimport)
#  endif
#else
#  define RDSKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define RDSKIT_VERSION_MAJOR 0
#define RDSKIT_VERSION_MINOR 1
#define RDSKIT_VERSION_PATCH 0

typedef enum rdskit_status {
    RDSKIT_OK = 0,
    RDSKIT_E_INVALID_ARGUMENT = 1,
    RDSKIT_E_DEGENERATE_EMBEDDING = 2,
    RDSKIT_E_LENGTH_MISMATCH = 3,
    RDSKIT_E_INVALID_LIKELIHOOD = 4,
    RDSKIT_E_EMPTY_GENERATION = 5,
    RDSKIT_E_INVALID_VECTOR = 6,
    RDSKIT_E_DUPLICATE_ID = 7,
    RDSKIT_E_MALFORMED_RECORD = 8,
    RDSKIT_E_SCHEMA_VERSION = 9,
    RDSKIT_E_IO = 10,
    RDSKIT_E_CONFIG = 11,
    RDSKIT_E_ENCODER_INCONSISTENCY = 12,
    RDSKIT_E_PARTIAL_BATCH = 13,
    RDSKIT_E_AUTH = 14,
    RDSKIT_E_NETWORK = 15,
    RDSKIT_E_OUTPUT_EXISTS = 16,
    RDSKIT_E_INTERNAL = 99
} rdskit_status;

RDSKIT_API const char* rdskit_version(void);
RDSKIT_API const char* rdskit_status_name(rdskit_status status);
/* Message of the calling thread's last failure; "" if none. */
RDSKIT_API const char* rdskit_last_error(void);

typedef enum rdskit_log_level {
    RDSKIT_LOG_DEBUG = 0,
    RDSKIT_LOG_INFO = 1,
    RDSKIT_LOG_WARN = 2,
    RDSKIT_LOG_ERROR = 3
} rdskit_log_level;

typedef void (*rdskit_log_fn)(rdskit_log_level level, const char* message, void* user);

/* NULL restores logging to stderr. */
RDSKIT_API void rdskit_set_log_callback(rdskit_log_fn fn, void* user);
RDSKIT_API void rdskit_set_log_level(rdskit_log_level level);

/* ---------------------------------------------------------------------- */
/* Dispersion kernel                                                      */
/* ---------------------------------------------------------------------- */

typedef struct rdskit_embedding_set rdskit_embedding_set;

/* n >= 2 rows; rows off unit norm by more than 1e-6 are renormalized and
 * counted in *renormalized (may be NULL). */
RDSKIT_API rdskit_status rdskit_embedding_set_create(const double* data, size_t n, size_t dim,
                                                     size_t* renormalized,
                                                     rdskit_embedding_set** out);
RDSKIT_API void rdskit_embedding_set_destroy(rdskit_embedding_set* set);
RDSKIT_API size_t rdskit_embedding_set_size(const rdskit_embedding_set* set);
RDSKIT_API size_t rdskit_embedding_set_dim(const rdskit_embedding_set* set);
/* Copies the (normalized) rows into out[n * dim]. */
RDSKIT_API rdskit_status rdskit_embedding_set_data(const rdskit_embedding_set* set, double* out);

RDSKIT_API rdskit_status rdskit_l2_normalize(const double* v, size_t dim, double* out);

/* out has dim entries. */
RDSKIT_API rdskit_status rdskit_centroid(const rdskit_embedding_set* set, double* out);
RDSKIT_API rdskit_status rdskit_weighted_centroid(const rdskit_embedding_set* set,
                                                  const double* weights, size_t n_weights,
                                                  double* out);

RDSKIT_API rdskit_status rdskit_rds(const rdskit_embedding_set* set, double* out);
RDSKIT_API rdskit_status rdskit_rds_l2(const rdskit_embedding_set* set, double* out);
RDSKIT_API rdskit_status rdskit_eigen_embed(const rdskit_embedding_set* set, double* out);
RDSKIT_API rdskit_status rdskit_rds_weighted(const rdskit_embedding_set* set, const double* weights,
                                             size_t n_weights, double* out);
/* out has n entries. */
RDSKIT_API rdskit_status rdskit_rds_per_sample(const rdskit_embedding_set* set, double* out);
RDSKIT_API rdskit_status rdskit_rds_w_per_sample(const rdskit_embedding_set* set,
                                                 const double* weights, size_t n_weights,
                                                 double* out);
RDSKIT_API rdskit_status rdskit_avg_pairwise_cosine(const rdskit_embedding_set* set, double* out);

/* Normalized exp(-anll_i); out has n entries. */
RDSKIT_API rdskit_status rdskit_probs_from_anll(const double* anlls, size_t n, double* out);

/* ---------------------------------------------------------------------- */
/* Baselines                                                              */
/* ---------------------------------------------------------------------- */

RDSKIT_API rdskit_status rdskit_anll(const double* logprobs, size_t n_tokens, double* out);
RDSKIT_API rdskit_status rdskit_nll(const double* logprobs, size_t n_tokens, double* out);

/* mode: "last_number", "normalized_full" or "regex:<pattern>".
 * Writes the canonical answer (NUL-terminated, truncated to buf_size) and
 * sets *unanswerable. */
RDSKIT_API rdskit_status rdskit_extract_answer(const char* text, const char* mode, char* buf,
                                               size_t buf_size, int* unanswerable);

/* 1 - majority/N over the answers extracted from texts with `mode`. */
RDSKIT_API rdskit_status rdskit_self_consistency(const char* const* texts, size_t n,
                                                 const char* mode, double* out);

/* ---------------------------------------------------------------------- */
/* Evaluation                                                             */
/* ---------------------------------------------------------------------- */

RDSKIT_API rdskit_status rdskit_rouge_l_f1(const char* candidate, const char* reference, double* out);

/* incorrect[i] != 0 marks a hallucinated (positive) item. *defined is 0 when
 * one class is empty, in which case *out is left untouched. */
RDSKIT_API rdskit_status rdskit_auroc(const double* uncertainty, const int* incorrect, size_t n,
                                      double* out, int* defined);

RDSKIT_API rdskit_status rdskit_best_of_n_select(const double* scores, size_t n, size_t* index);

/* ---------------------------------------------------------------------- */
/* Regime simulator                                                       */
/* ---------------------------------------------------------------------- */

typedef enum rdskit_regime {
    RDSKIT_REGIME_COHERENT = 0,
    RDSKIT_REGIME_HEMISPHERIC = 1,
    RDSKIT_REGIME_OPPOSING = 2
} rdskit_regime;

typedef struct rdskit_regime_config {
    rdskit_regime regime;
    size_t n;
    size_t dim;
    double noise;
    size_t clusters;
    uint64_t seed;
} rdskit_regime_config;

RDSKIT_API rdskit_status rdskit_regime_generate(const rdskit_regime_config* cfg,
                                                rdskit_embedding_set** out);

/* ---------------------------------------------------------------------- */
/* Embedding cache and client                                             */
/* ---------------------------------------------------------------------- */

typedef struct rdskit_cache rdskit_cache;

/* dir == NULL or "" selects $RDSKIT_CACHE_DIR or the user cache directory. */
RDSKIT_API rdskit_status rdskit_cache_open(const char* dir, rdskit_cache** out);
RDSKIT_API void rdskit_cache_destroy(rdskit_cache* cache);
RDSKIT_API rdskit_status rdskit_cache_store(rdskit_cache* cache, const char* encoder_id,
                                            const char* text, const double* v, size_t dim);
/* *found = 0 on a miss. On a hit the vector is copied into out when
 * capacity >= *dim; *dim is always set. */
RDSKIT_API rdskit_status rdskit_cache_lookup(rdskit_cache* cache, const char* encoder_id,
                                             const char* text, double* out, size_t capacity,
                                             size_t* dim, int* found);

typedef struct rdskit_endpoint_config {
    const char* base_url;
    const char* api_key; /* may be NULL */
    const char* model;
    int64_t timeout_ms;
    int max_retries;
    int max_in_flight;
    size_t batch_size;
} rdskit_endpoint_config;

RDSKIT_API void rdskit_endpoint_config_init(rdskit_endpoint_config* cfg);

typedef struct rdskit_embedder rdskit_embedder;

/* cache may be NULL; the embedder keeps its own reference to it. */
RDSKIT_API rdskit_status rdskit_embedder_create(const rdskit_endpoint_config* cfg,
                                                rdskit_cache* cache, rdskit_embedder** out);
RDSKIT_API void rdskit_embedder_destroy(rdskit_embedder* embedder);
/* Embeds n texts. Returns a newly allocated row-major matrix in *out
 * (release with rdskit_free) and its dimension in *dim. */
RDSKIT_API rdskit_status rdskit_embedder_embed(rdskit_embedder* embedder, const char* const* texts,
                                               size_t n, double** out, size_t* dim);
RDSKIT_API uint64_t rdskit_embedder_network_calls(const rdskit_embedder* embedder);

RDSKIT_API void rdskit_free(void* p);

/* ---------------------------------------------------------------------- */
/* Pipelines                                                              */
/* ---------------------------------------------------------------------- */

typedef enum rdskit_correctness {
    RDSKIT_CORRECTNESS_FROM_RECORD = 0,
    RDSKIT_CORRECTNESS_EXACT = 1,
    RDSKIT_CORRECTNESS_ROUGE = 2
} rdskit_correctness;

typedef struct rdskit_run_options rdskit_run_options;

/* Defaults, then an optional JSON config file, then RDSKIT_* environment
 * variables. Setters applied afterwards take precedence. */
RDSKIT_API rdskit_status rdskit_run_options_create(const char* config_file, rdskit_run_options** out);
RDSKIT_API void rdskit_run_options_destroy(rdskit_run_options* opts);

/* String keys: input, output, scores, sidecar, sidecar_out, methods
 * (comma-separated), extract, embed_url, embed_model, llm_url, llm_model,
 * api_key, cache_dir, regimes (comma-separated), noise (comma-separated). */
RDSKIT_API rdskit_status rdskit_run_options_set_string(rdskit_run_options* opts, const char* key,
                                                       const char* value);
/* Integer keys: n_samples, max_tokens, seed, workers, strict, force,
 * want_logprobs, use_cache, max_retries, max_in_flight, batch_size,
 * timeout_ms, dim, clusters, seeds. */
RDSKIT_API rdskit_status rdskit_run_options_set_int(rdskit_run_options* opts, const char* key,
                                                    int64_t value);
/* Real keys: temperature, rouge_threshold. */
RDSKIT_API rdskit_status rdskit_run_options_set_double(rdskit_run_options* opts, const char* key,
                                                       double value);
RDSKIT_API rdskit_status rdskit_run_options_set_correctness(rdskit_run_options* opts,
                                                            rdskit_correctness mode);

typedef struct rdskit_run_summary {
    size_t records_read;
    size_t scored;
    size_t skipped;
    size_t rds_w_missing;
    uint64_t network_calls;
} rdskit_run_summary;

RDSKIT_API rdskit_status rdskit_cmd_score(const rdskit_run_options* opts, rdskit_run_summary* summary);
RDSKIT_API rdskit_status rdskit_cmd_evaluate(const rdskit_run_options* opts, rdskit_run_summary* summary);
RDSKIT_API rdskit_status rdskit_cmd_bestofn(const rdskit_run_options* opts, rdskit_run_summary* summary);
RDSKIT_API rdskit_status rdskit_cmd_embed(const rdskit_run_options* opts, rdskit_run_summary* summary);
RDSKIT_API rdskit_status rdskit_cmd_sample(const rdskit_run_options* opts, rdskit_run_summary* summary);
RDSKIT_API rdskit_status rdskit_cmd_simulate(const rdskit_run_options* opts, rdskit_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* RDSKIT_RDSKIT_H */
