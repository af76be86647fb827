/* Copyright (c) 2026 simscore contributors */
/* SPDX-License-Identifier: Apache-2.0 */
#ifndef SIMSCORE_H_
#define SIMSCORE_H_

/*
 * C interface to the simscore shared library.
 *
 * Conventions:
 *   - Every fallible function returns an int status code:
 *       SS_OK (0)    success
 *       SS_USAGE (1) bad arguments or malformed configuration
 *       SS_DATA (2)  invalid or inconsistent input data
 *     On failure ss_last_error() describes the problem (thread-local).
 *   - Out-parameters are written only on SS_OK.
 *   - Strings returned through char** are heap-allocated; release them
 *     with ss_string_free. Handles are released with their _free function.
 *   - Configuration is passed as JSON text; unknown keys are rejected
 *     only where noted, otherwise ignored.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SS_OK 0
#define SS_USAGE 1
#define SS_DATA 2

typedef struct ss_dataset ss_dataset;
typedef struct ss_model ss_model;

/* Library semantic version, e.g. "1.0.0". Static storage; do not free. */
const char* ss_version(void);

/* Message for the most recent failure on this thread. Static storage. */
const char* ss_last_error(void);

void ss_string_free(char* text);

/* ---- datasets -------------------------------------------------------- */

int ss_dataset_load(const char* path, ss_dataset** out);
int ss_dataset_save(const ss_dataset* dataset, const char* path);
void ss_dataset_free(ss_dataset* dataset);

/* Summary JSON: {"groups":[{"kernel_type","group_id","records"}],
 * "records":N,"architecture":...,"levels":[...]}. */
int ss_dataset_info(const ss_dataset* dataset, char** out_json);

/* Builds a dataset from simulator stats dumps.
 * config JSON:
 * {
 *   "topology": {...} | "topology_path": "...",
 *   "mapping_path": "..." (optional; defaults to the gem5 mapping),
 *   "groups": [{"kernel_type","group_id","params":{...}}],
 *   "records": [{"kernel_type","group_id","impl_id",
 *                "stats_path": "...", "runtime_samples": [..]}]
 * } */
int ss_ingest(const char* config_json, ss_dataset** out);

/* Serializes the built-in synthetic benchmark family specification.
 * config JSON (all optional): {"seed":0,"sigma":0.02,"group_count":5} */
int ss_default_spec(const char* config_json, char** out_json);

/* Generates the built-in synthetic benchmark family.
 * config JSON (all optional): {"seed":0,"sigma":0.02,"group_count":5,
 * "impls_per_group":500,"spec":{full spec object, overrides the rest}} */
int ss_synthesize(const char* config_json, ss_dataset** out);

/* ---- models ---------------------------------------------------------- */

/* config JSON: {"predictor":"mlr"|"mlp"|"gp"|"gbt","seed":0,
 * "mlp":{...},"gbt":{...},"gp":{"constant","length_scale","noise"}}
 * Unknown hyperparameter keys inside the per-predictor blocks are
 * rejected. */
int ss_train(const ss_dataset* dataset, const char* config_json, ss_model** out);

int ss_model_save(const ss_model* model, const char* path);
int ss_model_load(const char* path, ss_model** out);
void ss_model_free(ss_model* model);

/* {"kind":...,"schema_fingerprint":...,"feature_count":N} */
int ss_model_info(const ss_model* model, char** out_json);

/* ---- ranking and evaluation ------------------------------------------ */

/* Scores every record of the dataset with the model and reports ranking
 * quality per group.
 * config JSON (optional): {"window":"exact"|"static"|"dynamic",
 * "window_size":N}  (default exact group means)
 * Result JSON: {"reports":[{kernel_type,group_id,predictor,e_top1,r_top1,
 * q_low,q_high,n}],"rankings":[{kernel_type,group_id,
 * "order":[impl ids best-first]}],"csv":"..."} */
int ss_rank(const ss_dataset* dataset, const ss_model* model, const char* config_json,
            char** out_json);

/* Repeated random train/test splits, one model per predictor per split,
 * per-sample median predictions, ranking metrics per group.
 * plan JSON (all optional): {"test_count":100,"repetitions":10,"seed":0,
 * "predictors":["mlr","mlp","gp","gbt"],"include_perfect":false,
 * "logo":{"kernel_type":...,"group_id":...,"predictor":"gbt"}}
 * With "logo", the result instead compares a model trained without the
 * named group against one trained with it, on that group's test samples.
 * Result JSON: {"reports":[...],"csv":"...","table":"..."} */
int ss_evaluate(const ss_dataset* dataset, const char* plan_json, char** out_json);

/* ---- hyperparameter tuning ------------------------------------------- */

/* Tunes GP hyperparameters on a train/test split of the dataset.
 * config JSON (all optional): {"seed":0,"budget":30,"n_init":5,
 * "test_fraction":0.25,"loss":"mse"|"mae"|"rss",
 * "method":"bayes"|"grid",
 * "grid":{"constant":[...],"length_scale":[...],"noise":[...]}}
 * Result JSON: {"best":{"constant","length_scale","noise"},
 * "best_objective":...,"trace":[{point..,objective,failed}],
 * "trace_csv":"..."} */
int ss_tune(const ss_dataset* dataset, const char* config_json, char** out_json);

/* ---- orchestration --------------------------------------------------- */

/* Minimum parallel simulator count that beats sequential native
 * measurement: ceil(t_simulator / ((t_cooldown + t_ref) * n_exe)). */
int ss_plan_parallelism(double t_simulator, double t_cooldown, double t_ref,
                        uint64_t n_exe, uint64_t* out_count);

/* Runs a batched candidate-tuning loop against a simulator adapter.
 * config JSON:
 * {
 *   "model_path": "...",                      (required)
 *   "workdir": "...",                         (required)
 *   "spec": {synthetic spec}|"spec_path":..., (required)
 *   "group": {"kernel_type","group_id"},      (default: first spec group)
 *   "adapter": "mock"|"command",              (default mock)
 *   "command": {"build_command","run_command","timeout_seconds"},
 *   "mapping_path": "...",                    (default gem5 mapping)
 *   "generator": "random"|"greedy",           (default random)
 *   "rounds": 4, "batch_size": 8, "n_parallel": 4, "seed": 0,
 *   "window": "static"|"dynamic", "window_size": 8,
 *   "archive_path": "..."                     (optional JSONL output)
 * }
 * Result JSON: {"jobs":N,"ok":N,"failed":N,"exhausted_early":bool,
 * "best":{"job_id","score","impl_params"}|null,"statuses":{...}} */
int ss_run_loop(const char* config_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SIMSCORE_H_ */
