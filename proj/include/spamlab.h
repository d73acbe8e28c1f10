/* C interface to the spamlab text-classification pipeline.
 *
 * All entry points return 0 on success or one of the SLAB_ERR_* codes; the
 * message for the most recent failure on the calling thread is available
 * via slab_last_error(). Configuration objects are opaque handles. */
#ifndef SPAMLAB_H
#define SPAMLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SLAB_OK 0
#define SLAB_ERR_UNKNOWN 1
#define SLAB_ERR_CONFIG 2
#define SLAB_ERR_CORPUS 3
#define SLAB_ERR_TRAINING 4
#define SLAB_ERR_NUMERIC 5
#define SLAB_ERR_IO 6
#define SLAB_ERR_INVALID 7

typedef struct slab_config slab_config;

const char* slab_version(void);

/* Message for the last failed call on this thread; empty string if none. */
const char* slab_last_error(void);

/* A new configuration with default settings. Never fails; free with
 * slab_config_destroy. */
slab_config* slab_config_create(void);
void slab_config_destroy(slab_config* cfg);

/* Merge a JSON configuration document into cfg. */
int slab_config_load_json(slab_config* cfg, const char* json_text);

/* cfg serialized as JSON; valid until the next call on this thread. */
const char* slab_config_dump_json(slab_config* cfg);

/* Full pipeline: evaluate every configured model and write reports, plots
 * and attributions into the configured output directory. */
int slab_run(const slab_config* cfg);

/* Re-evaluate across dictionary sizes; NULL sizes runs the default sweep. */
int slab_ablate_features(const slab_config* cfg, const size_t* sizes, size_t n_sizes);

/* Paired comparison of raw vs preprocessed input. */
int slab_ablate_prep(const slab_config* cfg);

/* Repeated hold-out runs plus all-pairs significance tests. */
int slab_compare(const slab_config* cfg);

/* Shapley attributions for the configured models. */
int slab_explain(const slab_config* cfg);

/* Rebuild SVG plots from the CSV artifacts in the output directory. */
int slab_plot(const slab_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* SPAMLAB_H */
