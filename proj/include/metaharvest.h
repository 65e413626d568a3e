/* metaharvest C API: open-data metadata harvesting, cleaning and analytics.
 *
 * All functions operate on an opaque session handle carrying the pipeline
 * configuration plus the last error message. Functions return MH_OK on
 * success; on failure, mh_last_error() describes what went wrong. One
 * session must not be used from multiple threads at once.
 */
#ifndef METAHARVEST_H
#define METAHARVEST_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mh_session mh_session;

typedef enum mh_status {
    MH_OK = 0,
    MH_ERR_CONFIG = 1,
    MH_ERR_STAGE_DEPENDENCY = 2,
    MH_ERR_INVALID_ARGUMENT = 3,
    MH_ERR_PROTOCOL = 4,
    MH_ERR_TRANSPORT = 5,
    MH_ERR_MALFORMED = 6,
    MH_ERR_STORAGE = 7,
    MH_ERR_MISSING_REGISTRY = 8,
    MH_ERR_IO = 9,
    MH_ERR_INTERNAL = 10
} mh_status;

const char* mh_version(void);
const char* mh_status_name(mh_status status);

/* config_path may be NULL for an empty configuration; keys are then supplied
 * via mh_set. Returns NULL only on allocation failure. */
mh_session* mh_open(const char* config_path);
void mh_close(mh_session* session);

/* Message describing the session's last failure; empty string if none. The
 * pointer stays valid until the next call on the session. */
const char* mh_last_error(const mh_session* session);

/* Sets one configuration key (same keys as the config file). */
mh_status mh_set(mh_session* session, const char* key, const char* value);

typedef struct mh_counts {
    uint64_t input;
    uint64_t processed;
    uint64_t skipped;
} mh_counts;

/* Counts from the most recent stage run on this session. */
void mh_last_counts(const mh_session* session, mh_counts* out);

/* Pipeline stages. Optional string arguments may be NULL. */
mh_status mh_harvest(mh_session* session, const char* set_spec, const char* from,
                     const char* until);
mh_status mh_parse(mh_session* session);
mh_status mh_clean(mh_session* session);
mh_status mh_resolve(mh_session* session);
mh_status mh_link(mh_session* session);
mh_status mh_report(mh_session* session);
mh_status mh_export_unresolved(mh_session* session, const char* out_path, size_t top_n);

/* Store inspection */
mh_status mh_store_size(mh_session* session, uint64_t* out);
mh_status mh_store_export(mh_session* session, const char* out_path);
mh_status mh_store_import(mh_session* session, const char* in_path);

#ifdef __cplusplus
}
#endif

#endif /* METAHARVEST_H */
