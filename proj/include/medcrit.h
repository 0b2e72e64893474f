#ifndef MEDCRIT_H
#define MEDCRIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(MEDCRIT_BUILDING_LIBRARY)
#define MEDCRIT_API __attribute__((visibility("default")))
#else
#define MEDCRIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum medcrit_status {
    MEDCRIT_OK = 0,
    MEDCRIT_INVALID_MODEL = 1,
    MEDCRIT_INVALID_ARGUMENT = 2,
    MEDCRIT_PARSE_ERROR = 3,
    MEDCRIT_DOMAIN_ERROR = 4,
    MEDCRIT_DEGENERATE_STRATUM = 5,
    MEDCRIT_SIZE_ERROR = 6,
    MEDCRIT_REPRODUCTION_FAILED = 7,
    MEDCRIT_INTERNAL_CONSISTENCY = 8,
    MEDCRIT_IO_ERROR = 9,
    MEDCRIT_INTERNAL_ERROR = 10
} medcrit_status;

typedef struct medcrit_model medcrit_model;
typedef struct medcrit_table medcrit_table;

typedef enum medcrit_format { MEDCRIT_FORMAT_TEXT = 0, MEDCRIT_FORMAT_CSV = 1 } medcrit_format;

MEDCRIT_API const char* medcrit_version(void);
MEDCRIT_API const char* medcrit_status_name(medcrit_status status);

/* Message of the last failed call on this thread; "" after a success. */
MEDCRIT_API const char* medcrit_last_error(void);

/* Models. Loading parses but does not validate; every analysis validates. */
MEDCRIT_API medcrit_status medcrit_model_load_file(const char* path, medcrit_model** out);
MEDCRIT_API medcrit_status medcrit_model_from_json(const char* text, medcrit_model** out);
/* `params` is "k=v;k=v" or NULL. */
MEDCRIT_API medcrit_status medcrit_model_builtin(const char* name, const char* params, medcrit_model** out);
MEDCRIT_API const char* medcrit_model_name(const medcrit_model* model);
/* Writes the model document (the format read by medcrit_model_load_file). */
MEDCRIT_API medcrit_status medcrit_model_write_json(const medcrit_model* model, const char* path);
MEDCRIT_API void medcrit_model_free(medcrit_model* model);

/* Key/value report of the model's invariants. MEDCRIT_INVALID_MODEL when
   any is broken, with one `violation` row each. */
MEDCRIT_API medcrit_status medcrit_validate(const medcrit_model* model, medcrit_table** out);

/* Maximum number of noise configurations enumerated per analysis. */
MEDCRIT_API void medcrit_set_unit_cap(size_t cap);

MEDCRIT_API medcrit_status medcrit_effects(const medcrit_model* model, medcrit_table** out);
MEDCRIT_API medcrit_status medcrit_identify(const medcrit_model* model, medcrit_table** out);
MEDCRIT_API medcrit_status medcrit_criteria(const medcrit_model* model, double tolerance, medcrit_table** out);

/* check: T1, T2, T3, S1 or PE. On MEDCRIT_REPRODUCTION_FAILED `out` still
   receives the full record. */
MEDCRIT_API medcrit_status medcrit_reproduce(const char* check, const char* params, medcrit_table** out);

typedef struct medcrit_sweep_options {
    int grid;
    double lo;
    double hi;
    int draws;
    uint64_t seed;
    double tolerance;
    int violations_only;
} medcrit_sweep_options;

MEDCRIT_API medcrit_sweep_options medcrit_sweep_defaults(void);

/* effect: NIE, NIE^R, PE(m), NIE^R_L, NIE^R_La or H. */
MEDCRIT_API medcrit_status medcrit_sweep(const char* family, const char* effect, const medcrit_sweep_options* options,
                                         medcrit_table** out);

/* Writes n sampled rows to `csv_path`; `out` (optional) gets a summary. */
MEDCRIT_API medcrit_status medcrit_sample(const medcrit_model* model, size_t n, uint64_t seed, const char* csv_path,
                                          medcrit_table** out);

/* estimand: psi_te, psi_cde(m), psi_pe(m), psi_nie, psi_nie_r_L, psi_nie_rl. */
MEDCRIT_API medcrit_status medcrit_estimate(const char* csv_path, const char* estimand, size_t n_boot, uint64_t seed,
                                            int a_star, int a, medcrit_table** out);

/* Tables. Strings stay valid until the table is freed. */
MEDCRIT_API size_t medcrit_table_rows(const medcrit_table* table);
MEDCRIT_API size_t medcrit_table_columns(const medcrit_table* table);
MEDCRIT_API const char* medcrit_table_column_name(const medcrit_table* table, size_t column);
MEDCRIT_API const char* medcrit_table_cell(const medcrit_table* table, size_t row, size_t column);
/* Value of the first row whose first cell equals `key`, or NULL. */
MEDCRIT_API const char* medcrit_table_lookup(const medcrit_table* table, const char* key);
MEDCRIT_API const char* medcrit_table_render(medcrit_table* table, medcrit_format format);
MEDCRIT_API void medcrit_table_free(medcrit_table* table);

#ifdef __cplusplus
}
#endif

#endif
