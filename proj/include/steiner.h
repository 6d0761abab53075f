#ifndef STEINER_H
#define STEINER_H

/* C interface to the Steiner tree library. All functions returning
 * steiner_status report failure details through steiner_last_error(), which
 * is thread local. Objects are opaque; free them with their _free function.
 * Strings returned through char** are owned by the caller and released with
 * steiner_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    STEINER_OK = 0,
    STEINER_ERR_ARGUMENT = 1, /* bad parameter or flag combination */
    STEINER_ERR_PARSE = 2,    /* malformed instance or table file */
    STEINER_ERR_TIMEOUT = 3,  /* time budget exceeded */
    STEINER_ERR_MEMORY = 4,   /* memory budget or allocation failure */
    STEINER_ERR_INTERNAL = 5
} steiner_status;

const char* steiner_last_error(void);

/* ---- instances ---- */

typedef struct steiner_instance steiner_instance;

steiner_status steiner_instance_parse(const char* stp_text, steiner_instance** out);
steiner_status steiner_instance_load(const char* path, steiner_instance** out);
void steiner_instance_free(steiner_instance* inst);

int steiner_instance_nodes(const steiner_instance* inst);
int steiner_instance_edges(const steiner_instance* inst);
int steiner_instance_terminals(const steiner_instance* inst);

/* ---- solving ----
 *
 * spec is "key=value;key=value". Keys: algo (tm kmb mehlhorn gcf lca lp
 * exact), k, gen, dist, sp, win, save, reduce, singlepass, presep, consep,
 * stronger, bound, prune, rounding, seed, time (seconds), mem (bytes).
 * Omitted keys take the documented defaults. */

typedef struct steiner_result steiner_result;

steiner_status steiner_solve(const steiner_instance* inst, const char* spec,
                             steiner_result** out);
void steiner_result_free(steiner_result* result);

double steiner_result_cost(const steiner_result* result);
int steiner_result_edge_count(const steiner_result* result);
/* 0-based endpoints of the i-th tree edge; returns 0 on bad index */
int steiner_result_edge(const steiner_result* result, int i, int* u, int* v, double* cost);

/* ---- benchmark harness ---- */

/* validates a spec string; warnings (if any) come back newline separated */
steiner_status steiner_check_spec(const char* spec, char** warnings_out);

/* runs every instance file and returns RunRecord CSV including the header;
 * bounds_path may be NULL */
steiner_status steiner_run_batch(const char* spec, const char* const* paths, int npaths,
                                 int workers, const char* bounds_path, char** csv_out);

/* markdown report over one or more record CSVs; bounds_text and groups_text
 * may be NULL */
steiner_status steiner_report(const char* const* csv_texts, int ncsv,
                              const char* bounds_text, const char* groups_text,
                              char** markdown_out);

/* ---- small helpers ---- */

/* worst-case k-restriction ratio; k >= 2 */
steiner_status steiner_rho_k(int k, double* out);
/* (cost/best - 1) * 1000; best > 0 */
steiner_status steiner_gap_permil(double cost, double best, double* out);

void steiner_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STEINER_H */
