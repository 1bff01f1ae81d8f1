/* C interface to the padml toolkit: opaque handles, status codes, and JSON
 * strings in and out. Reports are deterministic: the same inputs produce
 * byte-identical output.
 *
 * Commands: "orbit", "period", "mahler-fit", "series-diag", "dml-solve",
 * "return-set", "gap-ratio", "count-heights".
 *
 * options_json (may be NULL): {"prime": p, "precision": N, "horizon": H}
 * override the problem file; "n" (count-heights), "n_max" (orbit/gap-ratio)
 * and "include_records" (gap-ratio) are per-command.
 */
#ifndef PADML_H
#define PADML_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdml_status {
  PDML_OK = 0,
  PDML_ERR_INVALID = 1,   /* bad arguments, domain errors */
  PDML_ERR_PARSE = 2,     /* malformed problem file / polynomial */
  PDML_ERR_PRECISION = 3, /* working precision exhausted */
  PDML_ERR_RESOURCE = 4,  /* configured resource budget exceeded */
  PDML_ERR_INTERNAL = 5
} pdml_status;

typedef struct pdml_problem pdml_problem;

/* Parses and validates a problem file; the handle can be reused across
 * commands. Returns PDML_OK and writes the handle, or an error status. */
pdml_status pdml_problem_create(const char* json_text, pdml_problem** out);
void pdml_problem_destroy(pdml_problem* problem);

/* Runs a command against a problem (NULL is allowed for "count-heights").
 * On success writes a malloc'd JSON report to *report_json_out; release it
 * with pdml_free. On failure the report is NULL and pdml_error_message()
 * describes the failure. */
pdml_status pdml_command(const pdml_problem* problem, const char* command,
                         const char* options_json, char** report_json_out);

void pdml_free(char* s);

/* Last error on this thread. */
const char* pdml_error_message(void);
int pdml_error_code(void);

unsigned pdml_abi_version(void);

#ifdef __cplusplus
}
#endif

#endif /* PADML_H */
