/*===--- vtkit.h - Public C interface to the verification toolkit ---------===*
 *
 * Everything the toolkit can do is reachable through this header: parse and
 * type-check a program, execute a method, interrogate a contract against
 * intended input/output cases, property-test methods and verification
 * conditions, and drive the tiered discharge pipeline.
 *
 * Conventions:
 *   - Every function returns a vt_status; VT_OK means the operation ran.
 *     A failing check or a refuted obligation is still VT_OK: the verdict
 *     lives in the returned report. Nonzero statuses mean the request
 *     itself could not be served.
 *   - Structured results come back as UTF-8 JSON in *out_json, documented
 *     in docs/formats.md. Verb functions wrap their payload as
 *     {"report": ..., "summary": "..."} where the summary is a short
 *     human-readable rendering of the same facts.
 *   - Strings returned through char** are owned by the caller and must be
 *     released with vt_string_free. On any status other than VT_OK no
 *     result string is produced; *out_error (when the parameter is given)
 *     carries a diagnostic instead.
 *   - options_json may be NULL or "" for defaults; unknown keys are
 *     rejected so typos never silently fall back.
 *
 *===----------------------------------------------------------------------===*/
#ifndef VTKIT_H
#define VTKIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vt_status {
  VT_OK = 0,
  VT_ERR_SYNTAX = 1,    /* lexing or parsing failure */
  VT_ERR_TYPE = 2,      /* type or name-resolution failure */
  VT_ERR_NOT_FOUND = 3, /* no method, definition, or spec with that name */
  VT_ERR_INVALID = 4,   /* malformed argument: JSON, options, case list */
  VT_ERR_RUNTIME = 5,   /* evaluation failure surfaced to the caller */
  VT_ERR_IO = 6,        /* filesystem or subprocess trouble */
  VT_ERR_INTERNAL = 7   /* invariant breach inside the toolkit */
} vt_status;

/* Stable lowercase name for a status code, e.g. "not_found". */
const char* vt_status_name(vt_status status);

/* Toolkit version as "major.minor.patch". */
const char* vt_version(void);

/* Releases any string this library handed out through a char**. */
void vt_string_free(char* text);

/* A parsed, type-checked program. Opaque; thread-compatible (const use is
 * safe from multiple threads, lifetime management is the caller's). */
typedef struct vt_program vt_program;

/* Parses and type-checks source. origin names the input in diagnostics
 * (a file path, or "<memory>"). On success *out_program owns the program
 * until vt_program_free. */
vt_status vt_program_parse(const char* source, const char* origin,
                           vt_program** out_program, char** out_error);

void vt_program_free(vt_program* program);

/* Pretty-prints the program back to surface syntax. */
vt_status vt_program_print(const vt_program* program, char** out_text);

/* Structural overview: definition names plus, per method, typed parameter
 * and return lists, contract presence, and invariant counts. Raw JSON
 * object, no report wrapper. */
vt_status vt_program_summary(const vt_program* program, char** out_json);

/* Executes a method on positional arguments given as a JSON array of
 * tagged values, e.g. [{"t": "Array Int", "v": [4, 1, 2, 3]}].
 * Report: {"values": [tagged...]}. Runtime failures (fuel exhaustion)
 * return VT_ERR_RUNTIME with the reason in *out_error.
 * Options: seed, fuel. */
vt_status vt_run_method(const vt_program* program, const char* method,
                        const char* args_json, const char* options_json,
                        char** out_json, char** out_error);

/* Runs the three contract checks (precondition admission, postcondition
 * soundness, output uniqueness) for each case in cases_json against the
 * named contract. The name resolves to a method's require/ensures pair,
 * or to pure definitions <name>_pre/<name>_post, or to explicit "pre" and
 * "post" definition names in the options.
 * Options: seed, trials, size_bound, int_magnitude, rejection_budget,
 * fuel, skip_uniqueness, pre, post. */
vt_status vt_test_spec(const vt_program* program, const char* name,
                       const char* cases_json, const char* options_json,
                       char** out_json, char** out_error);

/* Property-tests a method: precondition-conditioned inputs, instrumented
 * execution (invariants, termination measure), postcondition check, and
 * shrinking of the first failing input.
 * Options: seed, trials, size_bound, int_magnitude, rejection_budget,
 * fuel, mode ("partial" | "total"), keep_going. */
vt_status vt_test_method(const vt_program* program, const char* method,
                         const char* options_json, char** out_json,
                         char** out_error);

/* Generates the verification conditions of a method. Report rows carry
 * the stable id, kind, invariant label when applicable, the rendered
 * obligation text, and a 64-bit FNV-1a hash of that text.
 * Options: mode. */
vt_status vt_generate_vcs(const vt_program* program, const char* method,
                          const char* options_json, char** out_json,
                          char** out_error);

/* Runs the tiered discharge pipeline over a method's obligations and
 * reports the per-obligation outcomes plus the method verdict.
 * Options: seed, trials, size_bound, int_magnitude, rejection_budget,
 * fuel, mode, exhaustive_budget, smt_cmd, solver_timeout_ms,
 * residual_dir. */
vt_status vt_verify_method(const vt_program* program, const char* method,
                           const char* options_json, char** out_json,
                           char** out_error);

#ifdef __cplusplus
}
#endif

#endif /* VTKIT_H */
