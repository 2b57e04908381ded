/* C interface to the plane-walking automata library.
 *
 * Every fallible call returns PWA_OK or an error status and, when `err` is
 * non-NULL, stores a heap-allocated message there on failure. All strings
 * handed out by the library (including error messages) are malloc'd copies;
 * release them with pwa_free. Handles are opaque; release them with their
 * matching *_free function. NULL out-parameters are allowed anywhere and mean
 * "not interested".
 */

#ifndef PWA_H
#define PWA_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pwa_automaton pwa_automaton;
typedef struct pwa_grid pwa_grid; /* a torus or a finite pattern */

typedef enum {
  PWA_OK = 0,
  PWA_ERR_PARSE = 1,     /* malformed JSON / grid text */
  PWA_ERR_INVALID = 2,   /* semantic errors: bad references, modes, mismatches */
  PWA_ERR_TOO_LARGE = 3, /* arena / enumeration / state-count bounds exceeded */
  PWA_ERR_ARGUMENT = 4,  /* bad names, indices, options */
} pwa_status;

void pwa_free(char* s);
void pwa_automaton_free(pwa_automaton* a);
void pwa_grid_free(pwa_grid* g);

/* ---- automata ---- */

int pwa_automaton_parse(const char* json_text, pwa_automaton** out, char** err);
int pwa_automaton_to_json(const pwa_automaton* a, char** out, char** err);
/* Newline-separated problem list; empty string iff the automaton is valid. */
int pwa_automaton_validate(const pwa_automaton* a, char** report, char** err);
/* Alternation hierarchy level, e.g. "Pi(1)", "Delta(2)", "AltUnbounded". */
int pwa_automaton_classify(const pwa_automaton* a, char** level, char** err);
/* Equivalent automaton using unit directions only (torus-equivalent). */
int pwa_automaton_normalize(const pwa_automaton* a, pwa_automaton** out, char** err);

/* ---- grids (text format; tori start with a "torus p q" header) ---- */

int pwa_grid_parse(const char* text, pwa_grid** out, char** err);
int pwa_grid_render(const pwa_grid* g, char** out, char** err);
int pwa_grid_is_torus(const pwa_grid* g, int* out);

/* ---- acceptance ---- */

/* verdict: 1 accept, 0 reject. record_json (optional) receives one
 * machine-readable record {"instance", "verdict", "witness"?, "millis"};
 * with want_witness the record carries the extracted strategy on accept or
 * the attractor depths of the losing initial nodes on reject. */
int pwa_accepts(const pwa_automaton* a, const pwa_grid* g, int want_witness,
                int* verdict, char** record_json, char** err);

/* ---- gallery and oracles ---- */

/* JSON array of {"name", "description"}. */
int pwa_gallery_list(char** out_json, char** err);
int pwa_gallery_automaton(const char* name, pwa_automaton** out, char** err);
/* Example grids: "xn" (uses n), "kari_moore_rect" and "kari_moore_torus"
 * (use n and k). */
int pwa_gallery_grid(const char* name, int n, int k, pwa_grid** out, char** err);
/* Reference deciders: "even_runs" (tori only), "ssu", "cone_labyrinth". */
int pwa_oracle(const char* name, const pwa_grid* g, int* verdict, char** err);

/* ---- comparison and enumeration ----
 *
 * opts_json keys (all optional): "max_p", "max_q" (default 3), "patterns"
 * (bool: enumerate rectangular patterns instead of tori), "samples" (-1 =
 * exhaustive), "seed", "threads" (0 = hardware), "records" (bool: include
 * one record per instance). Exhaustive enumeration is capped at 10^7
 * instances. */

/* Exactly one of `b` and `oracle` must be given. Report:
 * {"checked", "equivalent", "first"?: {"index","instance","a","b"},
 *  "records"?: [...]}. */
int pwa_compare(const pwa_automaton* a, const pwa_automaton* b,
                const char* oracle, const char* opts_json, char** report_json,
                char** err);

/* One record per line, canonical instance order. */
int pwa_enumerate(const pwa_automaton* a, const char* opts_json,
                  int want_witness, char** records_jsonl, char** err);

/* ---- reports ---- */

/* Powerset-cover report: product alphabet size and, when enum_cap > 0,
 * clause statistics plus the forbidden plus-shaped patterns found among the
 * first enum_cap patterns in canonical order. */
int pwa_cover_report(const pwa_automaton* a, long long enum_cap,
                     char** report_json, char** err);

/* Replays a branch against a grid and lists its pumping pairs.
 * branch_json: {"start": {"x", "y"}, "state": "<id>", "edges": [indices]}.
 * With pair_index >= 0 the chosen pair is pumped `times` times and the
 * pumped branch is replayed too. */
int pwa_pump_report(const pwa_automaton* a, const pwa_grid* g,
                    const char* branch_json, int pair_index, int times,
                    char** report_json, char** err);

/* Complement maxima of the unverified arithmetic family for
 * n in [n_min, n_max], under both the strict (j<i) and relaxed (j<=i)
 * readings, compared against the closed form n*n-n-1. */
int pwa_complement_audit(int n_min, int n_max, char** report_json, char** err);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PWA_H */
