/* ggr_c.h -- the stable C surface of the rule library.
 *
 * Conventions: every function that can fail returns a ggr_status and leaves
 * a human-readable message in ggr_last_error() (thread-local, valid until
 * the next library call on the same thread). Output strings are heap
 * allocations owned by the caller; release them with ggr_string_free().
 * Handles are opaque; each *_free accepts NULL.
 *
 * Token strings cross this boundary as text: tokens separated by spaces,
 * the empty string denoting the empty token string.
 */
#ifndef GGR_C_H_
#define GGR_C_H_

#include <stddef.h>
#include <stdint.h>

#ifndef GGR_API
#define GGR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ggr_status {
    GGR_OK = 0,
    GGR_E_USAGE = 1,          /* bad arguments to a call */
    GGR_E_IO = 2,             /* file system failure */
    GGR_E_PARSE = 3,          /* malformed grammar/transducer/partition text */
    GGR_E_VALIDATION = 4,     /* well-formed input violating a structural rule */
    GGR_E_ALPHABET = 5,       /* operands over incompatible alphabets */
    GGR_E_DOMAIN = 6,         /* variable-domain misuse */
    GGR_E_UNDEFINED = 7,      /* a transduction required at an undefined point */
    GGR_E_GROWTH = 8,         /* growth-bound violation or missing bound */
    GGR_E_NO_RULE_MATCHES = 9,
    GGR_E_DEPTH_EXCEEDED = 10,
    GGR_E_NON_DECREASING_RECURSION = 11,
    GGR_E_AMBIGUOUS_MATCH = 12,
    GGR_E_STATE_LIMIT = 13,
    GGR_E_INTERNAL = 14
} ggr_status;

typedef struct ggr_grammar ggr_grammar;
typedef struct ggr_transducer ggr_transducer;
typedef struct ggr_partition ggr_partition;
typedef struct ggr_rule ggr_rule;
typedef struct ggr_map ggr_map;

GGR_API const char* ggr_version(void);
/* Stable lower-case name of a status ("ok", "parse", "no-rule-matches", ...). */
GGR_API const char* ggr_status_name(ggr_status s);
GGR_API const char* ggr_last_error(void);
GGR_API void ggr_string_free(char* s);

/* ------------------------------------------------------------- grammars */

GGR_API ggr_status ggr_grammar_parse(const char* text, ggr_grammar** out);
GGR_API void ggr_grammar_free(ggr_grammar* g);
/* Canonical spelling: alphabets, domain declarations, executable rules. */
GGR_API ggr_status ggr_grammar_print(const ggr_grammar* g, char** out);
GGR_API size_t ggr_grammar_rule_count(const ggr_grammar* g);
/* Rules that parsed but fall outside the executable restricted form. */
GGR_API size_t ggr_grammar_general_rule_count(const ggr_grammar* g);
GGR_API ggr_status ggr_grammar_rule_text(const ggr_grammar* g, size_t i,
                                         int* line, char** out);
GGR_API ggr_status ggr_grammar_general_rule_text(const ggr_grammar* g, size_t i,
                                                 int* line, char** out);
GGR_API ggr_status ggr_grammar_interpret(const ggr_grammar* g, const char* input,
                                         char** out);
/* The induced map (memoized, thread-safe); carries a derived growth bound
 * when one is certifiable. */
GGR_API ggr_status ggr_grammar_to_map(const ggr_grammar* g, ggr_map** out);
/* Rule-driven example generation. TSV rows "input<TAB>output". */
GGR_API ggr_status ggr_grammar_augment(const ggr_grammar* g,
                                       const char* const* seeds,
                                       size_t seed_count, uint64_t budget,
                                       uint64_t max_len, char** tsv_out);

/* ------------------------------------------- built-in example grammars */

/* Newline-separated registry names. */
GGR_API ggr_status ggr_corpus_list(char** out);
/* Grammar text (or rule-file text) for one registry name. */
GGR_API ggr_status ggr_corpus_text(const char* name, char** out);
/* Seeded sample of (input, interpretation) pairs from a registry grammar,
 * all inputs of length <= max_len, as TSV rows "input<TAB>output". */
GGR_API ggr_status ggr_corpus_dataset(const char* name, uint64_t max_len,
                                      uint64_t count, uint64_t seed,
                                      char** tsv_out);

/* ---------------------------------------------------------- transducers */

GGR_API ggr_status ggr_transducer_parse(const char* text, ggr_transducer** out);
GGR_API void ggr_transducer_free(ggr_transducer* t);
GGR_API ggr_status ggr_transducer_print(const ggr_transducer* t, char** out);
GGR_API uint32_t ggr_transducer_state_count(const ggr_transducer* t);
GGR_API int ggr_transducer_is_deterministic(const ggr_transducer* t);
GGR_API ggr_status ggr_transducer_run(const ggr_transducer* t, const char* input,
                                      char** out);
/* Deterministic machines only. infer_bound != 0 derives and attaches an
 * output-growth bound when the machine carries none. */
GGR_API ggr_status ggr_transducer_to_map(const ggr_transducer* t, int infer_bound,
                                         ggr_map** out);
GGR_API ggr_status ggr_transducer_quotient(const ggr_transducer* t,
                                           const ggr_partition* p,
                                           ggr_transducer** out);

/* ----------------------------------------------------------- partitions */

/* One block per line, member state names space-separated, '#' comments. */
GGR_API ggr_status ggr_partition_parse(const ggr_transducer* t, const char* text,
                                       ggr_partition** out);
GGR_API void ggr_partition_free(ggr_partition* p);
GGR_API ggr_status ggr_partition_print(const ggr_transducer* t,
                                       const ggr_partition* p, char** out);

/* ------------------------------------------------------ symmetry checks */

/* Exact language comparison of the quotient against the original, outputs
 * ignored. *symmetric is 1/0; on 0, *counterexample is a string accepted
 * only by the quotient (shortest, then lexicographically least). On 1 the
 * pointer is set to NULL. */
GGR_API ggr_status ggr_check_symmetry_acceptor(const ggr_transducer* t,
                                               const ggr_partition* p,
                                               int* symmetric,
                                               char** counterexample);
/* Bounded comparison of the quotient's transduction relation against the
 * deterministic original, inputs up to max_len. detail describes what
 * differed; counterexample/detail are NULL when symmetric. */
GGR_API ggr_status ggr_check_symmetry_transducer(const ggr_transducer* t,
                                                 const ggr_partition* p,
                                                 uint32_t max_len,
                                                 int* symmetric,
                                                 uint32_t* checked_len,
                                                 char** counterexample,
                                                 char** detail);

/* ------------------------------------------------------- rules + metric */

/* The text must hold exactly one rule, in the executable restricted form.
 * Alphabet directives and domain declarations are allowed (and needed when
 * the rule's literals do not mention every token). */
GGR_API ggr_status ggr_rule_parse(const char* text, ggr_rule** out);
GGR_API void ggr_rule_free(ggr_rule* r);
GGR_API ggr_status ggr_rule_print(const ggr_rule* r, char** out);

typedef struct ggr_err_result {
    double lower;             /* exact partial sum: a certified lower bound */
    double upper;             /* partial sum + tail majorant */
    uint64_t truncation_len;  /* largest total substituted length included */
    double beta;
    uint64_t term_count;
    uint64_t skipped_terms;   /* undefined points skipped (skip policy only) */
    int width_reached;        /* tail <= the requested width */
} ggr_err_result;

/* Certified interval for the rule-discrepancy functional. The map must
 * carry a growth bound. skip_undefined != 0 drops terms where the map is
 * undefined (counting them) instead of failing. */
GGR_API ggr_status ggr_err_estimate(const ggr_map* m, const ggr_rule* r,
                                    double beta, double target_width,
                                    uint64_t max_len, int skip_undefined,
                                    ggr_err_result* out);
/* Exact partial sum at a fixed truncation length, broken down by total
 * substituted length: TSV rows "length<TAB>sum<TAB>terms". */
GGR_API ggr_status ggr_err_per_length(const ggr_map* m, const ggr_rule* r,
                                      double beta, uint64_t truncation_len,
                                      int skip_undefined, char** tsv_out);

/* ----------------------------------------------------------------- maps */

GGR_API void ggr_map_free(ggr_map* m);
GGR_API ggr_status ggr_map_evaluate(const ggr_map* m, const char* input,
                                    char** out);
GGR_API int ggr_map_has_growth_bound(const ggr_map* m);
/* Finite table from TSV rows "input<TAB>output"; '#' comments. Alphabets
 * are collected from the rows in order of first appearance. bound_den == 0
 * means no growth bound; otherwise outputs are certified to satisfy
 * len(out) <= (bound_num/bound_den) * len(in)^bound_exp. */
GGR_API ggr_status ggr_map_from_tsv(const char* tsv, int64_t bound_num,
                                    int64_t bound_den, uint32_t bound_exp,
                                    ggr_map** out);

/* --------------------------------------------------------------- search */

typedef struct ggr_search_caps {
    uint32_t max_h;            /* most variables per rule */
    uint32_t max_k;            /* most recursive calls on the right side */
    uint32_t max_pattern_len;  /* left side / call argument length cap */
    uint32_t max_literal_len;  /* output block length cap */
    double beta;               /* scoring weight, > 0 */
    uint32_t truncation_len;   /* partial-sum horizon */
} ggr_search_caps;

/* Score every rule in the box against the map and rank by certified upper
 * bound (ties: simpler first, then canonical order). domain_exprs are
 * expressions like "SIGMA+" or "regex(\"a\" | \"b\")" parsed against the
 * map's input alphabet; they form the menu variable domains are drawn
 * from. limit == 0 keeps everything. TSV rows
 * "rank<TAB>lower<TAB>upper<TAB>complexity<TAB>skipped<TAB>rule". */
GGR_API ggr_status ggr_search(const ggr_map* m, const ggr_search_caps* caps,
                              const char* const* domain_exprs,
                              size_t domain_count, uint64_t limit,
                              char** tsv_out);

#ifdef __cplusplus
}
#endif

#endif /* GGR_C_H_ */
