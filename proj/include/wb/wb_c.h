#pragma once

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; on failure wb_last_error() describes the problem. */
typedef enum wb_status {
    WB_OK = 0,
    WB_ERR_PARSE = 1,
    WB_ERR_INVALID = 2,
    WB_ERR_LIMIT = 3,
    WB_ERR_INTERNAL = 4,
    WB_ERR_ARG = 5
} wb_status;

typedef enum wb_dialect { WB_FO1 = 0, WB_FOE1 = 1, WB_FOE1INF = 2 } wb_dialect;
typedef enum wb_logic { WB_SMSO = 0, WB_WMSO = 1, WB_NMSO = 2 } wb_logic;
typedef enum wb_construct_kind { WB_FINITARY = 0, WB_NOETHERIAN = 1 } wb_construct_kind;

typedef struct wb_lts wb_lts;
typedef struct wb_game wb_game;
typedef struct wb_onestep wb_onestep;
typedef struct wb_mu wb_mu;
typedef struct wb_aut wb_aut;
typedef struct wb_mso wb_mso;

const char* wb_version(void);
/* Message of the last failing call on this thread; empty after success. */
const char* wb_last_error(void);
/* Strings returned through char** belong to the caller. */
void wb_string_free(char* s);

/* Transition systems */
wb_status wb_lts_from_json(const char* text, wb_lts** out);
wb_status wb_lts_to_json(const wb_lts* s, char** out);
wb_status wb_lts_validate_json(const char* text, char** report_json, int* ok);
wb_status wb_lts_bisimilar(const wb_lts* a, const wb_lts* b, int* out);
wb_status wb_lts_is_tree(const wb_lts* s, int* out);
wb_status wb_lts_noetherian(const wb_lts* s, const int* states, size_t count, int* out);
wb_status wb_lts_unravel(const wb_lts* s, int depth, wb_lts** out);
wb_status wb_lts_random_tree(uint64_t seed, int max_states, const char* const* props, size_t nprops, wb_lts** out);
int wb_lts_states(const wb_lts* s);
void wb_lts_free(wb_lts* s);

/* Parity games */
wb_status wb_game_from_json(const char* text, wb_game** out);
wb_status wb_game_solve(const wb_game* g, char** solution_json);
void wb_game_free(wb_game* g);

/* One-step formulas; predicates are numbered by first use. */
wb_status wb_onestep_parse(const char* text, wb_dialect d, wb_onestep** out);
wb_status wb_onestep_to_string(const wb_onestep* f, char** out);
wb_status wb_onestep_dual(const wb_onestep* f, wb_onestep** out);
/* Basic form as JSON plus its expansion as a formula. */
wb_status wb_onestep_basic_form(const wb_onestep* f, char** bf_json, wb_onestep** expanded);
/* Continuous basic form with respect to the named predicates. */
wb_status wb_onestep_continuous_form(const wb_onestep* f, const char* const* b_preds, size_t nb, char** bf_json,
                                     wb_onestep** expanded);
wb_status wb_onestep_diamond(const wb_onestep* f, wb_onestep** out);
/* Model JSON: {"elements":[["a"],[]]} or {"weighted":[[["a","b"],3],[["a"],"omega"]]}. */
wb_status wb_onestep_eval(const wb_onestep* f, const char* model_json, int* out);
wb_status wb_onestep_equivalent(const wb_onestep* a, const wb_onestep* b, int bound, int* out);
wb_status wb_onestep_fragments(const wb_onestep* f, const char* const* b_preds, size_t nb, char** report_json);
void wb_onestep_free(wb_onestep* f);

/* Mu-calculus formulas */
wb_status wb_mu_parse(const char* text, wb_mu** out);
wb_status wb_mu_to_string(const wb_mu* f, char** out);
wb_status wb_mu_holds(const wb_mu* f, const wb_lts* s, int* out);
/* Evaluation game, its solution and the winner at the initial position. */
wb_status wb_mu_game(const wb_mu* f, const wb_lts* s, char** report_json);
wb_status wb_mu_classify(const wb_mu* f, char** report_json);
wb_status wb_mu_guard(const wb_mu* f, wb_mu** out);
void wb_mu_free(wb_mu* f);

/* Parity automata */
wb_status wb_aut_from_json(const char* text, wb_aut** out);
wb_status wb_aut_to_json(const wb_aut* a, char** out);
wb_status wb_aut_accepts(const wb_aut* a, const wb_lts* s, int* out);
wb_status wb_aut_complement(const wb_aut* a, wb_aut** out);
wb_status wb_aut_classify(const wb_aut* a, char** report_json);
wb_status wb_aut_to_formula(const wb_aut* a, wb_mu** out);
/* props may be NULL to use the free letters of the formula. */
wb_status wb_aut_from_formula(const wb_mu* f, const char* const* props, size_t nprops, wb_aut** out);
wb_status wb_aut_construct(const wb_aut* a, wb_construct_kind kind, wb_aut** out);
wb_status wb_aut_project(const wb_aut* a, const char* letter, wb_aut** out);
wb_status wb_aut_diamond(const wb_aut* a, wb_aut** out);
/* Construct, classify, and compare with the input on `trees` seeded random trees. */
wb_status wb_aut_simulate(const wb_aut* a, wb_construct_kind kind, int trees, uint64_t seed, char** report_json,
                          int* ok);
int wb_aut_states(const wb_aut* a);
void wb_aut_free(wb_aut* a);

/* Monadic second-order formulas */
wb_status wb_mso_parse(const char* text, wb_logic logic, wb_mso** out);
wb_status wb_mso_to_string(const wb_mso* f, char** out);
/* Sentences are evaluated directly; a free variable v is bound to the initial state. */
wb_status wb_mso_eval(const wb_mso* f, const wb_lts* s, int* out);
wb_status wb_mso_compile(const wb_mso* f, wb_logic logic, wb_aut** out);
wb_status wb_mso_from_mu(const wb_mu* f, wb_logic logic, wb_mso** out);
void wb_mso_free(wb_mso* f);

/* Fixpoints of X |-> [[body]] with var := X on s */
wb_status wb_fix_trace(const wb_mu* body, const char* var, const wb_lts* s, char** report_json);
wb_status wb_fix_witness(const wb_mu* body, const char* var, const wb_lts* s, int state, char** report_json);
wb_status wb_fix_unfold(const wb_mu* body, const char* var, const wb_lts* s, int state, char** report_json);

/* Randomized cross-validation */
wb_status wb_fuzz_suites(char** list_json);
wb_status wb_fuzz_run(const char* suite, int n, uint64_t seed, char** report_json, int* ok);
wb_status wb_replay(const char* text, char** report_json, int* ok);

#ifdef __cplusplus
}
#endif
