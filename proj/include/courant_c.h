#ifndef COURANT_C_H
#define COURANT_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(COURANT_C_BUILD)
#define COURANT_API __attribute__((visibility("default")))
#else
#define COURANT_API
#endif

typedef enum courant_status {
  COURANT_OK = 0,
  COURANT_ERR_PARSE = 1,
  COURANT_ERR_IO = 2,
  COURANT_ERR_INVALID_ARGUMENT = 3,
  COURANT_ERR_INTERNAL = 4
} courant_status;

typedef struct courant_scenario courant_scenario;
typedef struct courant_report courant_report;

/* Message of the last failed call on this thread ("" if none). */
COURANT_API const char* courant_last_error(void);
COURANT_API const char* courant_version(void);

COURANT_API courant_status courant_scenario_load(const char* path, courant_scenario** out);
COURANT_API courant_status courant_scenario_parse(const char* text, courant_scenario** out);
COURANT_API void courant_scenario_free(courant_scenario* sc);
COURANT_API const char* courant_scenario_name(const courant_scenario* sc);
COURANT_API uint64_t courant_scenario_seed(const courant_scenario* sc);
COURANT_API courant_status courant_scenario_set_seed(courant_scenario* sc, uint64_t seed);
/* Checks listed in the scenario, by report label. */
COURANT_API size_t courant_scenario_check_count(const courant_scenario* sc);
COURANT_API const char* courant_scenario_check_label(const courant_scenario* sc, size_t i);

/* All check ids the library knows, with a one-line summary. */
COURANT_API size_t courant_check_count(void);
COURANT_API const char* courant_check_id(size_t i);
COURANT_API const char* courant_check_summary(size_t i);

/* Runs every check; jobs <= 1 runs serially. */
COURANT_API courant_status courant_run(const courant_scenario* sc, int jobs, courant_report** out);
/* 0 all pass, 1 a check failed, 3 only inconclusive failures. */
COURANT_API int courant_report_exit_code(const courant_report* r);
COURANT_API const char* courant_report_json(const courant_report* r);
COURANT_API const char* courant_report_csv(const courant_report* r);
COURANT_API void courant_report_free(courant_report* r);

/* Text dump of a seeded random polynomial lattice of the given kind
   ("path", "tangent_path", "triangle", "tangent_triangle"). Free with
   courant_string_free. */
COURANT_API courant_status courant_lattice_sample(const char* kind, int dim, int N, uint64_t seed,
                                                  char** out);
COURANT_API void courant_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
