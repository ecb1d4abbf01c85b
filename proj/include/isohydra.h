#ifndef ISOHYDRA_H
#define ISOHYDRA_H

#include <stddef.h>

#if defined(ISOHYDRA_BUILDING_LIBRARY)
#define IHY_API __attribute__((visibility("default")))
#else
#define IHY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ihy_status {
  IHY_OK = 0,
  IHY_VERIFICATION_FAILED = 1,  // verify ran; at least one check failed
  IHY_DOMAIN = 2,               // parameter or grid outside the admissible domain
  IHY_SINGULAR = 3,             // family singular on the grid; see ihy_last_error_radius
  IHY_NUMERICAL = 4,            // non-convergence, failed certificate, bracket failure
  IHY_INVALID_ARGUMENT = 5,     // null handle or pointer, unknown name
  IHY_INTERNAL = 6
} ihy_status;

typedef struct ihy_config ihy_config;
typedef struct ihy_table ihy_table;
typedef struct ihy_report ihy_report;

IHY_API const char* ihy_version(void);
IHY_API const char* ihy_status_name(ihy_status status);

// Message of the last failed call on this thread ("" after success).
IHY_API const char* ihy_last_error(void);
// Radius tied to the last failure, NaN when there is none.
IHY_API double ihy_last_error_radius(void);

IHY_API ihy_status ihy_config_create(ihy_config** out);
IHY_API void ihy_config_destroy(ihy_config* config);
// hydrogen, two-param, fernandez, intermediate.
IHY_API ihy_status ihy_config_set_family(ihy_config* config, const char* family);
IHY_API ihy_status ihy_config_set_l(ihy_config* config, int l);
IHY_API ihy_status ihy_config_set_nu1(ihy_config* config, double nu1);
IHY_API ihy_status ihy_config_set_nu2(ihy_config* config, double nu2);
IHY_API ihy_status ihy_config_set_gamma(ihy_config* config, double gamma);
// gamma at its supremum (Abraham-Moses boundary).
IHY_API ihy_status ihy_config_set_gamma_sup(ihy_config* config);
IHY_API ihy_status ihy_config_set_rmin(ihy_config* config, double r_min);
IHY_API ihy_status ihy_config_set_rmax(ihy_config* config, double r_max);
IHY_API ihy_status ihy_config_set_points(ihy_config* config, size_t points);
IHY_API ihy_status ihy_config_set_levels(ihy_config* config, int levels);
// quad_tol, ode_tol, residual_tol, fd_step_scale.
IHY_API ihy_status ihy_config_set_tolerance(ihy_config* config, const char* key, double value);
// four_over_r (default) or one_over_r.
IHY_API ihy_status ihy_config_set_gamma_variant(ihy_config* config, const char* variant);
IHY_API ihy_status ihy_config_validate(const ihy_config* config);

// Tables: potential (r, V_base, V_deformed, delta), states (r, psi_*,
// density_*), spectrum (analytic vs fd and shooting levels).
IHY_API ihy_status ihy_potential_table(const ihy_config* config, ihy_table** out);
IHY_API ihy_status ihy_states_table(const ihy_config* config, ihy_table** out);
IHY_API ihy_status ihy_spectrum_table(const ihy_config* config, ihy_table** out);
IHY_API void ihy_table_destroy(ihy_table* table);
IHY_API size_t ihy_table_rows(const ihy_table* table);
IHY_API size_t ihy_table_columns(const ihy_table* table);
// NULL when out of range. Pointers stay valid for the table's lifetime.
IHY_API const char* ihy_table_column_name(const ihy_table* table, size_t column);
IHY_API const double* ihy_table_column(const ihy_table* table, size_t column);
IHY_API size_t ihy_table_metadata_count(const ihy_table* table);
IHY_API const char* ihy_table_metadata_key(const ihy_table* table, size_t index);
IHY_API const char* ihy_table_metadata_value(const ihy_table* table, size_t index);

// Runs the verification suite. The report is produced whenever the suite ran:
// the status is IHY_OK when every check passed, IHY_VERIFICATION_FAILED
// otherwise.
IHY_API ihy_status ihy_verify(const ihy_config* config, ihy_report** out);
IHY_API void ihy_report_destroy(ihy_report* report);
IHY_API int ihy_report_passed(const ihy_report* report);
IHY_API const char* ihy_report_json(const ihy_report* report);
IHY_API size_t ihy_report_check_count(const ihy_report* report);
IHY_API ihy_status ihy_report_check(const ihy_report* report, size_t index, const char** name, double* value,
                                    double* threshold, int* pass);

#ifdef __cplusplus
}
#endif

#endif
