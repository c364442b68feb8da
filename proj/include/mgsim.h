/* mgsim — microgrid energy management simulator, C API.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return MG_OK on success; on failure mg_last_error() holds a
 * human-readable (possibly multi-line) description for the calling thread.
 */
#ifndef MGSIM_H
#define MGSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mg_status {
    MG_OK = 0,
    MG_ERR_INVALID_ARGUMENT = 1, /* bad parameter or violated precondition */
    MG_ERR_PARSE = 2,            /* malformed scenario/config text */
    MG_ERR_IO = 3,               /* file could not be read or written */
    MG_ERR_NUMERIC = 4,          /* simulation state diverged */
    MG_ERR_INTERNAL = 5
} mg_status;

const char* mg_version(void);
const char* mg_status_name(mg_status status);
/* Message for the most recent failure on this thread; never NULL. */
const char* mg_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct mg_scenario mg_scenario;

/* Scenario CSV: mandatory header
 *   hour,pv_kw,load_kw,ev_connected,ev_power_kw,tariff,fit,forecast_pv_kw,forecast_load_kw
 * one row per hourly step, hour = 0-based step index. */
mg_status mg_scenario_parse_file(const char* path, mg_scenario** out);
mg_status mg_scenario_parse_string(const char* text, mg_scenario** out);
void mg_scenario_free(mg_scenario* scenario);

size_t mg_scenario_horizon_steps(const mg_scenario* scenario);
double mg_scenario_step_hours(const mg_scenario* scenario);

/* ---- configuration ------------------------------------------------------ */

typedef struct mg_config mg_config;

/* Defaults: 10 kWh battery, SoC 10-90%, 5 kW charge/discharge, eta 0.95,
 * initial SoC 0.5; 30 kWh EV capped at 90%. */
mg_status mg_config_create(mg_config** out);
/* Applies key=value override lines from a file (see README for keys). */
mg_status mg_config_load_file(mg_config* config, const char* path);
mg_status mg_config_set(mg_config* config, const char* key, const char* value);
void mg_config_free(mg_config* config);

/* ---- dispatch simulation ------------------------------------------------ */

typedef struct mg_trace mg_trace;

typedef struct mg_record {
    size_t t;
    int case_id;            /* 1..4 */
    int mode;               /* 1..6 for M1..M6 */
    double p_pv_kw;         /* PV used */
    double p_pv_curtailed_kw;
    double p_grid_kw;       /* +import / -export */
    double p_batt_kw;       /* +discharge / -charge */
    double p_ev_kw;
    double p_l_total_kw;
    double battery_soc;     /* after the step */
    double ev_soc;          /* after the step */
    double cash_flow;       /* positive = cost */
} mg_record;

mg_status mg_simulate(const mg_scenario* scenario, const mg_config* config, mg_trace** out);
void mg_trace_free(mg_trace* trace);

size_t mg_trace_step_count(const mg_trace* trace);
mg_status mg_trace_record(const mg_trace* trace, size_t t, mg_record* out);
double mg_trace_total_bill(const mg_trace* trace);
/* Bill of the no-EMS baseline (grid serves deficit, surplus exported). */
mg_status mg_baseline_bill(const mg_scenario* scenario, const mg_config* config, double* out);

mg_status mg_trace_write_csv(const mg_trace* trace, const char* path);
mg_status mg_trace_write_summary(const mg_trace* trace, const mg_scenario* scenario,
                                 const mg_config* config, const char* path);

/* ---- electrical layer (vector current controller) ----------------------- */

typedef struct mg_controller_params {
    double v_ll_rms;      /* grid line-to-line RMS voltage [V], default 400 */
    double f_hz;          /* grid frequency [Hz], default 50 */
    double l_f;           /* filter inductance [H], default 0.007 */
    double r_f;           /* filter resistance [ohm], default 0.1 */
    double xi;            /* damping ratio, default 0.707 */
    double omega_n;       /* natural frequency [rad/s], default 2*pi*300 */
    double dt_s;          /* integration step [s], default 20e-6 */
    int reference_shaping; /* nonzero: shape refs for the design response */
} mg_controller_params;

void mg_controller_params_init(mg_controller_params* params);

/* Pole-placement gains on the RL filter plant: kp = 2 xi wn L, ki = wn^2 L. */
mg_status mg_tune_pi(const mg_controller_params* params, double* kp, double* ki);

typedef struct mg_tracking_result {
    double kp, ki;
    double id_ref_a;       /* steady d-axis current reference */
    double id_final_a;
    double p_final_w;
    double q_final_var;
    double overshoot_pct;  /* of the step magnitude */
    double settling_s;     /* 2% band */
} mg_tracking_result;

/* Closed-loop PLL + PI + RL-plant run: zero reference until step_time_s, then
 * p_step_w until duration_s. Writes the waveform CSV when csv_path != NULL. */
mg_status mg_run_tracking(const mg_controller_params* params, double p_step_w,
                          double step_time_s, double duration_s, const char* csv_path,
                          mg_tracking_result* out);

/* Time for the PLL frequency estimate to stay within 0.5 rad/s of nominal,
 * starting phase_offset_rad away from the grid angle. */
mg_status mg_pll_lock_time(const mg_controller_params* params, double phase_offset_rad,
                           double duration_s, double* out_lock_s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MGSIM_H */
