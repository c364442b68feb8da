#include "mgsim.h"

#include "config.hpp"
#include "dispatch.hpp"
#include "electrical.hpp"
#include "errors.hpp"
#include "profiles.hpp"
#include "util.hpp"

#include <exception>
#include <new>
#include <string>

struct mg_scenario {
    mgsim::Scenario impl;
};
struct mg_config {
    mgsim::MicrogridConfig impl;
};
struct mg_trace {
    mgsim::DispatchTrace impl;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
mg_status guarded(Fn&& fn) {
    try {
        fn();
        return MG_OK;
    } catch (const mgsim::ParseError& e) {
        g_last_error = e.what();
        return MG_ERR_PARSE;
    } catch (const mgsim::IoError& e) {
        g_last_error = e.what();
        return MG_ERR_IO;
    } catch (const mgsim::NumericError& e) {
        g_last_error = e.what();
        return MG_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return MG_ERR_INVALID_ARGUMENT;
    } catch (const std::out_of_range& e) {
        g_last_error = e.what();
        return MG_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MG_ERR_INTERNAL;
    }
}

mg_status require(bool ok, const char* what) {
    if (ok) return MG_OK;
    g_last_error = what;
    return MG_ERR_INVALID_ARGUMENT;
}

mgsim::TrackingOptions to_options(const mg_controller_params& p) {
    mgsim::TrackingOptions opt;
    opt.grid.v_ll_rms = p.v_ll_rms;
    opt.grid.f_hz = p.f_hz;
    opt.filter.l_f = p.l_f;
    opt.filter.r_f = p.r_f;
    opt.xi = p.xi;
    opt.omega_n = p.omega_n;
    opt.dt_s = p.dt_s;
    opt.reference_shaping = p.reference_shaping != 0;
    return opt;
}

} // namespace

extern "C" {

const char* mg_version(void) { return "0.1.0"; }

const char* mg_status_name(mg_status status) {
    switch (status) {
        case MG_OK: return "MG_OK";
        case MG_ERR_INVALID_ARGUMENT: return "MG_ERR_INVALID_ARGUMENT";
        case MG_ERR_PARSE: return "MG_ERR_PARSE";
        case MG_ERR_IO: return "MG_ERR_IO";
        case MG_ERR_NUMERIC: return "MG_ERR_NUMERIC";
        case MG_ERR_INTERNAL: return "MG_ERR_INTERNAL";
    }
    return "MG_ERR_UNKNOWN";
}

const char* mg_last_error(void) { return g_last_error.c_str(); }

mg_status mg_scenario_parse_file(const char* path, mg_scenario** out) {
    if (auto s = require(path && out, "path and out must be non-NULL")) return s;
    return guarded([&] {
        auto* handle = new mg_scenario{mgsim::load_scenario_file(path)};
        *out = handle;
    });
}

mg_status mg_scenario_parse_string(const char* text, mg_scenario** out) {
    if (auto s = require(text && out, "text and out must be non-NULL")) return s;
    return guarded([&] {
        auto* handle = new mg_scenario{mgsim::parse_scenario(text)};
        *out = handle;
    });
}

void mg_scenario_free(mg_scenario* scenario) { delete scenario; }

size_t mg_scenario_horizon_steps(const mg_scenario* scenario) {
    return scenario ? scenario->impl.horizon_steps : 0;
}

double mg_scenario_step_hours(const mg_scenario* scenario) {
    return scenario ? scenario->impl.step_hours() : 0.0;
}

mg_status mg_config_create(mg_config** out) {
    if (auto s = require(out != nullptr, "out must be non-NULL")) return s;
    return guarded([&] { *out = new mg_config{}; });
}

mg_status mg_config_load_file(mg_config* config, const char* path) {
    if (auto s = require(config && path, "config and path must be non-NULL")) return s;
    return guarded([&] {
        // parse into a copy so a failed load leaves the config untouched
        mgsim::MicrogridConfig next = config->impl;
        next.apply_overrides(mgsim::read_text_file(path));
        config->impl = next;
    });
}

mg_status mg_config_set(mg_config* config, const char* key, const char* value) {
    if (auto s = require(config && key && value, "config, key and value must be non-NULL"))
        return s;
    return guarded([&] { config->impl.set(key, value); });
}

void mg_config_free(mg_config* config) { delete config; }

mg_status mg_simulate(const mg_scenario* scenario, const mg_config* config, mg_trace** out) {
    if (auto s = require(scenario && config && out, "scenario, config and out must be non-NULL"))
        return s;
    return guarded([&] { *out = new mg_trace{mgsim::simulate(scenario->impl, config->impl)}; });
}

void mg_trace_free(mg_trace* trace) { delete trace; }

size_t mg_trace_step_count(const mg_trace* trace) {
    return trace ? trace->impl.records.size() : 0;
}

mg_status mg_trace_record(const mg_trace* trace, size_t t, mg_record* out) {
    if (auto s = require(trace && out, "trace and out must be non-NULL")) return s;
    if (auto s = require(t < trace->impl.records.size(), "record index out of range")) return s;
    const auto& r = trace->impl.records[t];
    out->t = r.t;
    out->case_id = r.case_id;
    out->mode = static_cast<int>(r.mode);
    out->p_pv_kw = r.flows.p_pv_kw;
    out->p_pv_curtailed_kw = r.flows.p_pv_curtailed_kw;
    out->p_grid_kw = r.flows.p_grid_kw;
    out->p_batt_kw = r.flows.p_batt_kw;
    out->p_ev_kw = r.p_ev_kw;
    out->p_l_total_kw = r.flows.p_l_total_kw;
    out->battery_soc = r.battery_soc_after;
    out->ev_soc = r.ev_soc_after;
    out->cash_flow = r.cash_flow;
    return MG_OK;
}

double mg_trace_total_bill(const mg_trace* trace) {
    return trace ? trace->impl.total_bill : 0.0;
}

mg_status mg_baseline_bill(const mg_scenario* scenario, const mg_config* config, double* out) {
    if (auto s = require(scenario && config && out, "scenario, config and out must be non-NULL"))
        return s;
    return guarded([&] { *out = mgsim::baseline_bill(scenario->impl, config->impl); });
}

mg_status mg_trace_write_csv(const mg_trace* trace, const char* path) {
    if (auto s = require(trace && path, "trace and path must be non-NULL")) return s;
    return guarded([&] { mgsim::write_text_file(path, mgsim::trace_to_csv(trace->impl)); });
}

mg_status mg_trace_write_summary(const mg_trace* trace, const mg_scenario* scenario,
                                 const mg_config* config, const char* path) {
    if (auto s = require(trace && scenario && config && path,
                         "trace, scenario, config and path must be non-NULL"))
        return s;
    return guarded([&] {
        mgsim::write_text_file(
            path, mgsim::summary_text(trace->impl, scenario->impl, config->impl));
    });
}

void mg_controller_params_init(mg_controller_params* params) {
    if (!params) return;
    params->v_ll_rms = 400.0;
    params->f_hz = 50.0;
    params->l_f = 0.007;
    params->r_f = 0.1;
    params->xi = 0.707;
    params->omega_n = 2.0 * mgsim::kPi * 300.0;
    params->dt_s = 20e-6;
    params->reference_shaping = 1;
}

mg_status mg_tune_pi(const mg_controller_params* params, double* kp, double* ki) {
    if (auto s = require(params && kp && ki, "params, kp and ki must be non-NULL")) return s;
    return guarded([&] {
        auto gains = mgsim::tune_pi({params->l_f, params->r_f}, params->xi, params->omega_n);
        *kp = gains.kp;
        *ki = gains.ki;
    });
}

mg_status mg_run_tracking(const mg_controller_params* params, double p_step_w,
                          double step_time_s, double duration_s, const char* csv_path,
                          mg_tracking_result* out) {
    if (auto s = require(params && out, "params and out must be non-NULL")) return s;
    return guarded([&] {
        auto opt = to_options(*params);
        std::vector<mgsim::PowerStep> schedule{{step_time_s, p_step_w}};
        auto trace = mgsim::run_tracking_sim(schedule, duration_s, opt);
        if (csv_path) mgsim::write_text_file(csv_path, mgsim::tracking_to_csv(trace));

        auto metrics = mgsim::step_metrics(trace, step_time_s, p_step_w);
        out->kp = trace.gains.kp;
        out->ki = trace.gains.ki;
        out->id_ref_a = mgsim::current_refs(p_step_w, 0.0, opt.grid.v_d_nominal()).d;
        out->id_final_a = metrics.id_final;
        out->p_final_w = metrics.p_final_w;
        out->q_final_var = metrics.q_final_var;
        out->overshoot_pct = metrics.overshoot_pct;
        out->settling_s = metrics.settling_s;
    });
}

mg_status mg_pll_lock_time(const mg_controller_params* params, double phase_offset_rad,
                           double duration_s, double* out_lock_s) {
    if (auto s = require(params && out_lock_s, "params and out must be non-NULL")) return s;
    return guarded([&] {
        mgsim::GridParams grid{params->v_ll_rms, params->f_hz};
        *out_lock_s = mgsim::pll_lock_time(grid, phase_offset_rad, duration_s, params->dt_s);
    });
}

} // extern "C"
