// mgsim command line: run dispatch simulations, validate scenario files, and
// check the current-controller design. Talks to the simulator exclusively
// through the C API in mgsim.h.

#include <mgsim.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitIoFailure = 2;

int exit_code_for(mg_status status) {
    switch (status) {
        case MG_OK: return kExitOk;
        case MG_ERR_IO: return kExitIoFailure;
        default: return kExitInvalidInput;
    }
}

int fail(mg_status status, const char* context) {
    std::fprintf(stderr, "mgsim: %s: %s\n%s\n", context, mg_status_name(status),
                 mg_last_error());
    return exit_code_for(status);
}

struct ScenarioGuard {
    mg_scenario* ptr = nullptr;
    ~ScenarioGuard() { mg_scenario_free(ptr); }
};
struct ConfigGuard {
    mg_config* ptr = nullptr;
    ~ConfigGuard() { mg_config_free(ptr); }
};
struct TraceGuard {
    mg_trace* ptr = nullptr;
    ~TraceGuard() { mg_trace_free(ptr); }
};

int run_simulate(const std::string& scenario_path, const std::string& config_path,
                 const std::string& out_dir, const std::string& report) {
    ScenarioGuard scenario;
    if (auto st = mg_scenario_parse_file(scenario_path.c_str(), &scenario.ptr))
        return fail(st, scenario_path.c_str());

    ConfigGuard config;
    if (auto st = mg_config_create(&config.ptr)) return fail(st, "config");
    if (!config_path.empty()) {
        if (auto st = mg_config_load_file(config.ptr, config_path.c_str()))
            return fail(st, config_path.c_str());
    }

    TraceGuard trace;
    if (auto st = mg_simulate(scenario.ptr, config.ptr, &trace.ptr))
        return fail(st, "simulate");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "mgsim: cannot create output directory %s: %s\n",
                     out_dir.c_str(), ec.message().c_str());
        return kExitIoFailure;
    }

    if (report == "trace" || report == "both") {
        std::string path = out_dir + "/trace.csv";
        if (auto st = mg_trace_write_csv(trace.ptr, path.c_str()))
            return fail(st, path.c_str());
        std::printf("wrote %s\n", path.c_str());
    }
    if (report == "summary" || report == "both") {
        std::string path = out_dir + "/summary.txt";
        if (auto st = mg_trace_write_summary(trace.ptr, scenario.ptr, config.ptr, path.c_str()))
            return fail(st, path.c_str());
        std::printf("wrote %s\n", path.c_str());
    }

    double baseline = 0.0;
    if (auto st = mg_baseline_bill(scenario.ptr, config.ptr, &baseline))
        return fail(st, "baseline bill");

    size_t mode_counts[7] = {0};
    size_t n = mg_trace_step_count(trace.ptr);
    for (size_t t = 0; t < n; ++t) {
        mg_record rec;
        if (auto st = mg_trace_record(trace.ptr, t, &rec)) return fail(st, "trace record");
        if (rec.mode >= 1 && rec.mode <= 6) mode_counts[rec.mode]++;
    }

    std::printf("total_bill=%.6f\n", mg_trace_total_bill(trace.ptr));
    std::printf("baseline_bill=%.6f\n", baseline);
    std::printf("mode_counts:");
    for (int m = 1; m <= 6; ++m) std::printf(" M%d=%zu", m, mode_counts[m]);
    std::printf("\n");
    return kExitOk;
}

int run_validate(const std::string& scenario_path) {
    ScenarioGuard scenario;
    mg_status st = mg_scenario_parse_file(scenario_path.c_str(), &scenario.ptr);
    if (st == MG_OK) {
        std::printf("OK\n");
        return kExitOk;
    }
    std::fprintf(stderr, "%s: invalid scenario\n%s\n", scenario_path.c_str(), mg_last_error());
    return exit_code_for(st);
}

struct ControllerThresholds {
    double max_overshoot_pct = 10.0;
    double max_settling_ms = 6.0;
    double max_steady_err_pct = 0.1;
    double max_pll_lock_s = 0.2;
};

int run_controller_check(mg_controller_params params, double p_step_w,
                         const std::string& out_dir, const ControllerThresholds& thr) {
    double kp = 0.0, ki = 0.0;
    if (auto st = mg_tune_pi(&params, &kp, &ki)) return fail(st, "tune");
    std::printf("kp=%.6f\nki=%.6f\n", kp, ki);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::fprintf(stderr, "mgsim: cannot create output directory %s: %s\n",
                     out_dir.c_str(), ec.message().c_str());
        return kExitIoFailure;
    }
    std::string csv_path = out_dir + "/waveform.csv";

    mg_tracking_result res;
    if (auto st = mg_run_tracking(&params, p_step_w, 0.005, 0.05, csv_path.c_str(), &res))
        return fail(st, "tracking run");

    double lock_s = 0.0;
    if (auto st = mg_pll_lock_time(&params, 2.0, 0.25, &lock_s)) return fail(st, "pll lock");

    double steady_err_pct =
        res.id_ref_a != 0.0 ? 100.0 * std::abs(res.id_final_a - res.id_ref_a) / res.id_ref_a
                            : std::abs(res.id_final_a);
    std::printf("id_ref=%.6f A\nid_final=%.6f A\n", res.id_ref_a, res.id_final_a);
    std::printf("steady_error=%.4f %%\n", steady_err_pct);
    std::printf("overshoot=%.3f %%\n", res.overshoot_pct);
    std::printf("settling=%.4f ms\n", res.settling_s * 1e3);
    std::printf("pll_lock=%.4f s\n", lock_s);
    std::printf("wrote %s\n", csv_path.c_str());

    int rc = kExitOk;
    auto check = [&](const char* name, double value, double limit) {
        if (value > limit) {
            std::fprintf(stderr, "FAIL %s: %.4f exceeds limit %.4f\n", name, value, limit);
            rc = kExitInvalidInput;
        }
    };
    check("overshoot_pct", res.overshoot_pct, thr.max_overshoot_pct);
    check("settling_ms", res.settling_s * 1e3, thr.max_settling_ms);
    check("steady_error_pct", steady_err_pct, thr.max_steady_err_pct);
    check("pll_lock_s", lock_s, thr.max_pll_lock_s);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"microgrid energy management simulator"};
    app.require_subcommand(1);

    std::string scenario_path, config_path, out_dir = "out", report = "both";

    auto* sim = app.add_subcommand("simulate", "run a scenario and write trace/summary");
    sim->add_option("--scenario", scenario_path, "scenario CSV file")->required();
    sim->add_option("--config", config_path, "key=value config overrides");
    sim->add_option("--out", out_dir, "output directory (default: out)");
    sim->add_option("--report", report, "trace|summary|both (default: both)")
        ->check(CLI::IsMember({"trace", "summary", "both"}));

    auto* val = app.add_subcommand("validate", "check a scenario file");
    val->add_option("--scenario", scenario_path, "scenario CSV file")->required();

    mg_controller_params params;
    mg_controller_params_init(&params);
    ControllerThresholds thr;
    double p_step_w = 10000.0;
    std::string ctl_out_dir = "out";

    auto* ctl = app.add_subcommand("controller-check",
                                   "tune the current controller and run a step response");
    ctl->add_option("--xi", params.xi, "damping ratio (default 0.707)");
    ctl->add_option("--omega-n", params.omega_n, "natural frequency rad/s (default 2*pi*300)");
    ctl->add_option("--lf", params.l_f, "filter inductance H (default 0.007)");
    ctl->add_option("--rf", params.r_f, "filter resistance ohm (default 0.1)");
    ctl->add_option("--dt", params.dt_s, "integration step s (default 20e-6)");
    ctl->add_option("--p-step", p_step_w, "active power step W (default 10000)");
    ctl->add_option("--out", ctl_out_dir, "output directory for waveform.csv");
    ctl->add_option("--max-overshoot-pct", thr.max_overshoot_pct, "overshoot limit (default 10)");
    ctl->add_option("--max-settling-ms", thr.max_settling_ms, "settling limit (default 6)");
    ctl->add_option("--max-steady-err-pct", thr.max_steady_err_pct,
                    "steady-state error limit (default 0.1)");
    ctl->add_option("--max-pll-lock-s", thr.max_pll_lock_s, "PLL lock limit (default 0.2)");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) return run_simulate(scenario_path, config_path, out_dir, report);
    if (val->parsed()) return run_validate(scenario_path);
    return run_controller_check(params, p_step_w, ctl_out_dir, thr);
}
