#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "config.hpp"
#include "ems.hpp"
#include "profiles.hpp"
#include "storage.hpp"

namespace mgsim {

// Sign conventions: grid import positive / export negative; battery discharge
// positive / charge negative.
struct PowerFlows {
    double p_pv_kw = 0.0;            // PV power actually used
    double p_pv_curtailed_kw = 0.0;  // unused PV (always 0 while export is uncapped)
    double p_grid_kw = 0.0;
    double p_batt_kw = 0.0;
    double p_l_total_kw = 0.0;
    // invariant: p_pv + p_grid + p_batt == p_l_total
};

struct DispatchRecord {
    std::size_t t = 0;
    int case_id = 0;
    Mode mode = Mode::M5;
    PowerFlows flows;
    double p_ev_kw = 0.0;
    double battery_soc_after = 0.0;
    double ev_soc_after = 0.0;
    double cash_flow = 0.0;  // positive = cost, per step
};

struct DispatchTrace {
    std::vector<DispatchRecord> records;
    double total_bill = 0.0;
    double step_hours = 1.0;
};

struct DispatchOutcome {
    PowerFlows flows;
    double p_batt_command_kw = 0.0;
    BatteryState battery_after;
};

// Translates a decision into concrete power flows and advances the battery.
// Storage clamping absorbs any infeasibility: shortfall in M4 is imported,
// surplus the battery cannot take in M2 is exported. The power balance holds
// in every branch.
DispatchOutcome dispatch_mode(const Decision& decision, double p_pv_kw,
                              BatteryState battery, const BatteryConfig& config,
                              double dt_hours);

// Runs the full horizon: per step, EV draw -> decision -> power flows ->
// storage update -> cash flow. Deterministic in (scenario, config).
DispatchTrace simulate(const Scenario& scenario, const MicrogridConfig& config);

// Sum of per-step cash flows (tariff on imports minus FiT credit on exports).
double energy_bill(const DispatchTrace& trace);

// Bill of the no-EMS policy: grid serves any deficit, PV surplus is exported
// at FiT, the battery is never used. The EV draws exactly as under the EMS.
double baseline_bill(const Scenario& scenario, const MicrogridConfig& config);

// CSV export, one row per step:
// t,case,mode,p_pv_kw,p_grid_kw,p_batt_kw,p_ev_kw,p_l_total_kw,soc,ev_soc,cash_flow
std::string trace_to_csv(const DispatchTrace& trace);

// key=value summary: bills, per-mode step counts, import/export energy.
std::string summary_text(const DispatchTrace& trace, const Scenario& scenario,
                         const MicrogridConfig& config);

} // namespace mgsim
