#include "dispatch.hpp"

#include "util.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mgsim {

DispatchOutcome dispatch_mode(const Decision& decision, double p_pv_kw,
                              BatteryState battery, const BatteryConfig& config,
                              double dt_hours) {
    DispatchOutcome out;
    PowerFlows& f = out.flows;
    f.p_pv_kw = p_pv_kw;
    f.p_l_total_kw = decision.p_l_total_kw;

    double command = 0.0;
    switch (decision.mode) {
        case Mode::M1:
            // export the whole surplus, battery idle
            break;
        case Mode::M2:
            command = -decision.p_r_kw;
            break;
        case Mode::M3:
            // grid covers the deficit, battery idle
            break;
        case Mode::M4:
            command = decision.p_d_kw;
            break;
        case Mode::M5:
            break;
        case Mode::M6:
            command = -config.p_charge_max_kw;
            break;
    }

    auto step = step_battery(battery, config, command, dt_hours);
    out.p_batt_command_kw = command;
    out.battery_after = step.state;
    f.p_batt_kw = step.p_achieved_kw;

    // The grid closes the balance exactly: import covers what PV and battery
    // do not, export absorbs the rest.
    f.p_grid_kw = f.p_l_total_kw - f.p_pv_kw - f.p_batt_kw;
    return out;
}

namespace {

double step_cash_flow(double p_grid_kw, double tariff, double fit, double dt_hours) {
    return (tariff * std::max(p_grid_kw, 0.0) - fit * std::max(-p_grid_kw, 0.0)) * dt_hours;
}

} // namespace

DispatchTrace simulate(const Scenario& scenario, const MicrogridConfig& config) {
    config.validate();

    DispatchTrace trace;
    trace.step_hours = scenario.step_hours();
    trace.records.reserve(scenario.horizon_steps);

    BatteryState battery{config.battery_soc_init};
    EvState ev;
    ev.soc = config.ev_soc_init;
    ev.soc_max = config.ev_soc_max;
    ev.capacity_kwh = config.ev_capacity_kwh;

    const double dt = trace.step_hours;
    for (std::size_t t = 0; t < scenario.horizon_steps; ++t) {
        // EV first: it is a load, served regardless of the dispatch mode.
        ev.connected = scenario.ev_connected.sample(t) != 0.0;
        ev.p_charge_kw = scenario.ev_power_request.sample(t);
        double ev_soc_before = ev.soc;
        auto ev_step = step_ev(ev, dt);

        DecisionInputs in;
        in.p_pv_kw = scenario.pv.sample(t);
        in.p_load_kw = scenario.load.sample(t);
        in.ev_connected = ev.connected;
        in.ev_soc = ev_soc_before;
        in.ev_soc_max = config.ev_soc_max;
        in.p_ev_request_kw = ev_step.p_ev_kw;  // what the charger actually draws
        in.tariff = scenario.tariff.sample(t);
        in.fit = scenario.fit.sample(t);
        in.battery_soc = battery.soc;
        in.tariff_is_lowest = tariff_is_lowest(scenario.tariff, t, config.tariff_epsilon);
        in.forecast_ok = forecast_sufficient(scenario.forecast_pv_next_day,
                                             scenario.forecast_load_next_day,
                                             charge_headroom_energy(battery, config.battery));

        Decision decision = decide_mode(in, config.battery.soc_min, config.battery.soc_max,
                                        config.pv_zero_epsilon_kw);
        auto outcome = dispatch_mode(decision, in.p_pv_kw, battery, config.battery, dt);
        battery = outcome.battery_after;
        ev = ev_step.state;

        DispatchRecord rec;
        rec.t = t;
        rec.case_id = decision.case_id;
        rec.mode = decision.mode;
        rec.flows = outcome.flows;
        rec.p_ev_kw = ev_step.p_ev_kw;
        rec.battery_soc_after = battery.soc;
        rec.ev_soc_after = ev.soc;
        rec.cash_flow = step_cash_flow(rec.flows.p_grid_kw, in.tariff, in.fit, dt);
        trace.total_bill += rec.cash_flow;
        trace.records.push_back(rec);
    }
    return trace;
}

double energy_bill(const DispatchTrace& trace) {
    double bill = 0.0;
    for (const auto& rec : trace.records) bill += rec.cash_flow;
    return bill;
}

double baseline_bill(const Scenario& scenario, const MicrogridConfig& config) {
    config.validate();

    EvState ev;
    ev.soc = config.ev_soc_init;
    ev.soc_max = config.ev_soc_max;
    ev.capacity_kwh = config.ev_capacity_kwh;

    const double dt = scenario.step_hours();
    double bill = 0.0;
    for (std::size_t t = 0; t < scenario.horizon_steps; ++t) {
        ev.connected = scenario.ev_connected.sample(t) != 0.0;
        ev.p_charge_kw = scenario.ev_power_request.sample(t);
        auto ev_step = step_ev(ev, dt);
        ev = ev_step.state;

        double p_l_total = scenario.load.sample(t) + ev_step.p_ev_kw;
        double p_grid = p_l_total - scenario.pv.sample(t);
        bill += step_cash_flow(p_grid, scenario.tariff.sample(t), scenario.fit.sample(t), dt);
    }
    return bill;
}

std::string trace_to_csv(const DispatchTrace& trace) {
    std::string out = "t,case,mode,p_pv_kw,p_grid_kw,p_batt_kw,p_ev_kw,p_l_total_kw,soc,ev_soc,cash_flow\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.t);
        out += ',';
        out += std::to_string(r.case_id);
        out += ',';
        out += mode_name(r.mode);
        out += ',';
        out += format_double(r.flows.p_pv_kw);
        out += ',';
        out += format_double(r.flows.p_grid_kw);
        out += ',';
        out += format_double(r.flows.p_batt_kw);
        out += ',';
        out += format_double(r.p_ev_kw);
        out += ',';
        out += format_double(r.flows.p_l_total_kw);
        out += ',';
        out += format_double(r.battery_soc_after);
        out += ',';
        out += format_double(r.ev_soc_after);
        out += ',';
        out += format_double(r.cash_flow);
        out += '\n';
    }
    return out;
}

std::string summary_text(const DispatchTrace& trace, const Scenario& scenario,
                         const MicrogridConfig& config) {
    std::array<std::size_t, 7> mode_counts{};  // index 1..6
    double import_kwh = 0.0, export_kwh = 0.0;
    for (const auto& r : trace.records) {
        mode_counts[static_cast<std::size_t>(r.mode)]++;
        import_kwh += std::max(r.flows.p_grid_kw, 0.0) * trace.step_hours;
        export_kwh += std::max(-r.flows.p_grid_kw, 0.0) * trace.step_hours;
    }

    std::string out;
    out += "steps=" + std::to_string(trace.records.size()) + '\n';
    out += "step_hours=" + format_double(trace.step_hours) + '\n';
    out += "total_bill=" + format_double(trace.total_bill) + '\n';
    out += "baseline_bill=" + format_double(baseline_bill(scenario, config)) + '\n';
    for (int m = 1; m <= 6; ++m) {
        out += "mode_count_M" + std::to_string(m) + '=' +
               std::to_string(mode_counts[static_cast<std::size_t>(m)]) + '\n';
    }
    out += "import_kwh=" + format_double(import_kwh) + '\n';
    out += "export_kwh=" + format_double(export_kwh) + '\n';
    return out;
}

} // namespace mgsim
