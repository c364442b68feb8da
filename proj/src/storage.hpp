#pragma once

namespace mgsim {

struct BatteryConfig {
    double capacity_kwh = 10.0;
    double soc_min = 0.10;
    double soc_max = 0.90;
    double p_charge_max_kw = 5.0;     // inverter rating
    double p_discharge_max_kw = 5.0;  // inverter rating
    double eta_charge = 0.95;
    double eta_discharge = 0.95;

    void validate() const;  // throws std::invalid_argument
};

struct BatteryState {
    double soc = 0.5;
};

struct BatteryStepResult {
    BatteryState state;
    double p_achieved_kw;  // signed, same convention as the command
};

// Advances the battery by one step. Command sign: positive discharges,
// negative charges. The command is clamped to the power ratings and to
// whatever keeps SoC inside [soc_min, soc_max]; the achieved power is
// reported back, never a fault.
//   charging:    soc' = soc + |p|*eta_charge*dt/capacity
//   discharging: soc' = soc - p*dt/(eta_discharge*capacity)
BatteryStepResult step_battery(BatteryState state, const BatteryConfig& config,
                               double p_command_kw, double dt_hours);

// Grid/PV-side energy needed to fill the battery to soc_max (accounts for
// charge efficiency).
double charge_headroom_energy(BatteryState state, const BatteryConfig& config);

struct EvState {
    bool connected = false;
    double soc = 0.5;
    double soc_max = 0.9;
    double capacity_kwh = 30.0;
    double p_charge_kw = 0.0;  // requested charger power this step
};

struct EvStepResult {
    EvState state;
    double p_ev_kw;  // power actually drawn (load on the microgrid)
};

// Constant-power EV charger with SoC cutoff: draws the requested power while
// connected and below soc_max, tapering in the step that reaches the ceiling.
EvStepResult step_ev(EvState state, double dt_hours);

} // namespace mgsim
