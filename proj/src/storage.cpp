#include "storage.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgsim {

void BatteryConfig::validate() const {
    if (capacity_kwh <= 0.0) throw std::invalid_argument("battery capacity must be > 0");
    if (!(0.0 <= soc_min && soc_min < soc_max && soc_max <= 1.0))
        throw std::invalid_argument("battery SoC limits must satisfy 0 <= soc_min < soc_max <= 1");
    if (p_charge_max_kw <= 0.0 || p_discharge_max_kw <= 0.0)
        throw std::invalid_argument("battery power limits must be > 0");
    if (!(eta_charge > 0.0 && eta_charge <= 1.0 && eta_discharge > 0.0 && eta_discharge <= 1.0))
        throw std::invalid_argument("battery efficiencies must be in (0, 1]");
}

BatteryStepResult step_battery(BatteryState state, const BatteryConfig& config,
                               double p_command_kw, double dt_hours) {
    if (dt_hours <= 0.0) throw std::invalid_argument("dt_hours must be > 0");

    double achieved = 0.0;
    if (p_command_kw > 0.0) {
        // discharge, limited by rating and by the energy above soc_min
        double to_floor_kw =
            (state.soc - config.soc_min) * config.capacity_kwh * config.eta_discharge / dt_hours;
        achieved = std::min({p_command_kw, config.p_discharge_max_kw, std::max(to_floor_kw, 0.0)});
        state.soc -= achieved * dt_hours / (config.eta_discharge * config.capacity_kwh);
    } else if (p_command_kw < 0.0) {
        // charge, limited by rating and by the headroom below soc_max
        double to_ceiling_kw =
            (config.soc_max - state.soc) * config.capacity_kwh / (config.eta_charge * dt_hours);
        double mag = std::min({-p_command_kw, config.p_charge_max_kw, std::max(to_ceiling_kw, 0.0)});
        state.soc += mag * config.eta_charge * dt_hours / config.capacity_kwh;
        achieved = -mag;
    }
    // guard against rounding drifting past the limits
    state.soc = std::clamp(state.soc, config.soc_min, config.soc_max);
    return {state, achieved};
}

double charge_headroom_energy(BatteryState state, const BatteryConfig& config) {
    return (config.soc_max - state.soc) * config.capacity_kwh / config.eta_charge;
}

EvStepResult step_ev(EvState state, double dt_hours) {
    if (dt_hours <= 0.0) throw std::invalid_argument("dt_hours must be > 0");

    if (!state.connected || state.soc >= state.soc_max || state.p_charge_kw <= 0.0) {
        return {state, 0.0};
    }
    double to_ceiling_kw = (state.soc_max - state.soc) * state.capacity_kwh / dt_hours;
    double p = std::min(state.p_charge_kw, to_ceiling_kw);
    state.soc = std::min(state.soc + p * dt_hours / state.capacity_kwh, state.soc_max);
    return {state, p};
}

} // namespace mgsim
