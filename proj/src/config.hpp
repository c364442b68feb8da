#pragma once

#include <string>
#include <string_view>

#include "storage.hpp"

namespace mgsim {

// Plant parameters and simulation tolerances. Defaults follow the reference
// system: 10-90% battery SoC window behind a 5 kW inverter, hourly steps.
struct MicrogridConfig {
    BatteryConfig battery;
    double battery_soc_init = 0.5;

    double ev_capacity_kwh = 30.0;
    double ev_soc_init = 0.5;
    double ev_soc_max = 0.9;

    double pv_zero_epsilon_kw = 1e-6;  // below this, PV counts as "no generation"
    double tariff_epsilon = 1e-9;      // tolerance for the daily-lowest-tariff test

    void validate() const;  // throws std::invalid_argument

    // Sets one field by key name (see apply_overrides for the key list).
    void set(const std::string& key, const std::string& value);

    // Applies flat key=value override lines ('#' starts a comment). Keys:
    //   battery_capacity_kwh battery_soc_min battery_soc_max
    //   battery_p_charge_max_kw battery_p_discharge_max_kw
    //   battery_eta_charge battery_eta_discharge battery_soc_init
    //   ev_capacity_kwh ev_soc_init ev_soc_max
    //   pv_zero_epsilon_kw tariff_epsilon
    void apply_overrides(std::string_view text);  // throws ParseError
};

// Defaults plus the overrides in the given file. Throws IoError/ParseError.
MicrogridConfig load_config_file(const std::string& path);

} // namespace mgsim
