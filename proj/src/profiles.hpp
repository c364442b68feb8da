#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace mgsim {

// Piecewise-constant time series: values[i] holds over [i*step, (i+1)*step).
struct TimeSeriesProfile {
    double step_seconds = 3600.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double step_hours() const { return step_seconds / 3600.0; }

    // Step-hold sample at step index t. Throws std::out_of_range past the end;
    // the profile never extrapolates.
    double sample(std::size_t t) const;

    // Number of steps in one calendar day at this resolution (>= 1).
    std::size_t steps_per_day() const;
};

// True iff tariff(t) is within epsilon of the minimum over the calendar day
// containing t. Every day has at least one lowest step by construction.
bool tariff_is_lowest(const TimeSeriesProfile& tariff, std::size_t t, double epsilon = 1e-9);

struct Scenario {
    TimeSeriesProfile pv;                      // kW, >= 0
    TimeSeriesProfile load;                    // kW, >= 0
    TimeSeriesProfile ev_connected;            // 0/1 flag
    TimeSeriesProfile ev_power_request;        // kW, >= 0, zero while disconnected
    TimeSeriesProfile tariff;                  // currency/kWh, >= 0
    TimeSeriesProfile fit;                     // currency/kWh, >= 0
    TimeSeriesProfile forecast_pv_next_day;    // kW, row t = hour t of the next day
    TimeSeriesProfile forecast_load_next_day;  // kW
    std::size_t horizon_steps = 0;

    double step_hours() const { return pv.step_hours(); }
};

// Parses scenario CSV text (header row mandatory, columns:
// hour,pv_kw,load_kw,ev_connected,ev_power_kw,tariff,fit,forecast_pv_kw,forecast_load_kw).
// Collects every violation and throws ParseError listing all of them.
Scenario parse_scenario(std::string_view text);

// Reads and parses a scenario file. Throws IoError or ParseError.
Scenario load_scenario_file(const std::string& path);

// Serializes back to the scenario CSV format; parse_scenario(scenario_to_csv(s))
// is sample-identical to s.
std::string scenario_to_csv(const Scenario& s);

} // namespace mgsim
