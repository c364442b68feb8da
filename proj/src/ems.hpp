#pragma once

#include "profiles.hpp"

namespace mgsim {

// Operating modes of the energy management algorithm.
//   M1: PV surplus exported, battery idle
//   M2: PV surplus charges the battery
//   M3: grid covers the PV deficit
//   M4: battery covers the PV deficit
//   M5: no PV, battery idle, grid serves the load
//   M6: no PV, battery charges from the grid
enum class Mode { M1 = 1, M2 = 2, M3 = 3, M4 = 4, M5 = 5, M6 = 6 };

const char* mode_name(Mode m);

struct DecisionInputs {
    double p_pv_kw = 0.0;
    double p_load_kw = 0.0;
    bool ev_connected = false;
    double ev_soc = 0.0;
    double ev_soc_max = 0.9;
    double p_ev_request_kw = 0.0;
    double tariff = 0.0;
    double fit = 0.0;
    double battery_soc = 0.0;
    bool tariff_is_lowest = false;
    bool forecast_ok = false;
};

struct Decision {
    int case_id = 0;  // 1: PV surplus, 2: PV deficit, 3: no PV, 4: no PV at lowest tariff
    Mode mode = Mode::M5;
    double p_l_total_kw = 0.0;
    double p_r_kw = 0.0;  // remaining (surplus) power, nonzero only in case 1
    double p_d_kw = 0.0;  // demanding (deficit) power, nonzero only in case 2
};

// Total load power: household load plus the EV draw while the EV is connected
// and below its SoC ceiling, otherwise the household load alone.
double total_load_power(double p_load_kw, bool ev_connected, double ev_soc,
                        double ev_soc_max, double p_ev_request_kw);

// PV surplus above the total load. Requires p_pv > p_l_total; the result is
// available for battery charging or export.
double remaining_power(double p_pv_kw, double p_l_total_kw);

// Load deficit beyond PV. Requires p_pv <= p_l_total; covered by battery or grid.
double demanding_power(double p_l_total_kw, double p_pv_kw);

// Case selection: PV at or below pv_zero_epsilon counts as "no generation"
// (cases 3/4, split on whether the tariff is at its daily low); otherwise
// surplus selects case 1 and deficit (or exact balance) case 2.
int classify_case(double p_pv_kw, double p_l_total_kw, bool tariff_is_lowest,
                  double pv_zero_epsilon_kw);

// Full decision step: classify the case and pick the operating mode.
//   case 1: M2 when the battery can take charge and tariff < FiT, else M1
//   case 2: M3 when tariff < FiT; else M4 when the battery has energy; else
//           M3 (the deficit must be served either way)
//   case 3: M6 when tariff < FiT and the battery can take charge, else M5
//   case 4: M5 when tomorrow's PV surplus covers the charge headroom, else M6
//           when the battery can take charge, else M5
Decision decide_mode(const DecisionInputs& in, double battery_soc_min,
                     double battery_soc_max, double pv_zero_epsilon_kw);

// Next-day sufficiency: true iff the forecast PV surplus energy over forecast
// load, summed hour-wise, covers battery_headroom_kwh. Only hours with PV
// above load can charge the battery, so the surplus is what counts.
bool forecast_sufficient(const TimeSeriesProfile& forecast_pv,
                         const TimeSeriesProfile& forecast_load,
                         double battery_headroom_kwh);

} // namespace mgsim
