#include "ems.hpp"

#include <algorithm>
#include <stdexcept>

namespace mgsim {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::M1: return "M1";
        case Mode::M2: return "M2";
        case Mode::M3: return "M3";
        case Mode::M4: return "M4";
        case Mode::M5: return "M5";
        case Mode::M6: return "M6";
    }
    return "?";
}

double total_load_power(double p_load_kw, bool ev_connected, double ev_soc,
                        double ev_soc_max, double p_ev_request_kw) {
    if (ev_connected && ev_soc < ev_soc_max) return p_load_kw + p_ev_request_kw;
    return p_load_kw;
}

double remaining_power(double p_pv_kw, double p_l_total_kw) {
    if (p_pv_kw <= p_l_total_kw) {
        throw std::invalid_argument("remaining_power requires p_pv > p_l_total");
    }
    return p_pv_kw - p_l_total_kw;
}

double demanding_power(double p_l_total_kw, double p_pv_kw) {
    if (p_pv_kw > p_l_total_kw) {
        throw std::invalid_argument("demanding_power requires p_pv <= p_l_total");
    }
    return p_l_total_kw - p_pv_kw;
}

int classify_case(double p_pv_kw, double p_l_total_kw, bool tariff_is_lowest,
                  double pv_zero_epsilon_kw) {
    if (p_pv_kw <= pv_zero_epsilon_kw) return tariff_is_lowest ? 4 : 3;
    return p_pv_kw > p_l_total_kw ? 1 : 2;
}

Decision decide_mode(const DecisionInputs& in, double battery_soc_min,
                     double battery_soc_max, double pv_zero_epsilon_kw) {
    Decision d;
    d.p_l_total_kw = total_load_power(in.p_load_kw, in.ev_connected, in.ev_soc,
                                      in.ev_soc_max, in.p_ev_request_kw);
    d.case_id = classify_case(in.p_pv_kw, d.p_l_total_kw, in.tariff_is_lowest,
                              pv_zero_epsilon_kw);

    const bool can_charge = in.battery_soc < battery_soc_max;
    const bool can_discharge = in.battery_soc > battery_soc_min;
    const bool cheap = in.tariff < in.fit;

    switch (d.case_id) {
        case 1:
            d.p_r_kw = remaining_power(in.p_pv_kw, d.p_l_total_kw);
            d.mode = (can_charge && cheap) ? Mode::M2 : Mode::M1;
            break;
        case 2:
            d.p_d_kw = demanding_power(d.p_l_total_kw, in.p_pv_kw);
            if (cheap) {
                d.mode = Mode::M3;
            } else if (can_discharge) {
                d.mode = Mode::M4;
            } else {
                d.mode = Mode::M3;  // depleted battery: the grid still serves the load
            }
            break;
        case 3:
            d.mode = (cheap && can_charge) ? Mode::M6 : Mode::M5;
            break;
        case 4:
            if (in.forecast_ok) {
                d.mode = Mode::M5;  // tomorrow's PV will charge the battery
            } else {
                d.mode = can_charge ? Mode::M6 : Mode::M5;
            }
            break;
    }
    return d;
}

bool forecast_sufficient(const TimeSeriesProfile& forecast_pv,
                         const TimeSeriesProfile& forecast_load,
                         double battery_headroom_kwh) {
    if (forecast_pv.size() != forecast_load.size()) {
        throw std::invalid_argument("forecast profiles differ in length (" +
                                    std::to_string(forecast_pv.size()) + " vs " +
                                    std::to_string(forecast_load.size()) + ")");
    }
    double surplus_kwh = 0.0;
    double dt = forecast_pv.step_hours();
    for (std::size_t t = 0; t < forecast_pv.size(); ++t) {
        surplus_kwh += std::max(forecast_pv.values[t] - forecast_load.values[t], 0.0) * dt;
    }
    return surplus_kwh >= battery_headroom_kwh;
}

} // namespace mgsim
