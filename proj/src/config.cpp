#include "config.hpp"

#include "errors.hpp"
#include "util.hpp"

#include <stdexcept>
#include <vector>

namespace mgsim {

void MicrogridConfig::validate() const {
    battery.validate();
    if (!(battery.soc_min <= battery_soc_init && battery_soc_init <= battery.soc_max))
        throw std::invalid_argument("battery_soc_init must lie in [soc_min, soc_max]");
    if (ev_capacity_kwh <= 0.0) throw std::invalid_argument("ev_capacity_kwh must be > 0");
    if (!(0.0 <= ev_soc_init && ev_soc_init <= 1.0))
        throw std::invalid_argument("ev_soc_init must lie in [0, 1]");
    if (!(0.0 < ev_soc_max && ev_soc_max <= 1.0))
        throw std::invalid_argument("ev_soc_max must lie in (0, 1]");
    if (pv_zero_epsilon_kw < 0.0) throw std::invalid_argument("pv_zero_epsilon_kw must be >= 0");
    if (tariff_epsilon < 0.0) throw std::invalid_argument("tariff_epsilon must be >= 0");
}

void MicrogridConfig::set(const std::string& key, const std::string& value) {
    double v;
    if (!parse_double(value, v)) {
        throw std::invalid_argument("value for '" + key + "' is not a number: '" + value + "'");
    }
    if (key == "battery_capacity_kwh") battery.capacity_kwh = v;
    else if (key == "battery_soc_min") battery.soc_min = v;
    else if (key == "battery_soc_max") battery.soc_max = v;
    else if (key == "battery_p_charge_max_kw") battery.p_charge_max_kw = v;
    else if (key == "battery_p_discharge_max_kw") battery.p_discharge_max_kw = v;
    else if (key == "battery_eta_charge") battery.eta_charge = v;
    else if (key == "battery_eta_discharge") battery.eta_discharge = v;
    else if (key == "battery_soc_init") battery_soc_init = v;
    else if (key == "ev_capacity_kwh") ev_capacity_kwh = v;
    else if (key == "ev_soc_init") ev_soc_init = v;
    else if (key == "ev_soc_max") ev_soc_max = v;
    else if (key == "pv_zero_epsilon_kw") pv_zero_epsilon_kw = v;
    else if (key == "tariff_epsilon") tariff_epsilon = v;
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void MicrogridConfig::apply_overrides(std::string_view text) {
    std::vector<std::string> issues;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text.size()) {
        ++line_no;
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back("line " + std::to_string(line_no) + ": expected key=value");
            continue;
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        try {
            set(key, value);
        } catch (const std::invalid_argument& e) {
            issues.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!issues.empty()) throw ParseError(std::move(issues));

    try {
        validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

MicrogridConfig load_config_file(const std::string& path) {
    MicrogridConfig cfg;
    cfg.apply_overrides(read_text_file(path));
    return cfg;
}

} // namespace mgsim
