#include "profiles.hpp"

#include "util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgsim {

double TimeSeriesProfile::sample(std::size_t t) const {
    if (t >= values.size()) {
        throw std::out_of_range("profile sample index " + std::to_string(t) +
                                " out of range [0, " + std::to_string(values.size()) + ")");
    }
    return values[t];
}

std::size_t TimeSeriesProfile::steps_per_day() const {
    if (step_seconds <= 0.0) throw std::invalid_argument("step_seconds must be > 0");
    double per_day = 86400.0 / step_seconds;
    auto n = static_cast<std::size_t>(std::llround(per_day));
    return std::max<std::size_t>(n, 1);
}

bool tariff_is_lowest(const TimeSeriesProfile& tariff, std::size_t t, double epsilon) {
    double v = tariff.sample(t);
    std::size_t per_day = tariff.steps_per_day();
    std::size_t day_start = (t / per_day) * per_day;
    std::size_t day_end = std::min(day_start + per_day, tariff.values.size());
    double day_min = tariff.values[day_start];
    for (std::size_t i = day_start + 1; i < day_end; ++i)
        day_min = std::min(day_min, tariff.values[i]);
    return v <= day_min + epsilon;
}

namespace {

constexpr const char* kColumns[] = {
    "hour",        "pv_kw", "load_kw", "ev_connected", "ev_power_kw",
    "tariff",      "fit",   "forecast_pv_kw", "forecast_load_kw",
};
constexpr std::size_t kNumColumns = sizeof(kColumns) / sizeof(kColumns[0]);

std::string at(std::size_t line, const char* column, const std::string& what) {
    return "line " + std::to_string(line) + ", column " + column + ": " + what;
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    std::vector<std::string> issues;

    // Split into lines, dropping a trailing empty line.
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.empty()) throw ParseError("line 1: empty scenario file");

    auto header = split_csv(lines[0]);
    if (header.size() != kNumColumns) {
        throw ParseError("line 1: expected " + std::to_string(kNumColumns) +
                         " columns in header, found " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < kNumColumns; ++c) {
        if (trim(header[c]) != kColumns[c]) {
            issues.push_back("line 1: header column " + std::to_string(c + 1) + " must be '" +
                             kColumns[c] + "', found '" + std::string(trim(header[c])) + "'");
        }
    }
    if (!issues.empty()) throw ParseError(std::move(issues));

    Scenario s;
    std::size_t row = 0;
    for (std::size_t li = 1; li < lines.size(); ++li, ++row) {
        std::size_t line_no = li + 1;
        if (trim(lines[li]).empty()) {
            issues.push_back("line " + std::to_string(line_no) + ": empty row");
            continue;
        }
        auto fields = split_csv(lines[li]);
        if (fields.size() != kNumColumns) {
            issues.push_back("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(kNumColumns) + " fields, found " +
                             std::to_string(fields.size()));
            continue;
        }

        double v[kNumColumns];
        bool row_ok = true;
        for (std::size_t c = 0; c < kNumColumns; ++c) {
            if (!parse_double(fields[c], v[c])) {
                issues.push_back(at(line_no, kColumns[c],
                                    "not a number: '" + std::string(trim(fields[c])) + "'"));
                row_ok = false;
            }
        }
        if (!row_ok) continue;

        if (v[0] != static_cast<double>(row)) {
            issues.push_back(at(line_no, "hour",
                                "horizon mismatch: expected hour " + std::to_string(row) +
                                    ", found " + format_double(v[0])));
        }
        for (std::size_t c : {std::size_t{1}, std::size_t{2}, std::size_t{4},
                              std::size_t{7}, std::size_t{8}}) {
            if (v[c] < 0.0)
                issues.push_back(at(line_no, kColumns[c], "negative power (" + format_double(v[c]) + ")"));
        }
        for (std::size_t c : {std::size_t{5}, std::size_t{6}}) {
            if (v[c] < 0.0)
                issues.push_back(at(line_no, kColumns[c], "negative price (" + format_double(v[c]) + ")"));
        }
        if (v[3] != 0.0 && v[3] != 1.0) {
            issues.push_back(at(line_no, "ev_connected", "must be 0 or 1, found " + format_double(v[3])));
        } else if (v[3] == 0.0 && v[4] > 0.0) {
            issues.push_back(at(line_no, "ev_power_kw",
                                "EV request while disconnected (" + format_double(v[4]) + " kW)"));
        }

        s.pv.values.push_back(v[1]);
        s.load.values.push_back(v[2]);
        s.ev_connected.values.push_back(v[3]);
        s.ev_power_request.values.push_back(v[4]);
        s.tariff.values.push_back(v[5]);
        s.fit.values.push_back(v[6]);
        s.forecast_pv_next_day.values.push_back(v[7]);
        s.forecast_load_next_day.values.push_back(v[8]);
    }

    if (row == 0) issues.push_back("line 2: scenario has no data rows");
    if (!issues.empty()) throw ParseError(std::move(issues));

    s.horizon_steps = row;
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (scenario)");
    }
    return parse_scenario(text);
}

std::string scenario_to_csv(const Scenario& s) {
    std::string out;
    for (std::size_t c = 0; c < kNumColumns; ++c) {
        if (c) out += ',';
        out += kColumns[c];
    }
    out += '\n';
    for (std::size_t t = 0; t < s.horizon_steps; ++t) {
        out += std::to_string(t);
        out += ',';
        out += format_double(s.pv.values[t]);
        out += ',';
        out += format_double(s.load.values[t]);
        out += ',';
        out += format_double(s.ev_connected.values[t]);
        out += ',';
        out += format_double(s.ev_power_request.values[t]);
        out += ',';
        out += format_double(s.tariff.values[t]);
        out += ',';
        out += format_double(s.fit.values[t]);
        out += ',';
        out += format_double(s.forecast_pv_next_day.values[t]);
        out += ',';
        out += format_double(s.forecast_load_next_day.values[t]);
        out += '\n';
    }
    return out;
}

} // namespace mgsim
