#include <doctest.h>

#include "dispatch.hpp"

#include <cmath>
#include <random>

using namespace mgsim;

namespace {

std::string fixture_path(const char* name) {
    return std::string(MGSIM_FIXTURE_DIR) + "/" + name;
}

Scenario random_scenario(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> horizon(24, 72);
    std::uniform_real_distribution<double> pv_power(0.0, 12.0);
    std::uniform_real_distribution<double> load_power(0.3, 8.0);
    std::uniform_real_distribution<double> ev_power(0.0, 5.0);
    std::uniform_real_distribution<double> price(0.01, 0.3);
    std::bernoulli_distribution flag(0.5);
    std::bernoulli_distribution night(0.35);

    Scenario s;
    s.horizon_steps = horizon(rng);
    for (std::size_t t = 0; t < s.horizon_steps; ++t) {
        bool connected = flag(rng);
        s.pv.values.push_back(night(rng) ? 0.0 : pv_power(rng));
        s.load.values.push_back(load_power(rng));
        s.ev_connected.values.push_back(connected ? 1.0 : 0.0);
        s.ev_power_request.values.push_back(connected ? ev_power(rng) : 0.0);
        s.tariff.values.push_back(price(rng));
        s.fit.values.push_back(price(rng));
        s.forecast_pv_next_day.values.push_back(pv_power(rng));
        s.forecast_load_next_day.values.push_back(load_power(rng));
    }
    return s;
}

Decision make_decision(int case_id, Mode mode, double p_l_total, double p_r, double p_d) {
    Decision d;
    d.case_id = case_id;
    d.mode = mode;
    d.p_l_total_kw = p_l_total;
    d.p_r_kw = p_r;
    d.p_d_kw = p_d;
    return d;
}

double balance_error(const PowerFlows& f) {
    return std::abs(f.p_pv_kw + f.p_grid_kw + f.p_batt_kw - f.p_l_total_kw);
}

} // namespace

TEST_CASE("dispatch_mode M2 charges the whole surplus when the battery can absorb it") {
    BatteryConfig cfg;
    auto out = dispatch_mode(make_decision(1, Mode::M2, 4.0, 3.0, 0.0), 7.0,
                             BatteryState{0.5}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == doctest::Approx(-3.0));
    CHECK(out.flows.p_grid_kw == doctest::Approx(0.0));
    CHECK(balance_error(out.flows) < 1e-12);
}

TEST_CASE("dispatch_mode M2 exports the surplus the battery cannot take") {
    BatteryConfig cfg;  // 5 kW charge limit binds, headroom does not
    cfg.capacity_kwh = 100.0;
    auto out = dispatch_mode(make_decision(1, Mode::M2, 2.0, 7.0, 0.0), 9.0,
                             BatteryState{0.5}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == doctest::Approx(-5.0));
    CHECK(out.flows.p_grid_kw == doctest::Approx(-2.0));
    CHECK(balance_error(out.flows) < 1e-12);
}

TEST_CASE("dispatch_mode M4 covers the deficit from the battery with no grid import") {
    BatteryConfig cfg;
    auto out = dispatch_mode(make_decision(2, Mode::M4, 7.0, 0.0, 2.0), 5.0,
                             BatteryState{0.5}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == doctest::Approx(2.0));
    CHECK(out.flows.p_grid_kw == doctest::Approx(0.0));
    CHECK(balance_error(out.flows) < 1e-12);
}

TEST_CASE("dispatch_mode M4 imports the shortfall of a depleted battery") {
    BatteryConfig cfg;
    cfg.capacity_kwh = 10.0;
    cfg.eta_discharge = 1.0;
    // only (0.15 - 0.10) * 10 = 0.5 kWh available
    auto out = dispatch_mode(make_decision(2, Mode::M4, 4.0, 0.0, 4.0), 0.0,
                             BatteryState{0.15}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == doctest::Approx(0.5));
    CHECK(out.flows.p_grid_kw == doctest::Approx(3.5));
    CHECK(balance_error(out.flows) < 1e-12);
}

TEST_CASE("dispatch_mode M6 imports load plus the achieved charge") {
    BatteryConfig cfg;
    cfg.capacity_kwh = 25.0;
    auto out = dispatch_mode(make_decision(4, Mode::M6, 4.0, 0.0, 0.0), 0.0,
                             BatteryState{0.5}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == doctest::Approx(-5.0));
    CHECK(out.flows.p_grid_kw == doctest::Approx(9.0));
    CHECK(balance_error(out.flows) < 1e-12);
}

TEST_CASE("dispatch_mode M1 exports the full surplus with the battery idle") {
    BatteryConfig cfg;
    auto out = dispatch_mode(make_decision(1, Mode::M1, 4.0, 3.0, 0.0), 7.0,
                             BatteryState{0.5}, cfg, 1.0);
    CHECK(out.flows.p_batt_kw == 0.0);
    CHECK(out.flows.p_grid_kw == doctest::Approx(-3.0));
}

TEST_CASE("energy_bill prices imports at tariff and exports at FiT") {
    DispatchTrace trace;
    trace.step_hours = 1.0;

    DispatchRecord imp;
    imp.flows.p_grid_kw = 5.0;
    imp.cash_flow = 0.10 * 5.0;  // as simulate computes it
    trace.records.push_back(imp);
    CHECK(energy_bill(trace) == doctest::Approx(0.50));

    trace.records.clear();
    DispatchRecord exp;
    exp.flows.p_grid_kw = -3.0;
    exp.cash_flow = -0.08 * 3.0;
    trace.records.push_back(exp);
    CHECK(energy_bill(trace) == doctest::Approx(-0.24));

    trace.records.clear();
    DispatchRecord idle;
    trace.records.push_back(idle);
    CHECK(energy_bill(trace) == 0.0);
}

TEST_CASE("baseline_bill with zero PV is the tariff-priced load") {
    Scenario s;
    s.horizon_steps = 3;
    s.pv.values = {0.0, 0.0, 0.0};
    s.load.values = {4.0, 5.0, 6.0};
    s.ev_connected.values = {0, 0, 0};
    s.ev_power_request.values = {0, 0, 0};
    s.tariff.values = {0.1, 0.2, 0.1};
    s.fit.values = {0.1, 0.1, 0.1};
    s.forecast_pv_next_day.values = {0, 0, 0};
    s.forecast_load_next_day.values = {0, 0, 0};

    MicrogridConfig cfg;
    CHECK(baseline_bill(s, cfg) == doctest::Approx(0.1 * 4 + 0.2 * 5 + 0.1 * 6));
}

TEST_CASE("baseline_bill with permanent surplus is pure FiT revenue") {
    Scenario s;
    s.horizon_steps = 2;
    s.pv.values = {10.0, 12.0};
    s.load.values = {4.0, 5.0};
    s.ev_connected.values = {0, 0};
    s.ev_power_request.values = {0, 0};
    s.tariff.values = {0.2, 0.2};
    s.fit.values = {0.08, 0.08};
    s.forecast_pv_next_day.values = {0, 0};
    s.forecast_load_next_day.values = {0, 0};

    MicrogridConfig cfg;
    CHECK(baseline_bill(s, cfg) == doctest::Approx(-(0.08 * 6 + 0.08 * 7)));
}

TEST_CASE("baseline_bill on a mixed fixture matches an independent summation") {
    Scenario s = load_scenario_file(fixture_path("fig5.csv"));
    MicrogridConfig cfg = load_config_file(fixture_path("fig5.cfg"));

    // independent pass: no battery, EV drawing its request (never clamped here)
    double expected = 0.0;
    for (std::size_t t = 0; t < s.horizon_steps; ++t) {
        double pl = s.load.sample(t) + s.ev_power_request.sample(t) * s.ev_connected.sample(t);
        double grid = pl - s.pv.sample(t);
        expected += grid >= 0 ? s.tariff.sample(t) * grid : s.fit.sample(t) * grid;
    }
    CHECK(baseline_bill(s, cfg) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("simulate holds the power balance, SoC bounds and mode-flow signs everywhere") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> soc0(0.1, 0.9);

    for (int trial = 0; trial < 100; ++trial) {
        Scenario s = random_scenario(rng);
        MicrogridConfig cfg;
        cfg.battery_soc_init = soc0(rng);
        cfg.ev_soc_init = soc0(rng);

        DispatchTrace trace = simulate(s, cfg);
        REQUIRE(trace.records.size() == s.horizon_steps);

        for (const auto& r : trace.records) {
            CHECK(balance_error(r.flows) < 1e-9);
            CHECK(r.battery_soc_after >= cfg.battery.soc_min - 1e-12);
            CHECK(r.battery_soc_after <= cfg.battery.soc_max + 1e-12);
            CHECK(r.flows.p_pv_kw + r.flows.p_pv_curtailed_kw ==
                  doctest::Approx(s.pv.sample(r.t)).epsilon(1e-12));

            switch (r.mode) {
                case Mode::M1:
                case Mode::M3:
                case Mode::M5: CHECK(r.flows.p_batt_kw == 0.0); break;
                case Mode::M2:
                case Mode::M6: CHECK(r.flows.p_batt_kw <= 0.0); break;
                case Mode::M4: CHECK(r.flows.p_batt_kw >= 0.0); break;
            }
            // the battery never discharges into the grid: exports are PV surplus
            if (r.flows.p_grid_kw < -1e-12) {
                CHECK((r.mode == Mode::M1 || r.mode == Mode::M2));
            }
        }
        CHECK(energy_bill(trace) == doctest::Approx(trace.total_bill).epsilon(1e-12));
    }
}

TEST_CASE("simulate is deterministic") {
    std::mt19937_64 rng(77);
    Scenario s = random_scenario(rng);
    MicrogridConfig cfg;

    DispatchTrace a = simulate(s, cfg);
    DispatchTrace b = simulate(s, cfg);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.total_bill == b.total_bill);
    for (std::size_t t = 0; t < a.records.size(); ++t) {
        CHECK(a.records[t].mode == b.records[t].mode);
        CHECK(a.records[t].flows.p_grid_kw == b.records[t].flows.p_grid_kw);
        CHECK(a.records[t].battery_soc_after == b.records[t].battery_soc_after);
    }
    CHECK(trace_to_csv(a) == trace_to_csv(b));
}

TEST_CASE("trace CSV carries the exact header and one row per step") {
    Scenario s = load_scenario_file(fixture_path("fig4.csv"));
    MicrogridConfig cfg = load_config_file(fixture_path("fig4.cfg"));
    DispatchTrace trace = simulate(s, cfg);

    std::string csv = trace_to_csv(trace);
    CHECK(csv.rfind("t,case,mode,p_pv_kw,p_grid_kw,p_batt_kw,p_ev_kw,p_l_total_kw,soc,ev_soc,cash_flow\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 25);  // header + 24 steps
}

TEST_CASE("summary reports bills, mode counts and grid energy") {
    Scenario s = load_scenario_file(fixture_path("fig4.csv"));
    MicrogridConfig cfg = load_config_file(fixture_path("fig4.cfg"));
    DispatchTrace trace = simulate(s, cfg);

    std::string summary = summary_text(trace, s, cfg);
    CHECK(summary.find("steps=24") != std::string::npos);
    CHECK(summary.find("total_bill=") != std::string::npos);
    CHECK(summary.find("baseline_bill=") != std::string::npos);
    CHECK(summary.find("mode_count_M6=3") != std::string::npos);
    CHECK(summary.find("import_kwh=") != std::string::npos);
}
