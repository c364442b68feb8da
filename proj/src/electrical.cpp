#include "electrical.hpp"

#include "util.hpp"

#include <cmath>
#include <stdexcept>

namespace mgsim {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;
constexpr double kTwoPiOverThree = 2.0 * kPi / 3.0;

double wrap_angle(double theta) {
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    return theta;
}

void check_dt(double dt_s) {
    if (!(dt_s > 0.0) || dt_s > 1e-4) {
        throw std::invalid_argument("dt must be in (0, 1e-4] s, got " + format_double(dt_s));
    }
}

} // namespace

double GridParams::v_d_nominal() const {
    return v_ll_rms * std::sqrt(2.0) / std::sqrt(3.0);
}

PiGains tune_pi(const FilterParams& filter, double xi, double omega_n) {
    if (filter.l_f <= 0.0 || xi <= 0.0 || omega_n <= 0.0) {
        throw std::invalid_argument("tune_pi requires positive L, xi and omega_n");
    }
    return {2.0 * xi * omega_n * filter.l_f, omega_n * omega_n * filter.l_f};
}

Dq park_transform(const Abc& abc, double theta) {
    double ca = std::cos(theta), cb = std::cos(theta - kTwoPiOverThree),
           cc = std::cos(theta + kTwoPiOverThree);
    double sa = std::sin(theta), sb = std::sin(theta - kTwoPiOverThree),
           sc = std::sin(theta + kTwoPiOverThree);
    return {kTwoThirds * (abc[0] * ca + abc[1] * cb + abc[2] * cc),
            -kTwoThirds * (abc[0] * sa + abc[1] * sb + abc[2] * sc)};
}

Abc inverse_park(const Dq& dq, double theta) {
    double ca = std::cos(theta), cb = std::cos(theta - kTwoPiOverThree),
           cc = std::cos(theta + kTwoPiOverThree);
    double sa = std::sin(theta), sb = std::sin(theta - kTwoPiOverThree),
           sc = std::sin(theta + kTwoPiOverThree);
    return {dq.d * ca - dq.q * sa, dq.d * cb - dq.q * sb, dq.d * cc - dq.q * sc};
}

Dq current_refs(double p_ref_w, double q_ref_var, double v_d) {
    if (!(v_d > 0.0)) {
        throw std::invalid_argument("current_refs requires v_d > 0, got " + format_double(v_d));
    }
    return {2.0 * p_ref_w / (3.0 * v_d), -2.0 * q_ref_var / (3.0 * v_d)};
}

double active_power(double v_d, double i_d) { return 1.5 * v_d * i_d; }
double reactive_power(double v_d, double i_q) { return -1.5 * v_d * i_q; }

PllParams PllParams::for_grid(const GridParams& grid) {
    double bandwidth = 2.0 * kPi * 50.0;
    PllParams p;
    p.kp = 2.0 * 0.707 * bandwidth;
    p.ki = bandwidth * bandwidth;
    p.v_norm = grid.v_d_nominal();
    p.omega_center = grid.omega();
    return p;
}

void pll_step(PllState& state, const PllParams& params, const Abc& v_abc, double dt_s) {
    check_dt(dt_s);
    double vq = park_transform(v_abc, state.theta).q;
    double err = vq / params.v_norm;  // ~ phase error for small misalignment
    state.integrator += params.ki * err * dt_s;
    state.omega_hat = params.omega_center + params.kp * err + state.integrator;
    state.theta = wrap_angle(state.theta + state.omega_hat * dt_s);
}

Dq controller_step(ControllerState& state, const PiGains& gains, double l_f,
                   const Dq& refs, const Dq& measured, const Dq& v_grid,
                   double omega, double dt_s) {
    check_dt(dt_s);
    double ed = refs.d - measured.d;
    double eq = refs.q - measured.q;
    Dq v_cmd{gains.kp * ed + state.int_d + v_grid.d - omega * l_f * measured.q,
             gains.kp * eq + state.int_q + v_grid.q + omega * l_f * measured.d};
    state.int_d += gains.ki * ed * dt_s;
    state.int_q += gains.ki * eq * dt_s;
    return v_cmd;
}

Dq plant_step(const Dq& currents, const Dq& v_inv, const Dq& v_grid, double omega,
              const FilterParams& filter, double dt_s) {
    check_dt(dt_s);
    const double l = filter.l_f, r = filter.r_f;
    auto deriv = [&](const Dq& i) -> Dq {
        return {(v_inv.d - v_grid.d - r * i.d + omega * l * i.q) / l,
                (v_inv.q - v_grid.q - r * i.q - omega * l * i.d) / l};
    };
    Dq k1 = deriv(currents);
    Dq k2 = deriv({currents.d + 0.5 * dt_s * k1.d, currents.q + 0.5 * dt_s * k1.q});
    Dq k3 = deriv({currents.d + 0.5 * dt_s * k2.d, currents.q + 0.5 * dt_s * k2.q});
    Dq k4 = deriv({currents.d + dt_s * k3.d, currents.q + dt_s * k3.q});
    return {currents.d + dt_s / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d),
            currents.q + dt_s / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q)};
}

TrackingTrace run_tracking_sim(const std::vector<PowerStep>& schedule, double duration_s,
                               const TrackingOptions& options) {
    check_dt(options.dt_s);
    if (duration_s <= 0.0) throw std::invalid_argument("duration must be positive");

    const PiGains gains = tune_pi(options.filter, options.xi, options.omega_n);
    const PllParams pll_params = PllParams::for_grid(options.grid);
    const double v_peak = options.grid.v_d_nominal();
    const double omega_grid = options.grid.omega();
    const double zero_freq = gains.ki / gains.kp;  // controller zero, for shaping
    const double shaping_alpha = 1.0 - std::exp(-zero_freq * options.dt_s);

    DqSimState st;
    st.pll.omega_hat = pll_params.omega_center;  // start at the nominal frequency
    Dq refs_shaped;

    TrackingTrace trace;
    trace.gains = gains;
    trace.dt_s = options.dt_s;
    const auto n_steps = static_cast<std::size_t>(std::ceil(duration_s / options.dt_s));
    trace.t_s.reserve(n_steps);

    std::size_t sched_idx = 0;
    double p_ref = 0.0;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * options.dt_s;
        while (sched_idx < schedule.size() && schedule[sched_idx].time_s <= t) {
            p_ref = schedule[sched_idx].p_ref_w;
            ++sched_idx;
        }

        const double theta_grid = omega_grid * t + options.grid_phase_offset_rad;
        const Abc v_abc = inverse_park({v_peak, 0.0}, theta_grid);
        const Dq v_grid_dq = park_transform(v_abc, st.pll.theta);

        // reference from the measured d-axis voltage; Q is held at zero
        const double v_d_meas = v_grid_dq.d > 1.0 ? v_grid_dq.d : v_peak;
        const Dq refs_raw = current_refs(p_ref, 0.0, v_d_meas);
        if (options.reference_shaping) {
            refs_shaped.d += shaping_alpha * (refs_raw.d - refs_shaped.d);
            refs_shaped.q += shaping_alpha * (refs_raw.q - refs_shaped.q);
        } else {
            refs_shaped = refs_raw;
        }

        const Dq v_inv = controller_step(st.ctrl, gains, options.filter.l_f, refs_shaped,
                                         st.currents, v_grid_dq, st.pll.omega_hat, options.dt_s);
        st.currents = plant_step(st.currents, v_inv, v_grid_dq, st.pll.omega_hat,
                                 options.filter, options.dt_s);
        pll_step(st.pll, pll_params, v_abc, options.dt_s);

        if (!std::isfinite(st.currents.d) || !std::isfinite(st.currents.q) ||
            !std::isfinite(st.pll.omega_hat)) {
            throw NumericError("tracking simulation diverged at step " + std::to_string(k) +
                               " (t = " + format_double(t) + " s)");
        }

        trace.t_s.push_back(t);
        trace.id_ref.push_back(refs_raw.d);
        trace.iq_ref.push_back(refs_raw.q);
        trace.id.push_back(st.currents.d);
        trace.iq.push_back(st.currents.q);
        trace.vd.push_back(v_grid_dq.d);
        trace.vq.push_back(v_grid_dq.q);
        trace.p_w.push_back(active_power(v_grid_dq.d, st.currents.d));
        trace.q_var.push_back(reactive_power(v_grid_dq.d, st.currents.q));
    }
    return trace;
}

StepMetrics step_metrics(const TrackingTrace& trace, double step_time_s, double p_target_w) {
    StepMetrics m;
    if (trace.t_s.empty()) return m;

    std::size_t k0 = 0;
    while (k0 < trace.t_s.size() && trace.t_s[k0] < step_time_s) ++k0;
    if (k0 >= trace.t_s.size()) return m;

    const double p_before = k0 > 0 ? trace.p_w[k0 - 1] : 0.0;
    const double delta = p_target_w - p_before;
    const double magnitude = std::abs(delta) > 1e-12 ? std::abs(delta) : 1.0;

    double peak_dev = 0.0;
    std::size_t last_outside = k0;
    bool outside_seen = false;
    for (std::size_t k = k0; k < trace.t_s.size(); ++k) {
        // overshoot counts excursions past the target in the step direction
        double past = (delta >= 0.0) ? trace.p_w[k] - p_target_w : p_target_w - trace.p_w[k];
        peak_dev = std::max(peak_dev, past);
        if (std::abs(trace.p_w[k] - p_target_w) > 0.02 * magnitude) {
            last_outside = k;
            outside_seen = true;
        }
    }
    m.overshoot_pct = 100.0 * peak_dev / magnitude;
    if (outside_seen && last_outside + 1 < trace.t_s.size()) {
        m.settling_s = trace.t_s[last_outside + 1] - step_time_s;
    } else if (outside_seen) {
        m.settling_s = trace.t_s.back() - step_time_s;  // never settled
    }
    m.id_final = trace.id.back();
    m.p_final_w = trace.p_w.back();
    m.q_final_var = trace.q_var.back();
    return m;
}

double pll_lock_time(const GridParams& grid, double phase_offset_rad, double duration_s,
                     double dt_s, double tol_rad_s) {
    check_dt(dt_s);
    const PllParams params = PllParams::for_grid(grid);
    const double v_peak = grid.v_d_nominal();
    const double omega_grid = grid.omega();

    PllState pll;
    pll.omega_hat = params.omega_center;

    double last_unlocked = -1.0;
    const auto n_steps = static_cast<std::size_t>(std::ceil(duration_s / dt_s));
    for (std::size_t k = 0; k < n_steps; ++k) {
        double t = static_cast<double>(k) * dt_s;
        Abc v_abc = inverse_park({v_peak, 0.0}, omega_grid * t + phase_offset_rad);
        pll_step(pll, params, v_abc, dt_s);
        if (std::abs(pll.omega_hat - omega_grid) >= tol_rad_s) last_unlocked = t;
    }
    if (last_unlocked < 0.0) return 0.0;
    double lock = last_unlocked + dt_s;
    return lock < duration_s ? lock : duration_s;
}

std::string tracking_to_csv(const TrackingTrace& trace) {
    std::string out = "t_s,id_ref,iq_ref,id,iq,vd,vq,p_w,q_var\n";
    for (std::size_t k = 0; k < trace.t_s.size(); ++k) {
        out += format_double(trace.t_s[k]);
        out += ',';
        out += format_double(trace.id_ref[k]);
        out += ',';
        out += format_double(trace.iq_ref[k]);
        out += ',';
        out += format_double(trace.id[k]);
        out += ',';
        out += format_double(trace.iq[k]);
        out += ',';
        out += format_double(trace.vd[k]);
        out += ',';
        out += format_double(trace.vq[k]);
        out += ',';
        out += format_double(trace.p_w[k]);
        out += ',';
        out += format_double(trace.q_var[k]);
        out += '\n';
    }
    return out;
}

} // namespace mgsim
