#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mgsim {

inline constexpr double kPi = 3.14159265358979323846;

struct GridParams {
    double v_ll_rms = 400.0;  // line-to-line RMS
    double f_hz = 50.0;

    double omega() const { return 2.0 * kPi * f_hz; }
    // Peak phase voltage = d-axis voltage of an aligned frame under the
    // amplitude-invariant transform: v_ll * sqrt(2)/sqrt(3) (~326.6 V at 400 V).
    double v_d_nominal() const;
};

struct FilterParams {
    double l_f = 0.007;  // H
    double r_f = 0.1;    // ohm
};

struct PiGains {
    double kp = 0.0;
    double ki = 0.0;
};

// Pole placement on the current plant 1/(L s + R), treating the inductance as
// the plant: kp = 2*xi*omega_n*L, ki = omega_n^2*L. The small R term folds
// into the effective damping.
PiGains tune_pi(const FilterParams& filter, double xi, double omega_n);

struct Dq {
    double d = 0.0;
    double q = 0.0;
};

using Abc = std::array<double, 3>;

// Amplitude-invariant Park transform: a balanced set of peak V aligned with
// theta maps to (V, 0).
Dq park_transform(const Abc& abc, double theta);
Abc inverse_park(const Dq& dq, double theta);

// d-q current references from power setpoints: i_d = 2P/(3V_d),
// i_q = -2Q/(3V_d). Throws on a degenerate voltage (v_d <= 0).
Dq current_refs(double p_ref_w, double q_ref_var, double v_d);

// Reconstructed powers from frame quantities: P = 3/2 V_d I_d, Q = -3/2 V_d I_q.
double active_power(double v_d, double i_d);
double reactive_power(double v_d, double i_q);

struct PllParams {
    double kp = 0.0;
    double ki = 0.0;
    double v_norm = 1.0;       // voltage scale for the q-axis error
    double omega_center = 0.0; // nominal angular frequency

    // Standard SRF-PLL at ~50 Hz loop bandwidth, well below the current
    // controller bandwidth.
    static PllParams for_grid(const GridParams& grid);
};

struct PllState {
    double theta = 0.0;
    double omega_hat = 0.0;
    double integrator = 0.0;
};

// One PLL update on the measured three-phase voltage; drives the q-axis
// component to zero. dt must be positive and <= 1e-4 s.
void pll_step(PllState& state, const PllParams& params, const Abc& v_abc, double dt_s);

struct ControllerState {
    double int_d = 0.0;
    double int_q = 0.0;
};

// Decoupled PI current controller: PI on the current error plus grid-voltage
// feedforward and cross-coupling compensation (-wL i_q on d, +wL i_d on q).
// Returns the commanded inverter voltage and advances the integrators.
Dq controller_step(ControllerState& state, const PiGains& gains, double l_f,
                   const Dq& refs, const Dq& measured, const Dq& v_grid,
                   double omega, double dt_s);

// One classic 4th-order step of the dq filter dynamics
//   L di_d/dt = v_inv_d - v_grid_d - R i_d + w L i_q
//   L di_q/dt = v_inv_q - v_grid_q - R i_q - w L i_d
// with inputs held constant over dt.
Dq plant_step(const Dq& currents, const Dq& v_inv, const Dq& v_grid, double omega,
              const FilterParams& filter, double dt_s);

// Combined state of the closed-loop simulation: PLL angle and frequency
// estimate, controller integrators, filter currents.
struct DqSimState {
    PllState pll;
    ControllerState ctrl;
    Dq currents;
};

struct PowerStep {
    double time_s = 0.0;
    double p_ref_w = 0.0;
};

struct TrackingOptions {
    GridParams grid;
    FilterParams filter;
    double xi = 0.707;
    double omega_n = 2.0 * kPi * 300.0;
    double dt_s = 20e-6;
    // First-order shaping of the current reference at the controller zero
    // ki/kp, so the closed loop shows the (xi, omega_n) design response
    // instead of the ~20% overshoot the zero would add.
    bool reference_shaping = true;
    double grid_phase_offset_rad = 0.0;  // initial angle unknown to the PLL
};

struct TrackingTrace {
    std::vector<double> t_s, id_ref, iq_ref, id, iq, vd, vq, p_w, q_var;
    PiGains gains;
    double dt_s = 0.0;
};

// Closed-loop PLL + controller + plant run following a stepwise active-power
// schedule with Q held at zero. Throws NumericError (with the step index) if
// the state diverges.
TrackingTrace run_tracking_sim(const std::vector<PowerStep>& schedule, double duration_s,
                               const TrackingOptions& options);

struct StepMetrics {
    double overshoot_pct = 0.0;  // of the step magnitude
    double settling_s = 0.0;     // 2% band, from the step instant
    double id_final = 0.0;
    double p_final_w = 0.0;
    double q_final_var = 0.0;
};

StepMetrics step_metrics(const TrackingTrace& trace, double step_time_s, double p_target_w);

// Time after which |omega_hat - omega_nominal| stays within tol until the end
// of the run, starting from the given phase offset. Returns the run duration
// if the PLL never locks.
double pll_lock_time(const GridParams& grid, double phase_offset_rad, double duration_s,
                     double dt_s, double tol_rad_s = 0.5);

// CSV export: t_s,id_ref,iq_ref,id,iq,vd,vq,p_w,q_var
std::string tracking_to_csv(const TrackingTrace& trace);

} // namespace mgsim
