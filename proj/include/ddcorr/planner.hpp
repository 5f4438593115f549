#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace ddcorr {

inline constexpr double kDefaultInitReadoutUs = 1.0;

// Single-shot readout fidelity F = [1 + 2 (a0 + a1) / (a0 - a1)^2]^{-1/2}
// from mean detected photons per shot in the two sensor states.
double readout_fidelity(double alpha0, double alpha1);

// K = snr^2 / F^2 before rounding
double shots_for_snr_real(double fidelity, double snr);
// ceil(snr^2 / F^2)
std::uint64_t shots_for_snr(double fidelity, double snr);

// Evolution time at (N1c/2, N2c/2): pi^2 / (2 delta1 omega1) + pi^2 / (2 delta2 omega2).
// omega in rad/us, result in us.
double dip_time(double delta1, double omega1, double delta2, double omega2);

// T = K (t_dip + t_IR), in seconds
double point_time(std::uint64_t shots, double dip_time_us, double t_ir_us = kDefaultInitReadoutUs);

struct SweepEstimate {
  std::uint64_t points = 0;
  double seconds = 0.0;
};

// Unit-cell sweep with every point charged the t_dip evolution time;
// points = ceil(N1c / dN) * ceil(N2c / dN).
SweepEstimate sweep_time(std::uint64_t shots, std::span<const double> deltas,
                         std::span<const double> omegas, double t_ir_us = kDefaultInitReadoutUs,
                         int pulse_step = 2);

// Same grid, each point (N1, N2) charged its own evolution time N1 2 tau1 + N2 2 tau2
// with resonant tau_i = pi / (2 omega_i).
SweepEstimate sweep_time_exact(std::uint64_t shots, std::span<const double> deltas,
                               std::span<const double> omegas,
                               double t_ir_us = kDefaultInitReadoutUs, int pulse_step = 2);

struct PlanReport {
  double fidelity = 0.0;
  double snr = 0.0;
  std::uint64_t shots = 0;
  double dip_time_us = 0.0;
  double point_time_s = 0.0;
  std::uint64_t sweep_points = 0;
  double sweep_time_s = 0.0;
};

struct PlanInputs {
  double fidelity = 0.0;
  double snr = 0.0;
  double delta_omega[2] = {0.0, 0.0};  // delta_i * omega_i, rad/us
  double deltas[2] = {0.0, 0.0};       // needed for the sweep point count
  double t_ir_us = kDefaultInitReadoutUs;
  int pulse_step = 2;
};

PlanReport make_plan(const PlanInputs& in);

// Keys: F, K, t_dip_us, t_point_s, sweep_points, t_sweep_s
std::string plan_json(const PlanReport& report);
std::string plan_text(const PlanReport& report);

}  // namespace ddcorr
