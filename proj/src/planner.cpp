#include "ddcorr/planner.hpp"

#include "json.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ddcorr {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be > 0");
}

void require_pair(std::span<const double> deltas, std::span<const double> omegas) {
  if (deltas.size() != 2 || omegas.size() != 2) {
    throw std::invalid_argument("sweep: need two deltas and two omegas");
  }
  for (double d : deltas) require_positive(d, "delta");
  for (double w : omegas) require_positive(w, "omega");
}

std::uint64_t axis_points(double delta, int step) {
  return static_cast<std::uint64_t>(std::ceil((kPi / delta) / step));
}

}  // namespace

double readout_fidelity(double alpha0, double alpha1) {
  if (!(alpha0 >= 0.0) || !(alpha1 >= 0.0)) {
    throw std::invalid_argument("readout_fidelity: photon means must be >= 0");
  }
  if (alpha0 == alpha1) {
    throw std::invalid_argument("readout_fidelity: alpha0 == alpha1, states indistinguishable");
  }
  const double diff = alpha0 - alpha1;
  return 1.0 / std::sqrt(1.0 + 2.0 * (alpha0 + alpha1) / (diff * diff));
}

double shots_for_snr_real(double fidelity, double snr) {
  require_positive(fidelity, "fidelity");
  require_positive(snr, "snr");
  return snr * snr / (fidelity * fidelity);
}

std::uint64_t shots_for_snr(double fidelity, double snr) {
  return static_cast<std::uint64_t>(std::ceil(shots_for_snr_real(fidelity, snr)));
}

double dip_time(double delta1, double omega1, double delta2, double omega2) {
  require_positive(delta1, "delta1");
  require_positive(omega1, "omega1");
  require_positive(delta2, "delta2");
  require_positive(omega2, "omega2");
  return kPi * kPi / (2.0 * delta1 * omega1) + kPi * kPi / (2.0 * delta2 * omega2);
}

double point_time(std::uint64_t shots, double dip_time_us, double t_ir_us) {
  if (shots == 0) throw std::invalid_argument("point_time: shots must be > 0");
  require_positive(dip_time_us, "dip time");
  require_positive(t_ir_us, "t_IR");
  return static_cast<double>(shots) * (dip_time_us + t_ir_us) * 1e-6;
}

SweepEstimate sweep_time(std::uint64_t shots, std::span<const double> deltas,
                         std::span<const double> omegas, double t_ir_us, int pulse_step) {
  require_pair(deltas, omegas);
  if (pulse_step < 1) throw std::invalid_argument("sweep: pulse step must be >= 1");
  SweepEstimate s;
  s.points = axis_points(deltas[0], pulse_step) * axis_points(deltas[1], pulse_step);
  const double t_dip = dip_time(deltas[0], omegas[0], deltas[1], omegas[1]);
  s.seconds = static_cast<double>(s.points) * point_time(shots, t_dip, t_ir_us);
  return s;
}

SweepEstimate sweep_time_exact(std::uint64_t shots, std::span<const double> deltas,
                               std::span<const double> omegas, double t_ir_us, int pulse_step) {
  require_pair(deltas, omegas);
  if (shots == 0) throw std::invalid_argument("sweep: shots must be > 0");
  require_positive(t_ir_us, "t_IR");
  if (pulse_step < 1) throw std::invalid_argument("sweep: pulse step must be >= 1");
  const std::uint64_t p1 = axis_points(deltas[0], pulse_step);
  const std::uint64_t p2 = axis_points(deltas[1], pulse_step);
  const double period1 = kPi / omegas[0];  // 2 tau at first-order resonance
  const double period2 = kPi / omegas[1];
  double total_us = 0.0;
  for (std::uint64_t i = 0; i < p1; ++i) {
    for (std::uint64_t j = 0; j < p2; ++j) {
      const double n1 = static_cast<double>(i * static_cast<std::uint64_t>(pulse_step));
      const double n2 = static_cast<double>(j * static_cast<std::uint64_t>(pulse_step));
      total_us += n1 * period1 + n2 * period2 + t_ir_us;
    }
  }
  return {p1 * p2, static_cast<double>(shots) * total_us * 1e-6};
}

PlanReport make_plan(const PlanInputs& in) {
  PlanReport r;
  r.fidelity = in.fidelity;
  r.snr = in.snr;
  r.shots = shots_for_snr(in.fidelity, in.snr);
  require_positive(in.delta_omega[0], "delta1 * omega1");
  require_positive(in.delta_omega[1], "delta2 * omega2");
  r.dip_time_us = kPi * kPi / (2.0 * in.delta_omega[0]) + kPi * kPi / (2.0 * in.delta_omega[1]);
  r.point_time_s = point_time(r.shots, r.dip_time_us, in.t_ir_us);
  if (in.deltas[0] > 0.0 && in.deltas[1] > 0.0) {
    const double deltas[2] = {in.deltas[0], in.deltas[1]};
    const double omegas[2] = {in.delta_omega[0] / in.deltas[0], in.delta_omega[1] / in.deltas[1]};
    const auto sweep = sweep_time(r.shots, deltas, omegas, in.t_ir_us, in.pulse_step);
    r.sweep_points = sweep.points;
    r.sweep_time_s = sweep.seconds;
  }
  return r;
}

std::string plan_json(const PlanReport& r) {
  nlohmann::ordered_json j;
  j["F"] = r.fidelity;
  j["K"] = r.shots;
  j["t_dip_us"] = r.dip_time_us;
  j["t_point_s"] = r.point_time_s;
  if (r.sweep_points > 0) {
    j["sweep_points"] = r.sweep_points;
    j["t_sweep_s"] = r.sweep_time_s;
  } else {
    j["sweep_points"] = nullptr;
    j["t_sweep_s"] = nullptr;
  }
  return j.dump(2);
}

std::string plan_text(const PlanReport& r) {
  std::ostringstream out;
  out << std::setprecision(6);
  out << "readout fidelity F      " << r.fidelity << '\n';
  out << "target SNR              " << r.snr << '\n';
  out << "shots K                 " << r.shots << '\n';
  out << "dip evolution time      " << r.dip_time_us << " us\n";
  out << "time per data point     " << r.point_time_s << " s\n";
  if (r.sweep_points > 0) {
    out << "unit-cell points        " << r.sweep_points << '\n';
    out << "unit-cell sweep time    " << r.sweep_time_s << " s\n";
  }
  return out.str();
}

}  // namespace ddcorr
