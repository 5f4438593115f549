#pragma once

#include "ddcorr/linalg.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ddcorr {

// A nuclear-spin "molecule": level energies and the Hermitian operator that
// couples it to the sensor. All frequencies are angular, in rad/us.
//
// The stored coupling matrix is the full operator beta, so beta(m, n) is the
// transition matrix element <m|beta|n>. The conditional Hamiltonians seen by
// the target are H0 +/- beta/2.
class TargetCluster {
 public:
  TargetCluster(std::string label, RVector energies, CMatrix coupling);

  const std::string& label() const { return label_; }
  std::size_t dim() const { return static_cast<std::size_t>(energies_.size()); }
  const RVector& energies() const { return energies_; }
  const CMatrix& coupling() const { return coupling_; }

  CMatrix free_hamiltonian() const;
  // H0 + sign * beta / 2, sign in {+1, -1}
  CMatrix conditional_hamiltonian(int sensor_sign) const;

 private:
  std::string label_;
  RVector energies_;
  CMatrix coupling_;
};

// One coupled pair of levels, resolved so that omega > 0.
struct TransitionSpec {
  std::size_t m = 0;  // upper level
  std::size_t n = 0;  // lower level
  double omega = 0.0;     // eps_m - eps_n, rad/us
  double beta_mag = 0.0;  // |beta_mn|, rad/us
  double kappa = 0.0;     // arg(beta_mn / omega_mn)
  double delta = 0.0;     // |beta_mn / omega_mn|
};

// The M independent target clusters seen by one sensor.
class SystemModel {
 public:
  explicit SystemModel(std::vector<TargetCluster> clusters);
  const std::vector<TargetCluster>& clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }

 private:
  std::vector<TargetCluster> clusters_;
};

struct Coupling {
  std::size_t m = 0;
  std::size_t n = 0;
  double amplitude = 0.0;  // rad/us
  double phase = 0.0;      // rad
};

// Amplitude in kHz (cyclic) plus phase in rad, as used by the presets.
struct PhasedCoupling {
  double amplitude_khz = 0.0;
  double phase = 0.0;
};

TargetCluster new_cluster(std::string label, std::span<const double> energies,
                          std::span<const Coupling> couplings);

// Spin-1 target under H = lambda S_z J_x + (w_a + w_b) J_z^2 / 2 + (w_a - w_b) J_z / 2.
// Levels are ordered (|-1>, |0>, |+1>) -> indices 0, 1, 2.
TargetCluster spin_one_preset(double f_a_mhz, double f_b_mhz, double lambda_khz);

// d-level ladder; rung i couples levels i and i+1 with |beta| = 2 pi * kHz.
TargetCluster ladder_preset(std::span<const double> rung_freqs_mhz,
                            std::span<const std::optional<double>> rung_couplings_khz);

// Three levels {0, f_2, f_1} with all three pairs coupled. Couplings are given
// in transition order (f_1: 2<->0, f_2: 1<->0, f_1 - f_2: 2<->1).
TargetCluster ring_preset(double f_1_mhz, double f_2_mhz,
                          const std::array<PhasedCoupling, 3>& couplings);

// Hub level 0 at zero energy, spoke level i+1 at f_i, coupled only to the hub.
TargetCluster star_preset(std::span<const double> spoke_freqs_mhz,
                          std::span<const PhasedCoupling> spoke_couplings);

TransitionSpec transition(const TargetCluster& cluster, std::size_t m, std::size_t n);

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity = Severity::warning;
  std::string message;
};

inline constexpr double kWeakCouplingWarn = 0.1;
inline constexpr double kWeakCouplingError = 1.0;

// Flags coupled transitions whose contrast delta is too large for the
// first-order (Magnus) picture.
std::vector<Diagnostic> validate_weak_coupling(const TargetCluster& cluster);

}  // namespace ddcorr
