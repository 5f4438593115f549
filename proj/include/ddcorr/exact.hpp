#pragma once

#include "ddcorr/linalg.hpp"
#include "ddcorr/sequence.hpp"
#include "ddcorr/spin_model.hpp"

#include <vector>

namespace ddcorr {

using CoherenceValue = Complex;

struct ConditionalPropagators {
  CMatrix u_plus;
  CMatrix u_minus;
};

// Free-evolution interval between flips; sign is the factor multiplying the
// sensor sign in H0 + sign * sensor_sign * beta / 2.
struct Segment {
  double duration = 0.0;
  int sign = 1;
};

// The flips + 1 constant-Hamiltonian intervals of a timeline.
std::vector<Segment> segments(const PulseTimeline& timeline);

// exp(-i h dt) for Hermitian h via spectral decomposition.
CMatrix herm_propagator(const CMatrix& h, double dt);

// Eigensystems of H0 +/- beta/2 for one cluster, computed once and reused for
// every timeline. Immutable after construction.
class ConditionalEvolution {
 public:
  explicit ConditionalEvolution(const TargetCluster& cluster);

  std::size_t dim() const { return dim_; }
  CMatrix propagator(const PulseTimeline& timeline, int sensor_sign) const;
  ConditionalPropagators propagators(const PulseTimeline& timeline) const;
  // (1/d) Tr[(U-)^dagger U+] for the maximally mixed initial state
  CoherenceValue coherence(const PulseTimeline& timeline) const;

 private:
  std::size_t dim_;
  RVector w_plus_, w_minus_;
  CMatrix v_plus_, v_minus_;
  CMatrix plus_from_minus_;  // V+^dagger V-
  CMatrix minus_from_plus_;  // V-^dagger V+
};

CMatrix conditional_propagator(const TargetCluster& cluster, const PulseTimeline& timeline,
                               int sensor_sign);
CoherenceValue coherence_cluster(const TargetCluster& cluster, const PulseTimeline& timeline);
CoherenceValue coherence_system(const SystemModel& system, const PulseTimeline& timeline);

}  // namespace ddcorr
