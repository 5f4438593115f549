#pragma once

#include "ddcorr/linalg.hpp"
#include "ddcorr/spin_model.hpp"

#include <span>
#include <string>
#include <vector>

namespace ddcorr {

// One CPMG sub-sequence: n_pulses pi flips spaced by 2 * tau_us, first flip at tau_us.
// n_pulses = 0 is a zero-length block (used for the N = 0 anchor of scans).
struct Block {
  double tau_us = 0.0;
  int n_pulses = 0;
};

// An l-dimensional DD sequence: l consecutive CPMG blocks.
class SequenceSpec {
 public:
  explicit SequenceSpec(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  double total_time() const;

 private:
  std::vector<Block> blocks_;
};

struct PulseTimeline {
  std::vector<double> flip_times;  // us, strictly ascending
  double total_time = 0.0;         // us
};

// Filter magnitude F and phase xi, with F e^{i xi} = omega * integral f(t) e^{i omega t}.
struct FilterResult {
  double magnitude = 0.0;
  double phase = 0.0;
};

PulseTimeline build_timeline(const SequenceSpec& spec);

// Half pulse interval tau placing the CPMG resonance of order c on omega:
// 2 tau = pi (2c - 1) / omega.
double resonant_tau(double omega, int order = 1);

// Modulation f(t) = +1 before the first flip, toggling at every flip.
int modulation(const PulseTimeline& timeline, double t);

// omega * integral_0^T f(t) e^{i omega t} dt, summed exactly segment by segment.
Complex filter_amplitude(const PulseTimeline& timeline, double omega);
FilterResult filter_numeric(const PulseTimeline& timeline, double omega);

// Closed-form CPMG-N filter evaluated at t = 2 N tau (odd/even-N branches).
double filter_cpmg_closed(int n_pulses, double tau, double omega);

// Coherent sum of per-block CPMG amplitudes, phases referenced to t = 0.
FilterResult filter_multiblock(const SequenceSpec& spec, double omega);

inline constexpr double kOverlapFraction = 0.2;

// Warns when a block resonant with one transition also strongly filters another.
std::vector<std::string> lint_resonance_overlap(std::span<const TargetCluster> clusters,
                                                const SequenceSpec& spec);

}  // namespace ddcorr
