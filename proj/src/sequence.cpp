#include "ddcorr/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ddcorr {

namespace {

constexpr double kSingularCos = 1e-6;
// below this |1 + z^2| the geometric-sum ratio loses digits; sum term by term
constexpr double kGeometricPole = 1e-2;
constexpr double kResonanceSlack = 0.05;

// omega * integral over [a, b] of e^{i omega t}
Complex segment_integral(double omega, double a, double b) {
  return (std::polar(1.0, omega * b) - std::polar(1.0, omega * a)) / Complex(0.0, 1.0);
}

// Single-block CPMG amplitude measured from the block's own start, via the
// geometric sum  -i [ -1 + 2 sum_p (-1)^{p-1} z^{2p-1} + (-1)^N z^{2N} ],  z = e^{i omega tau}.
Complex cpmg_block_amplitude(int n, double tau, double omega) {
  if (n == 0) return {0.0, 0.0};
  const Complex z = std::polar(1.0, omega * tau);
  const Complex z2 = z * z;
  const Complex denom = 1.0 + z2;
  Complex alternating;
  if (std::abs(denom) < kGeometricPole) {
    // -z^2 ~ 1: sum explicitly
    alternating = 0.0;
    for (int p = 1; p <= n; ++p) {
      const double sign = (p % 2 == 1) ? 1.0 : -1.0;
      alternating += sign * std::polar(1.0, omega * tau * (2.0 * p - 1.0));
    }
  } else {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    const Complex minus_z2_pow_n = parity * std::polar(1.0, 2.0 * n * omega * tau);
    alternating = z * (1.0 - minus_z2_pow_n) / denom;
  }
  const double end_sign = (n % 2 == 0) ? 1.0 : -1.0;
  const Complex bracket = -1.0 + 2.0 * alternating + end_sign * std::polar(1.0, 2.0 * n * omega * tau);
  return Complex(0.0, -1.0) * bracket;
}

}  // namespace

SequenceSpec::SequenceSpec(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw std::invalid_argument("SequenceSpec: at least one block is required");
  }
  for (const auto& b : blocks_) {
    if (!(b.tau_us > 0.0) || !std::isfinite(b.tau_us)) {
      throw std::invalid_argument("SequenceSpec: tau must be > 0");
    }
    if (b.n_pulses < 0) {
      throw std::invalid_argument("SequenceSpec: pulse count must be >= 0");
    }
  }
}

double SequenceSpec::total_time() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += 2.0 * b.n_pulses * b.tau_us;
  return t;
}

PulseTimeline build_timeline(const SequenceSpec& spec) {
  PulseTimeline tl;
  std::size_t count = 0;
  for (const auto& b : spec.blocks()) count += static_cast<std::size_t>(b.n_pulses);
  tl.flip_times.reserve(count);
  double start = 0.0;
  for (const auto& b : spec.blocks()) {
    for (int p = 1; p <= b.n_pulses; ++p) {
      tl.flip_times.push_back(start + (2.0 * p - 1.0) * b.tau_us);
    }
    start += 2.0 * b.n_pulses * b.tau_us;
  }
  tl.total_time = start;
  return tl;
}

double resonant_tau(double omega, int order) {
  if (!(omega > 0.0)) throw std::invalid_argument("resonant_tau: omega must be > 0");
  if (order < 1) throw std::invalid_argument("resonant_tau: order must be >= 1");
  return std::numbers::pi * (2.0 * order - 1.0) / (2.0 * omega);
}

int modulation(const PulseTimeline& timeline, double t) {
  if (!(t >= 0.0) || t > timeline.total_time) {
    throw std::out_of_range("modulation: t outside [0, total_time]");
  }
  const auto flips = static_cast<std::size_t>(
      std::upper_bound(timeline.flip_times.begin(), timeline.flip_times.end(), t) -
      timeline.flip_times.begin());
  return (flips % 2 == 0) ? 1 : -1;
}

Complex filter_amplitude(const PulseTimeline& timeline, double omega) {
  if (omega == 0.0) throw std::invalid_argument("filter: omega must be nonzero");
  Complex acc{0.0, 0.0};
  double sign = 1.0;
  double a = 0.0;
  for (double flip : timeline.flip_times) {
    acc += sign * segment_integral(omega, a, flip);
    sign = -sign;
    a = flip;
  }
  acc += sign * segment_integral(omega, a, timeline.total_time);
  return acc;
}

FilterResult filter_numeric(const PulseTimeline& timeline, double omega) {
  const Complex amp = filter_amplitude(timeline, omega);
  return {std::abs(amp), std::arg(amp)};
}

double filter_cpmg_closed(int n_pulses, double tau, double omega) {
  if (n_pulses < 1) throw std::invalid_argument("filter_cpmg_closed: N must be >= 1");
  if (!(tau > 0.0) || !(omega > 0.0)) {
    throw std::invalid_argument("filter_cpmg_closed: tau and omega must be > 0");
  }
  const double t = 2.0 * n_pulses * tau;
  const double c = std::cos(omega * t / (2.0 * n_pulses));
  if (std::abs(c) < kSingularCos) {
    SequenceSpec spec({Block{tau, n_pulses}});
    return filter_numeric(build_timeline(spec), omega).magnitude;
  }
  const double s = std::sin(omega * t / (4.0 * n_pulses));
  const double tail = (n_pulses % 2 == 1) ? std::cos(omega * t / 2.0) : std::sin(omega * t / 2.0);
  return 4.0 * s * s * std::abs(tail / c);
}

FilterResult filter_multiblock(const SequenceSpec& spec, double omega) {
  if (omega == 0.0) throw std::invalid_argument("filter_multiblock: omega must be nonzero");
  Complex total{0.0, 0.0};
  double start = 0.0;
  double sign = 1.0;
  for (const auto& b : spec.blocks()) {
    total += sign * std::polar(1.0, omega * start) * cpmg_block_amplitude(b.n_pulses, b.tau_us, omega);
    if (b.n_pulses % 2 == 1) sign = -sign;
    start += 2.0 * b.n_pulses * b.tau_us;
  }
  return {std::abs(total), std::arg(total)};
}

std::vector<std::string> lint_resonance_overlap(std::span<const TargetCluster> clusters,
                                                const SequenceSpec& spec) {
  struct Line {
    std::size_t cluster;
    std::size_t m, n;
    double omega;
  };
  std::vector<Line> lines;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    for (std::size_t m = 0; m < c.dim(); ++m) {
      for (std::size_t n = 0; n < m; ++n) {
        const auto beta = c.coupling()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
        const double omega = std::abs(c.energies()(static_cast<Eigen::Index>(m)) -
                                      c.energies()(static_cast<Eigen::Index>(n)));
        if (std::abs(beta) == 0.0 || omega == 0.0) continue;
        lines.push_back({k, m, n, omega});
      }
    }
  }

  // odd-harmonic index 2 tau omega / pi; resonance when close to an odd integer
  auto harmonic_offset = [](double tau, double omega) {
    const double x = 2.0 * tau * omega / std::numbers::pi;
    const double nearest_odd = 2.0 * std::floor(x / 2.0) + 1.0;
    return std::abs(x - nearest_odd);
  };

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& b = spec.blocks()[i];
    if (b.n_pulses == 0) continue;
    const double full = 2.0 * b.n_pulses;
    std::vector<std::size_t> resonant;
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (harmonic_offset(b.tau_us, lines[j].omega) <= kResonanceSlack) resonant.push_back(j);
    }
    if (resonant.empty()) continue;
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (j == resonant.front()) continue;
      const double f = filter_cpmg_closed(b.n_pulses, b.tau_us, lines[j].omega);
      if (f >= kOverlapFraction * full) {
        const auto& r = lines[resonant.front()];
        const auto& o = lines[j];
        std::ostringstream msg;
        msg << "block " << i << " (tau = " << b.tau_us << " us, N = " << b.n_pulses
            << ") resonant with cluster " << r.cluster << " transition (" << r.m << ", " << r.n
            << ") also filters cluster " << o.cluster << " transition (" << o.m << ", " << o.n
            << ") with F = " << f << " (" << f / full * 100.0 << "% of 2N)";
        warnings.push_back(msg.str());
      }
    }
  }
  return warnings;
}

}  // namespace ddcorr
