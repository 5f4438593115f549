#include "ddcorr/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ddcorr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(int d, int minimum, const char* what) {
  if (d < minimum) {
    std::ostringstream msg;
    msg << what << ": dimension d = " << d << " below topology minimum " << minimum;
    throw std::invalid_argument(msg.str());
  }
}

void require_params(const DipParams& p, std::size_t count, const char* what) {
  if (p.deltas.size() != count || p.pulses.size() != count) {
    std::ostringstream msg;
    msg << what << ": expected " << count << " deltas and " << count << " pulse counts";
    throw std::invalid_argument(msg.str());
  }
  for (double delta : p.deltas) {
    if (!(delta > 0.0)) throw std::invalid_argument(std::string(what) + ": delta must be > 0");
  }
}

// cos(2 N delta)
double c2(const DipParams& p, std::size_t i) { return std::cos(2.0 * p.pulses[i] * p.deltas[i]); }

double factor_1d(int d, double delta, double n) {
  return (d - 2.0 + 2.0 * std::cos(2.0 * n * delta)) / d;
}

}  // namespace

CMatrix magnus_rotation(const TargetCluster& cluster, std::size_t m, std::size_t n,
                        double pulse_count) {
  transition(cluster, m, n);  // rejects dark / degenerate / out-of-range
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ni = static_cast<Eigen::Index>(n);
  const double omega = cluster.energies()(mi) - cluster.energies()(ni);
  const Complex ratio = cluster.coupling()(mi, ni) / omega;  // delta e^{i kappa}
  const double delta = std::abs(ratio);
  const Complex phase = ratio / delta;
  const double angle = pulse_count * delta;

  const auto d = static_cast<Eigen::Index>(cluster.dim());
  CMatrix u = CMatrix::Identity(d, d);
  const Complex minus_i{0.0, -1.0};
  u(mi, mi) = std::cos(angle);
  u(ni, ni) = std::cos(angle);
  u(mi, ni) = minus_i * phase * std::sin(angle);
  u(ni, mi) = minus_i * std::conj(phase) * std::sin(angle);
  return u;
}

double dip_1d(int d, double delta, double n_pulses) {
  require_dim(d, 2, "dip_1d");
  if (!(delta > 0.0)) throw std::invalid_argument("dip_1d: delta must be > 0");
  return factor_1d(d, delta, n_pulses);
}

double dip_2d(const Topology2D& topology, const DipParams& p) {
  require_params(p, 2, "dip_2d");
  return std::visit(
      overloaded{
          [&](const topology::IndependentMolecules& t) {
            require_dim(t.d1, 2, "dip_2d");
            require_dim(t.d2, 2, "dip_2d");
            return factor_1d(t.d1, p.deltas[0], p.pulses[0]) *
                   factor_1d(t.d2, p.deltas[1], p.pulses[1]);
          },
          [&](const topology::Uncorrelated&) {
            require_dim(p.d, 4, "dip_2d(uncorrelated)");
            return (p.d - 4.0 + 2.0 * c2(p, 0) + 2.0 * c2(p, 1)) / p.d;
          },
          [&](const topology::Correlated&) {
            require_dim(p.d, 3, "dip_2d(correlated)");
            return (p.d - 3.0 + c2(p, 0) + c2(p, 1) + c2(p, 0) * c2(p, 1)) / p.d;
          },
      },
      topology);
}

double dip_3d(const Topology3D& topology, const DipParams& p) {
  require_params(p, 3, "dip_3d");
  // Shared pieces of the ring / star / linked-ladder forms
  auto ring_terms = [&] {
    const double cos_half = std::cos(p.pulses[1] * p.deltas[1]);
    const double sin_half = std::sin(p.pulses[1] * p.deltas[1]);
    const double s2 = sin_half * sin_half;
    const double k2 = cos_half * cos_half;
    const double a = c2(p, 0);
    const double b = c2(p, 2);
    return -s2 + a * k2 + k2 * b - a * s2 * b;
  };
  return std::visit(
      overloaded{
          [&](const topology::Independent3& t) {
            require_dim(t.d1, 2, "dip_3d");
            require_dim(t.d2, 2, "dip_3d");
            require_dim(t.d3, 2, "dip_3d");
            return factor_1d(t.d1, p.deltas[0], p.pulses[0]) *
                   factor_1d(t.d2, p.deltas[1], p.pulses[1]) *
                   factor_1d(t.d3, p.deltas[2], p.pulses[2]);
          },
          [&](const topology::Uncorrelated3&) {
            require_dim(p.d, 6, "dip_3d(uncorrelated)");
            return (p.d - 6.0 + 2.0 * (c2(p, 0) + c2(p, 1) + c2(p, 2))) / p.d;
          },
          [&](const topology::Ring&) {
            require_dim(p.d, 3, "dip_3d(ring)");
            return (p.d - 3.0 + c2(p, 0) * c2(p, 2) + ring_terms()) / p.d;
          },
          [&](const topology::Star&) {
            require_dim(p.d, 4, "dip_3d(star)");
            return (p.d - 3.0 + c2(p, 0) * c2(p, 2) + ring_terms()) / p.d;
          },
          [&](const topology::LinkedLadder&) {
            require_dim(p.d, 4, "dip_3d(linked ladder)");
            return (p.d - 4.0 + c2(p, 0) + c2(p, 2) + ring_terms()) / p.d;
          },
          [&](const topology::UnlinkedLadder&) {
            require_dim(p.d, 5, "dip_3d(unlinked ladder)");
            return (p.d - 5.0 + 2.0 * c2(p, 0) + c2(p, 1) + c2(p, 2) + c2(p, 1) * c2(p, 2)) / p.d;
          },
      },
      topology);
}

Complex dip_trace_2d(const TargetCluster& cluster, LevelPair first, LevelPair second, double n1,
                     double n2) {
  const CMatrix u1 = magnus_rotation(cluster, first.first, first.second, 2.0 * n1);
  const CMatrix u2 = magnus_rotation(cluster, second.first, second.second, 2.0 * n2);
  return (u2 * u1).trace() / static_cast<double>(cluster.dim());
}

Complex dip_trace_3d(const TargetCluster& cluster, const std::array<LevelPair, 3>& t, double n1,
                     double n2, double n3) {
  const CMatrix u1 = magnus_rotation(cluster, t[0].first, t[0].second, 2.0 * n1);
  const CMatrix u2 = magnus_rotation(cluster, t[1].first, t[1].second, n2);
  const CMatrix u3 = magnus_rotation(cluster, t[2].first, t[2].second, 2.0 * n3);
  return (u3 * u2 * u1 * u2).trace() / static_cast<double>(cluster.dim());
}

double dip(const DipTopology& topology, const DipParams& params) {
  return std::visit(overloaded{
                        [&](const topology::Single&) {
                          require_params(params, 1, "dip");
                          return dip_1d(params.d, params.deltas[0], params.pulses[0]);
                        },
                        [&](const Topology2D& t) { return dip_2d(t, params); },
                        [&](const Topology3D& t) { return dip_3d(t, params); },
                    },
                    topology);
}

std::size_t block_count(const DipTopology& topology) {
  return std::visit(overloaded{
                        [](const topology::Single&) -> std::size_t { return 1; },
                        [](const Topology2D&) -> std::size_t { return 2; },
                        [](const Topology3D&) -> std::size_t { return 3; },
                    },
                    topology);
}

DipTopology parse_topology(std::string_view name, std::span<const int> dims) {
  auto need_dims = [&](std::size_t count) {
    if (dims.size() != count) {
      std::ostringstream msg;
      msg << "topology '" << name << "' needs " << count << " cluster dimensions";
      throw std::invalid_argument(msg.str());
    }
  };
  if (name == "1d") return topology::Single{};
  if (name == "2d-independent") {
    need_dims(2);
    return Topology2D{topology::IndependentMolecules{dims[0], dims[1]}};
  }
  if (name == "2d-uncorrelated") return Topology2D{topology::Uncorrelated{}};
  if (name == "2d-correlated") return Topology2D{topology::Correlated{}};
  if (name == "3d-independent") {
    need_dims(3);
    return Topology3D{topology::Independent3{dims[0], dims[1], dims[2]}};
  }
  if (name == "3d-uncorrelated") return Topology3D{topology::Uncorrelated3{}};
  if (name == "3d-ring") return Topology3D{topology::Ring{}};
  if (name == "3d-star") return Topology3D{topology::Star{}};
  if (name == "3d-linked-ladder") return Topology3D{topology::LinkedLadder{}};
  if (name == "3d-unlinked-ladder") return Topology3D{topology::UnlinkedLadder{}};
  throw std::invalid_argument("unknown topology '" + std::string(name) + "'");
}

std::string topology_name(const DipTopology& topology) {
  return std::visit(
      overloaded{
          [](const topology::Single&) -> std::string { return "1d"; },
          [](const Topology2D& t) -> std::string {
            return std::visit(overloaded{
                                  [](const topology::IndependentMolecules&) { return "2d-independent"; },
                                  [](const topology::Uncorrelated&) { return "2d-uncorrelated"; },
                                  [](const topology::Correlated&) { return "2d-correlated"; },
                              },
                              t);
          },
          [](const Topology3D& t) -> std::string {
            return std::visit(overloaded{
                                  [](const topology::Independent3&) { return "3d-independent"; },
                                  [](const topology::Uncorrelated3&) { return "3d-uncorrelated"; },
                                  [](const topology::Ring&) { return "3d-ring"; },
                                  [](const topology::Star&) { return "3d-star"; },
                                  [](const topology::LinkedLadder&) { return "3d-linked-ladder"; },
                                  [](const topology::UnlinkedLadder&) { return "3d-unlinked-ladder"; },
                              },
                              t);
          },
      },
      topology);
}

PulsePeriod pulse_period(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("pulse_period: delta must be > 0");
  const double period = std::numbers::pi / delta;
  return {period, 2 * std::lround(period / 2.0)};
}

double minima(DipFamily family, int d) {
  switch (family) {
    case DipFamily::one_d:
      require_dim(d, 2, "minima(1D)");
      return (d - 4.0) / d;
    case DipFamily::uncorrelated_2d:
      require_dim(d, 4, "minima(2D uncorrelated)");
      return (d - 8.0) / d;
    case DipFamily::correlated_2d:
      require_dim(d, 3, "minima(2D correlated)");
      return (d - 4.0) / d;
  }
  throw std::invalid_argument("minima: unknown family");
}

int minimum_dimension(const Topology2D& topology) {
  return std::visit(overloaded{
                        [](const topology::IndependentMolecules&) { return 2; },
                        [](const topology::Uncorrelated&) { return 4; },
                        [](const topology::Correlated&) { return 3; },
                    },
                    topology);
}

int minimum_dimension(const Topology3D& topology) {
  return std::visit(overloaded{
                        [](const topology::Independent3&) { return 2; },
                        [](const topology::Uncorrelated3&) { return 6; },
                        [](const topology::Ring&) { return 3; },
                        [](const topology::Star&) { return 4; },
                        [](const topology::LinkedLadder&) { return 4; },
                        [](const topology::UnlinkedLadder&) { return 5; },
                    },
                    topology);
}

}  // namespace ddcorr
