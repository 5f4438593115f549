#pragma once

#include "ddcorr/linalg.hpp"
#include "ddcorr/spin_model.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ddcorr {

// Inputs of a closed-form dip: Hilbert dimension, per-transition contrast
// delta_i and per-block pulse count N_i. N_i may be real-valued.
struct DipParams {
  int d = 0;
  std::vector<double> deltas;
  std::vector<double> pulses;
};

namespace topology {

// One CPMG block resonant with a single transition.
struct Single {};

// Two transitions from two separate clusters of dimensions d1 and d2.
struct IndependentMolecules {
  int d1 = 2;
  int d2 = 2;
};
struct Uncorrelated {};
struct Correlated {};

struct Independent3 {
  int d1 = 2;
  int d2 = 2;
  int d3 = 2;
};
struct Uncorrelated3 {};
struct Ring {};
struct Star {};
struct LinkedLadder {};
struct UnlinkedLadder {};

}  // namespace topology

using Topology2D =
    std::variant<topology::IndependentMolecules, topology::Uncorrelated, topology::Correlated>;
using Topology3D = std::variant<topology::Independent3, topology::Uncorrelated3, topology::Ring,
                                topology::Star, topology::LinkedLadder, topology::UnlinkedLadder>;

// Any closed form: 1D, 2D or 3D.
using DipTopology = std::variant<topology::Single, Topology2D, Topology3D>;

using LevelPair = std::pair<std::size_t, std::size_t>;

// First-order effective propagator U_mn(N) = exp[-i N (beta_mn |m><n| + h.c.) / omega_mn].
// Identity outside the (m, n) block; omega_mn = eps_m - eps_n keeps its sign.
CMatrix magnus_rotation(const TargetCluster& cluster, std::size_t m, std::size_t n,
                        double pulse_count);

double dip_1d(int d, double delta, double n_pulses);
double dip_2d(const Topology2D& topology, const DipParams& params);
double dip_3d(const Topology3D& topology, const DipParams& params);

// (1/d) Tr[U_pq(2 N2) U_mn(2 N1)]
Complex dip_trace_2d(const TargetCluster& cluster, LevelPair first, LevelPair second, double n1,
                     double n2);
// (1/d) Tr[U_rs(2 N3) U_pq(N2) U_mn(2 N1) U_pq(N2)]
Complex dip_trace_3d(const TargetCluster& cluster, const std::array<LevelPair, 3>& transitions,
                     double n1, double n2, double n3);

// Dispatches to dip_1d / dip_2d / dip_3d; params carry one delta and N per block.
double dip(const DipTopology& topology, const DipParams& params);
std::size_t block_count(const DipTopology& topology);

// Names used on the command line and in scenarios: "1d", "2d-independent",
// "2d-uncorrelated", "2d-correlated", "3d-independent", "3d-uncorrelated",
// "3d-ring", "3d-star", "3d-linked-ladder", "3d-unlinked-ladder".
// Independent topologies take their per-cluster dimensions from `dims`.
DipTopology parse_topology(std::string_view name, std::span<const int> dims = {});
std::string topology_name(const DipTopology& topology);

struct PulsePeriod {
  double period = 0.0;  // pi / delta
  long even = 0;        // nearest even integer
};
PulsePeriod pulse_period(double delta);

enum class DipFamily { one_d, uncorrelated_2d, correlated_2d };

// Quantized coherence minimum: (d-4)/d in 1D and for correlated pairs, (d-8)/d
// for uncorrelated pairs.
double minima(DipFamily family, int d);

int minimum_dimension(const Topology2D& topology);
int minimum_dimension(const Topology3D& topology);

}  // namespace ddcorr
