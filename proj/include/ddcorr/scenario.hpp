#pragma once

// Scenario files: JSON documents describing target clusters, a DD sequence,
// an optional scan grid, an optional closed-form model and planner inputs.
// Every dimensional key carries its unit as a suffix (_MHz, _kHz, _us, _rad);
// cyclic frequencies are converted to rad/us once, at load time.

#include "ddcorr/scan.hpp"
#include "ddcorr/sequence.hpp"
#include "ddcorr/spin_model.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ddcorr {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, const std::string& message, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

struct SpinOneSource {
  std::string label = "spin-1";
  double f_a_mhz = 0.0;
  double f_b_mhz = 0.0;
  double lambda_khz = 0.0;
};

struct LadderSource {
  std::string label = "ladder";
  std::vector<double> rung_freqs_mhz;
  std::vector<std::optional<double>> rung_couplings_khz;
};

struct RingSource {
  std::string label = "ring";
  double f_1_mhz = 0.0;
  double f_2_mhz = 0.0;
  std::array<PhasedCoupling, 3> couplings{};
};

struct StarSource {
  std::string label = "star";
  std::vector<double> spoke_freqs_mhz;
  std::vector<PhasedCoupling> spoke_couplings;
};

struct ExplicitCoupling {
  std::size_t m = 0;
  std::size_t n = 0;
  double amplitude_khz = 0.0;
  double phase = 0.0;
};

struct ExplicitSource {
  std::string label = "cluster";
  std::vector<double> energies_mhz;
  std::vector<ExplicitCoupling> couplings;
};

using ClusterSource =
    std::variant<SpinOneSource, LadderSource, RingSource, StarSource, ExplicitSource>;

TargetCluster build_cluster(const ClusterSource& source);

// A block given by its transition: tau = resonant_tau(omega_mn, order).
struct ResonantBlock {
  std::size_t cluster = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  int order = 1;
  int n_pulses = 0;
};

using BlockSource = std::variant<Block, ResonantBlock>;

struct TransitionRef {
  std::size_t cluster = 0;
  std::size_t m = 0;
  std::size_t n = 0;
};

struct AnalyticDecl {
  std::string topology;
  std::vector<TransitionRef> transitions;
};

struct PlannerDecl {
  std::optional<double> fidelity;
  std::optional<std::array<double, 2>> alphas;
  double snr = 10.0;
  double t_ir_us = 1.0;
  int pulse_step = 2;
};

struct Scenario {
  std::vector<ClusterSource> cluster_sources;
  std::vector<BlockSource> block_sources;
  std::optional<GridSpec> grid;
  std::optional<AnalyticDecl> analytic;
  std::optional<PlannerDecl> planner;

  // resolved at load
  SystemModel system;
  SequenceSpec sequence;
  std::optional<AnalyticModel> analytic_model;
  std::vector<TransitionSpec> analytic_transitions;
};

Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(std::string_view text);
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

}  // namespace ddcorr
