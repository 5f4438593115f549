// Acceptance suite. Prints one PASS/FAIL line per criterion.
//   acceptance              run every criterion
//   acceptance --only AC3   run one criterion

#include "ddcorr/analytic.hpp"
#include "ddcorr/exact.hpp"
#include "ddcorr/planner.hpp"
#include "ddcorr/scan.hpp"
#include "ddcorr/scenario.hpp"
#include "ddcorr/sequence.hpp"
#include "ddcorr/spin_model.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace ddcorr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream out;
  out << std::setprecision(digits) << v;
  return out.str();
}

Scenario load(const char* name) {
  return parse_scenario(std::filesystem::path(DDCORR_SCENARIO_DIR) / name);
}

const ScanRecord& minimum(const ScanTable& table) {
  return *std::min_element(table.records.begin(), table.records.end(),
                           [](const ScanRecord& a, const ScanRecord& b) { return a.re_L < b.re_L; });
}

bool within_rel(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  const auto target = spin_one_preset(0.20, 0.14, 5.0 * std::sqrt(2.0));
  const double tau = resonant_tau(transition(target, 2, 1).omega, 1);
  GridSpec grid;
  grid.axes.push_back(PulseAxis{0, 0, 126, 2});
  const auto start = Clock::now();
  const auto table = run_scan(SystemModel({target}), SequenceSpec({{tau, 0}}), grid);
  const double elapsed = seconds_since(start);
  const auto& best = minimum(table);
  const double n = best.coords[0];
  const bool ok = std::abs(best.re_L + 1.0 / 3.0) <= 0.08 && std::abs(n - 63.0) <= 4.0 && elapsed < 1.0;
  return {ok, "min Re L = " + fmt(best.re_L) + " at N = " + fmt(n) + " (target -1/3 +/- 0.08 at 63 +/- 4), " +
                  fmt(elapsed, 3) + " s (< 1 s)"};
}

struct Panel {
  const char* file;
  const char* name;
  double expected_min;
  int d;
  Correlation expected;
};

const std::vector<Panel>& panels() {
  static const std::vector<Panel> p{
      {"unit_cell_ladder_correlated.json", "correlated ladder", 0.0, 4, Correlation::correlated},
      {"unit_cell_ladder_uncorrelated.json", "uncorrelated ladder", -1.0, 4, Correlation::uncorrelated},
      {"unit_cell_type_v.json", "type-V", -1.0 / 3.0, 3, Correlation::correlated},
  };
  return p;
}

Outcome ac2() {
  bool ok = true;
  std::string detail;
  const auto start = Clock::now();
  for (const auto& panel : panels()) {
    const auto s = load(panel.file);
    GridSpec grid = *s.grid;
    grid.engine = Engine::exact;
    const auto table = run_scan(s.system, s.sequence, grid);
    const double m = minimum(table).re_L;
    const auto c = classify_correlation(m, panel.d);
    const bool good = std::abs(m - panel.expected_min) <= 0.08 && c == panel.expected;
    ok = ok && good;
    detail += std::string(panel.name) + " min " + fmt(m) + " -> " + to_string(c) + "; ";
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 60.0;
  return {ok, detail + fmt(elapsed, 3) + " s (< 60 s)"};
}

struct ErrorStats {
  double rms = 0.0;
  double max = 0.0;
};

ErrorStats exact_vs_closed(const Scenario& s, double coupling_scale, int extent_scale) {
  std::vector<TargetCluster> clusters;
  for (const auto& c : s.system.clusters()) {
    clusters.emplace_back(c.label(), c.energies(), c.coupling() * coupling_scale);
  }
  GridSpec grid = *s.grid;
  grid.engine = Engine::both;
  for (auto& axis : grid.axes) {
    auto& p = std::get<PulseAxis>(axis);
    p.end = p.start + (p.end - p.start) * extent_scale;
  }
  AnalyticModel model = *s.analytic_model;
  for (auto& delta : model.deltas) delta *= coupling_scale;
  const auto table = run_scan(SystemModel(clusters), s.sequence, grid, model);
  ErrorStats e;
  for (const auto& r : table.records) {
    const double err = std::abs(r.re_L - *r.analytic_L);
    e.rms += err * err;
    e.max = std::max(e.max, err);
  }
  e.rms = std::sqrt(e.rms / static_cast<double>(table.records.size()));
  return e;
}

Outcome ac3() {
  bool ok = true;
  std::string detail;
  for (const auto& panel : panels()) {
    const auto s = load(panel.file);
    const auto full = exact_vs_closed(s, 1.0, 1);
    const auto half = exact_vs_closed(s, 0.5, 2);
    const double rms_gain = full.rms / half.rms;
    const double max_gain = full.max / half.max;
    const bool good = full.rms < 0.05 && rms_gain >= 2.0 && max_gain >= 2.0;
    ok = ok && good;
    detail += std::string(panel.name) + " rms " + fmt(full.rms) + " -> " + fmt(half.rms) + " (x" + fmt(rms_gain) +
              "), max " + fmt(full.max) + " -> " + fmt(half.max) + " (x" + fmt(max_gain) + "); ";
  }
  return {ok, detail + "need rms < 0.05 and both gains >= 2"};
}

struct TraceCase {
  std::string name;
  TargetCluster cluster;
  std::vector<LevelPair> transitions;
  DipTopology topology;
};

std::vector<TraceCase> trace_cases() {
  const auto khz = [](std::vector<double> v) {
    std::vector<std::optional<double>> out(v.begin(), v.end());
    for (auto& x : out) {
      if (*x <= 0.0) x.reset();
    }
    return out;
  };
  std::vector<TraceCase> cases;
  const auto v = spin_one_preset(0.20, 0.14, 5.0 * std::sqrt(2.0));
  cases.push_back({"2d-correlated type-V", v, {{2, 1}, {1, 0}}, Topology2D{topology::Correlated{}}});
  const std::vector<double> f3{0.20, 0.14, 0.30};
  cases.push_back({"2d-correlated ladder", ladder_preset(f3, khz({5, 5.04, 0})), {{1, 0}, {2, 1}},
                   Topology2D{topology::Correlated{}}});
  const std::vector<double> fu{0.20, 0.30, 0.14};
  cases.push_back({"2d-uncorrelated ladder", ladder_preset(fu, khz({5, 0, 5.04})), {{1, 0}, {3, 2}},
                   Topology2D{topology::Uncorrelated{}}});
  const auto ring = ring_preset(0.20, 0.14, {{{5.0, 0.3}, {5.04, -1.1}, {4.98, 0.7}}});
  cases.push_back({"3d-ring", ring, {{2, 0}, {1, 0}, {2, 1}}, Topology3D{topology::Ring{}}});
  const std::vector<double> spokes{0.20, 0.14, 0.31};
  const std::vector<PhasedCoupling> sc{{5.0, 0.2}, {5.04, 0.0}, {4.98, -0.5}};
  cases.push_back({"3d-star", star_preset(spokes, sc), {{1, 0}, {2, 0}, {3, 0}}, Topology3D{topology::Star{}}});
  const std::vector<double> f4{0.20, 0.14, 0.31};
  cases.push_back({"3d-linked-ladder", ladder_preset(f4, khz({5, 5.04, 4.98})), {{1, 0}, {2, 1}, {3, 2}},
                   Topology3D{topology::LinkedLadder{}}});
  const std::vector<double> f5{0.20, 0.33, 0.14, 0.26};
  cases.push_back({"3d-unlinked-ladder", ladder_preset(f5, khz({5, 0, 5.04, 4.98})), {{1, 0}, {3, 2}, {4, 3}},
                   Topology3D{topology::UnlinkedLadder{}}});
  const std::vector<double> f6{0.20, 0.33, 0.14, 0.27, 0.26};
  cases.push_back({"3d-uncorrelated ladder", ladder_preset(f6, khz({5, 0, 5.04, 0, 4.98})),
                   {{1, 0}, {3, 2}, {5, 4}}, Topology3D{topology::Uncorrelated3{}}});
  return cases;
}

double trace_value(const TraceCase& c, const std::vector<double>& n) {
  if (c.transitions.size() == 2) {
    return dip_trace_2d(c.cluster, c.transitions[0], c.transitions[1], n[0], n[1]).real();
  }
  const std::array<LevelPair, 3> t{c.transitions[0], c.transitions[1], c.transitions[2]};
  return dip_trace_3d(c.cluster, t, n[0], n[1], n[2]).real();
}

Outcome ac4() {
  double worst = 0.0;
  double worst_reduction = 0.0;
  std::string worst_name;
  for (const auto& c : trace_cases()) {
    DipParams p{static_cast<int>(c.cluster.dim()), {}, {}};
    for (const auto& [m, n] : c.transitions) p.deltas.push_back(transition(c.cluster, m, n).delta);
    const bool three = c.transitions.size() == 3;
    const int k_steps = three ? 5 : 1;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        for (int k = 0; k < k_steps; ++k) {
          // cover one full period of each rotation angle
          std::vector<double> n{i * (kPi / p.deltas[0]) / 19.0, j * (kPi / p.deltas[1]) / 19.0};
          if (three) n.push_back(k * (kPi / p.deltas[2]) / 4.0);
          p.pulses = n;
          const double err = std::abs(trace_value(c, n) - dip(c.topology, p));
          if (err > worst) {
            worst = err;
            worst_name = c.name;
          }
        }
      }
    }
    if (!three) continue;
    // N2 = 0 and N2 = N3 = 0 reductions
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double n1 = i * (kPi / p.deltas[0]) / 19.0;
        const double n3 = j * (kPi / p.deltas[2]) / 19.0;
        p.pulses = {n1, 0.0, n3};
        const double reduced2 = trace_value(c, {n1, 0.0, n3});
        worst_reduction = std::max(worst_reduction, std::abs(reduced2 - dip(c.topology, p)));
        p.pulses = {n1, 0.0, 0.0};
        const double reduced1 = trace_value(c, {n1, 0.0, 0.0});
        worst_reduction = std::max(worst_reduction, std::abs(reduced1 - dip(c.topology, p)));
        worst_reduction = std::max(worst_reduction, std::abs(reduced1 - dip_1d(p.d, p.deltas[0], n1)));
      }
    }
  }
  const bool ok = worst <= 1e-10 && worst_reduction <= 1e-10;
  return {ok, "max |trace - closed form| = " + fmt(worst, 3) + (worst_name.empty() ? "" : " (" + worst_name + ")") +
                  ", reductions " + fmt(worst_reduction, 3) + " (tol 1e-10)"};
}

Outcome ac5() {
  double closed = 0.0;
  for (int n : {1, 2, 3, 8, 19, 20, 63, 64}) {
    const double tau = 1.25;
    const auto tl = build_timeline(SequenceSpec({{tau, n}}));
    for (int i = 1; i <= 8000; ++i) {
      const double omega = 4.0 * kPi * i / 8000.0 / tau;
      closed = std::max(closed, std::abs(filter_cpmg_closed(n, tau, omega) - filter_numeric(tl, omega).magnitude));
    }
  }
  double resonance = 0.0;
  for (int n = 1; n <= 128; ++n) {
    const double omega = 2.0 * kPi * 0.2;
    const double tau = resonant_tau(omega, 1);
    const auto tl = build_timeline(SequenceSpec({{tau, n}}));
    resonance = std::max(resonance, std::abs(filter_numeric(tl, omega).magnitude - 2.0 * n));
    resonance = std::max(resonance, std::abs(filter_cpmg_closed(n, tau, omega) - 2.0 * n));
  }
  oracle::Gen gen(505);
  double multi = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto blocks = gen.blocks(2, 60);
    const SequenceSpec spec({{blocks[0].first, blocks[0].second}, {blocks[1].first, blocks[1].second}});
    const double omega = gen.uniform(0.01, 8.0);
    multi = std::max(multi, std::abs(filter_multiblock(spec, omega).magnitude -
                                     filter_numeric(build_timeline(spec), omega).magnitude));
  }
  const bool ok = closed <= 1e-9 && resonance <= 1e-9 && multi <= 1e-10;
  return {ok, "closed vs numeric " + fmt(closed, 3) + " (1e-9), resonance |F - 2N| " + fmt(resonance, 3) +
                  " (1e-9), multiblock vs numeric " + fmt(multi, 3) + " (1e-10)"};
}

Outcome ac6() {
  oracle::Gen gen(606);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = gen.cluster(gen.integer(2, 3), 0.1);
    const auto b = gen.cluster(gen.integer(2, 3), 0.1);
    const auto blocks = gen.blocks(2, 20);
    double total = 0.0;
    const auto flips = oracle::flips(blocks, total);
    const auto [h0, beta] = oracle::joint(a, b);
    const Complex joint = oracle::coherence(h0, beta, flips, total);
    const SequenceSpec spec({{blocks[0].first, blocks[0].second}, {blocks[1].first, blocks[1].second}});
    const Complex product = coherence_system(SystemModel({a, b}), build_timeline(spec));
    worst = std::max(worst, std::abs(product - joint));
  }
  return {worst <= 1e-9, "max |product - joint| = " + fmt(worst, 3) + " over 60 systems (tol 1e-9)"};
}

Outcome ac7() {
  const double beta = khz_to_angular(5.0);
  PlanInputs in;
  in.snr = 10.0;
  in.delta_omega[0] = beta;
  in.delta_omega[1] = beta;
  in.deltas[0] = beta / mhz_to_angular(0.20);
  in.deltas[1] = beta / mhz_to_angular(0.14);
  in.t_ir_us = 1.0;
  in.pulse_step = 2;

  in.fidelity = 0.03;
  const auto low = make_plan(in);
  in.fidelity = 0.3;
  const auto high = make_plan(in);

  const bool ok = within_rel(static_cast<double>(low.shots), 1.1e5, 0.05) &&
                  within_rel(low.dip_time_us, 310.0, 0.02) && within_rel(low.point_time_s, 34.0, 0.05) &&
                  within_rel(low.sweep_time_s, 9.2e4, 0.10) && within_rel(high.point_time_s, 0.34, 0.05) &&
                  within_rel(high.sweep_time_s, 920.0, 0.10);
  return {ok, "K = " + std::to_string(low.shots) + ", t_dip = " + fmt(low.dip_time_us) + " us, T = " +
                  fmt(low.point_time_s) + " s, sweep = " + fmt(low.sweep_time_s, 5) + " s (" +
                  std::to_string(low.sweep_points) + " points); F = 0.3: T = " + fmt(high.point_time_s) +
                  " s, sweep = " + fmt(high.sweep_time_s) + " s"};
}

Outcome ac8() {
  const auto s = load("tau_map_2d.json");
  const auto table = run_scan(s.system, s.sequence, *s.grid);
  const auto values = axis_values(s.grid->axes[0]);
  const double step = values[1] - values[0];
  const double tol = step * (1.0 + 1e-9);
  const auto regions = find_dip_regions(table, 0.25);
  const std::vector<std::array<double, 2>> centers{{1.25, 1.25}, {1.25, 1.786}, {1.786, 1.25}, {1.786, 1.786}};
  std::vector<int> hits(centers.size(), 0);
  bool matched = true;
  std::string where;
  for (const auto& r : regions) {
    int found = 0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      if (std::abs(r.coords[0] - centers[i][0]) <= tol && std::abs(r.coords[1] - centers[i][1]) <= tol) {
        ++hits[i];
        ++found;
      }
    }
    matched = matched && found == 1;
    where += " (" + fmt(r.coords[0]) + ", " + fmt(r.coords[1]) + ")";
  }
  const bool ok = regions.size() == 4 && matched && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
  return {ok, std::to_string(regions.size()) + " regions below 0.25 at" + where + ", step " + fmt(step)};
}

Outcome ac9() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"tau_scan_1d.json", "unit_cell_type_v.json"}) {
    const auto s = load(name);
    const auto one = csv_string(run_scan(s.system, s.sequence, *s.grid, s.analytic_model, 1));
    const auto eight = csv_string(run_scan(s.system, s.sequence, *s.grid, s.analytic_model, 8));
    const bool same = one == eight;
    ok = ok && same;
    detail += std::string(name) + (same ? " identical" : " differs") + " (" + std::to_string(one.size()) + " bytes); ";
  }
  return {ok, detail + "workers 1 vs 8"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9},
  };
  std::string only;
  if (argc == 3 && std::string(argv[1]) == "--only") {
    only = argv[2];
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--only ACn]\n";
    return 2;
  }
  bool all = true;
  bool ran = false;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && id != only) continue;
    ran = true;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ": " << o.detail << std::endl;
  }
  if (!ran) {
    std::cerr << "unknown criterion " << only << '\n';
    return 2;
  }
  return all ? 0 : 1;
}
