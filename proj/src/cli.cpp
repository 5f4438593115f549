#include "ddcorr/cli.hpp"

#include "ddcorr/analytic.hpp"
#include "ddcorr/planner.hpp"
#include "ddcorr/scan.hpp"
#include "ddcorr/scenario.hpp"
#include "ddcorr/sequence.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace ddcorr::cli {

namespace {

// Problems with the inputs themselves (as opposed to flag syntax) exit with 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt6(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

Scenario load(const std::string& path) {
  try {
    return parse_scenario(path);
  } catch (const ScenarioError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Engine parse_engine(const std::string& name) {
  if (name == "exact") return Engine::exact;
  if (name == "analytic") return Engine::analytic;
  return Engine::both;
}

// "1.25:20,1.786:20" -> blocks
std::vector<Block> parse_blocks(const std::string& text) {
  std::vector<Block> blocks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--blocks", "expected tau_us:n_pulses");
    try {
      std::size_t used = 0;
      const double tau = std::stod(item.substr(0, colon), &used);
      const int n = std::stoi(item.substr(colon + 1));
      blocks.push_back({tau, n});
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--blocks", "cannot parse '" + item + "'");
    }
  }
  return blocks;
}

int workers_from_env(std::string_view text) {
  int value = -1;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || value < 0) {
    throw CLI::ValidationError("DDCORR_WORKERS", "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return value;
}

struct ScanOptions {
  std::string scenario;
  std::string out;
  std::string heatmap;
  std::string engine;
  int workers = 0;
};

int run_scan_command(const ScanOptions& o, std::ostream& out) {
  Scenario s = load(o.scenario);
  if (!s.grid) throw ValidationError(o.scenario + ": scenario has no 'scan' section");
  GridSpec grid = *s.grid;
  if (!o.engine.empty()) grid.engine = parse_engine(o.engine);
  if (grid.engine != Engine::exact && !s.analytic_model) {
    throw ValidationError(o.scenario + ": engine '" + o.engine + "' needs an 'analytic' section");
  }
  ScanTable table;
  try {
    table = run_scan(s.system, s.sequence, grid, s.analytic_model, o.workers);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  if (o.out.empty()) {
    out << csv_string(table);
  } else {
    write_csv(table, o.out);
  }
  if (!o.heatmap.empty()) {
    if (table.shape.size() != 2) throw ValidationError("--heatmap needs a 2-axis scan");
    write_heatmap(table, o.heatmap);
  }
  if (!o.out.empty()) {
    const auto it = std::min_element(table.records.begin(), table.records.end(),
                                     [](const auto& a, const auto& b) { return a.re_L < b.re_L; });
    out << "points " << table.records.size() << ", min Re L " << fmt6(it->re_L) << " at (";
    for (std::size_t k = 0; k < it->coords.size(); ++k) {
      out << (k ? ", " : "") << table.axis_names[k] << " = " << fmt6(it->coords[k]);
    }
    out << ")\n";
  }
  return kExitOk;
}

struct AnalyticOptions {
  std::string topology;
  std::vector<int> dims;
  std::vector<double> deltas;
  std::vector<double> pulses;
};

int run_analytic_command(const AnalyticOptions& o, std::ostream& out) {
  double value = 0.0;
  try {
    const DipTopology topo = parse_topology(o.topology, o.dims);
    const std::size_t blocks = block_count(topo);
    if (o.deltas.size() != blocks || o.pulses.size() != blocks) {
      throw std::invalid_argument("topology '" + o.topology + "' needs " + std::to_string(blocks) +
                                  " values for --delta and --n");
    }
    DipParams p{o.dims.empty() ? 0 : o.dims.front(), o.deltas, o.pulses};
    const bool independent = o.topology.find("independent") != std::string::npos;
    if (!independent && o.dims.size() != 1) {
      throw std::invalid_argument("--d takes one dimension for this topology");
    }
    value = dip(topo, p);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  out << fmt6(value) << '\n';
  return kExitOk;
}

struct PlanOptions {
  std::string scenario;
  std::optional<double> fidelity;
  std::vector<double> alphas;
  std::optional<double> snr;
  std::vector<double> delta_omega_khz;
  std::vector<double> deltas;
  std::optional<double> t_ir_us;
  std::optional<int> pulse_step;
  bool json = false;
};

int run_plan_command(const PlanOptions& o, std::ostream& out) {
  PlanInputs in;
  // fidelity < 0 means "derive from alphas"; both unset is a usage error
  double fidelity = -1.0;
  std::vector<double> alphas;
  if (!o.scenario.empty()) {
    const Scenario s = load(o.scenario);
    if (s.planner) {
      const PlannerDecl& decl = *s.planner;
      if (decl.fidelity.has_value()) fidelity = decl.fidelity.value();
      if (decl.alphas.has_value()) alphas.assign(decl.alphas->begin(), decl.alphas->end());
      in.snr = decl.snr;
      in.t_ir_us = decl.t_ir_us;
      in.pulse_step = decl.pulse_step;
    }
    if (s.analytic_transitions.size() >= 2) {
      for (int i = 0; i < 2; ++i) {
        in.delta_omega[i] = s.analytic_transitions[static_cast<std::size_t>(i)].beta_mag;
        in.deltas[i] = s.analytic_transitions[static_cast<std::size_t>(i)].delta;
      }
    }
  }
  if (in.snr <= 0.0) in.snr = 10.0;
  if (o.fidelity) {
    fidelity = *o.fidelity;
    alphas.clear();
  }
  if (!o.alphas.empty()) {
    if (o.alphas.size() != 2) throw CLI::ValidationError("--alpha", "expected alpha0,alpha1");
    alphas = o.alphas;
    fidelity = -1.0;
  }
  if (o.snr) in.snr = *o.snr;
  if (o.t_ir_us) in.t_ir_us = *o.t_ir_us;
  if (o.pulse_step) in.pulse_step = *o.pulse_step;
  if (!o.delta_omega_khz.empty()) {
    if (o.delta_omega_khz.size() != 2) throw CLI::ValidationError("--delta-omega-kHz", "expected two values");
    for (int i = 0; i < 2; ++i) in.delta_omega[i] = khz_to_angular(o.delta_omega_khz[static_cast<std::size_t>(i)]);
  }
  if (!o.deltas.empty()) {
    if (o.deltas.size() != 2) throw CLI::ValidationError("--delta", "expected two values");
    in.deltas[0] = o.deltas[0];
    in.deltas[1] = o.deltas[1];
  }
  if (fidelity < 0.0 && alphas.empty()) {
    throw CLI::RequiredError("give --F or --alpha (or a scenario with a planner section)");
  }
  if (!(in.delta_omega[0] > 0.0)) {
    throw CLI::RequiredError("give --delta-omega-kHz (or a scenario with two analytic transitions)");
  }

  PlanReport report;
  try {
    in.fidelity = alphas.empty() ? fidelity : readout_fidelity(alphas[0], alphas[1]);
    report = make_plan(in);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (o.json) {
    out << plan_json(report) << '\n';
  } else {
    out << plan_text(report);
  }
  return kExitOk;
}

struct FilterOptions {
  std::string scenario;
  std::string blocks;
  double f_min_mhz = 0.0;
  double f_max_mhz = 0.0;
  int steps = 0;
  std::string out;
};

int run_filter_command(const FilterOptions& o, std::ostream& out) {
  if (o.scenario.empty() == o.blocks.empty()) {
    throw CLI::ValidationError("filter", "give either a scenario or --blocks");
  }
  if (o.steps < 1) throw CLI::ValidationError("--steps", "must be >= 1");
  std::optional<SequenceSpec> spec;
  try {
    spec = o.scenario.empty() ? SequenceSpec(parse_blocks(o.blocks)) : load(o.scenario).sequence;
    if (!(o.f_min_mhz > 0.0) || !(o.f_max_mhz >= o.f_min_mhz)) {
      throw std::invalid_argument("need 0 < f-min <= f-max");
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  const PulseTimeline timeline = build_timeline(*spec);

  std::ostringstream csv;
  csv << "# ddcorr-filter v1\n" << "f_MHz,omega_rad_per_us,F,xi\n" << std::setprecision(17);
  for (int i = 0; i < o.steps; ++i) {
    const double f = o.steps == 1 ? o.f_min_mhz
                                  : o.f_min_mhz + (o.f_max_mhz - o.f_min_mhz) * i / (o.steps - 1);
    const double omega = mhz_to_angular(f);
    const FilterResult r = filter_numeric(timeline, omega);
    csv << f << ',' << omega << ',' << r.magnitude << ',' << r.phase << '\n';
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + o.out + "'");
    file << csv.str();
  }
  return kExitOk;
}

int run_lint_command(const std::string& path, std::ostream& out) {
  const Scenario s = load(path);
  bool failed = false;
  std::size_t count = 0;
  for (const auto& cluster : s.system.clusters()) {
    for (const auto& d : validate_weak_coupling(cluster)) {
      const bool error = d.severity == Severity::error;
      failed = failed || error;
      out << (error ? "error: " : "warning: ") << cluster.label() << ": " << d.message << '\n';
      ++count;
    }
  }
  for (const auto& w : lint_resonance_overlap(s.system.clusters(), s.sequence)) {
    out << "warning: " << w << '\n';
    ++count;
  }
  if (count == 0) out << "ok\n";
  return failed ? kExitScenario : kExitOk;
}

int run_validate_command(const std::string& path, std::ostream& out) {
  const Scenario s = load(path);
  out << "ok: " << s.system.size() << " cluster(s), " << s.sequence.size() << " block(s)";
  if (s.grid) {
    std::size_t points = 1;
    for (const auto& a : s.grid->axes) points *= axis_values(a).size();
    out << ", " << points << " scan point(s)";
  }
  if (s.analytic_model) out << ", analytic " << topology_name(s.analytic_model->topology);
  out << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ddcorr: dynamical-decoupling correlation spectroscopy"};
  app.name("ddcorr");
  app.require_subcommand(1);

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Run a grid scan from a scenario file");
  scan_cmd->add_option("scenario", scan.scenario, "Scenario JSON")->required();
  scan_cmd->add_option("--out", scan.out, "CSV output path (default: stdout)");
  scan_cmd->add_option("--heatmap", scan.heatmap, "16-bit PGM of Re L for 2-axis scans");
  scan_cmd->add_option("--engine", scan.engine, "Override the scenario engine")
      ->check(CLI::IsMember({"exact", "analytic", "both"}));
  auto* workers_opt = scan_cmd->add_option("--workers", scan.workers, "Worker threads (0 = all; default $DDCORR_WORKERS)")
                          ->check(CLI::NonNegativeNumber);

  AnalyticOptions analytic;
  auto* analytic_cmd = app.add_subcommand("analytic", "Evaluate one closed-form dip");
  analytic_cmd->add_option("--topology", analytic.topology, "e.g. 1d, 2d-correlated, 3d-ring")->required();
  analytic_cmd->add_option("--d", analytic.dims, "Hilbert dimension (one per cluster for *-independent)")
      ->required()
      ->delimiter(',');
  analytic_cmd->add_option("--delta", analytic.deltas, "Contrast per block")->required()->delimiter(',');
  analytic_cmd->add_option("--n", analytic.pulses, "Pulse count per block")->required()->delimiter(',');

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Measurement-time budget");
  plan_cmd->add_option("scenario", plan.scenario, "Scenario JSON with planner inputs");
  plan_cmd->add_option("--F", plan.fidelity, "Single-shot readout fidelity");
  plan_cmd->add_option("--alpha", plan.alphas, "Photon means alpha0,alpha1")->delimiter(',');
  plan_cmd->add_option("--snr", plan.snr, "Target SNR (default 10)");
  plan_cmd->add_option("--delta-omega-kHz", plan.delta_omega_khz, "delta_i * f_i in kHz, two values")
      ->delimiter(',');
  plan_cmd->add_option("--delta", plan.deltas, "Contrasts delta1,delta2 for the sweep estimate")
      ->delimiter(',');
  plan_cmd->add_option("--t-ir-us", plan.t_ir_us, "Initialization + readout time (default 1 us)");
  plan_cmd->add_option("--pulse-step", plan.pulse_step, "Pulse-count step of the sweep (default 2)");
  plan_cmd->add_flag("--json", plan.json, "Emit JSON");

  FilterOptions filter;
  auto* filter_cmd = app.add_subcommand("filter", "Filter profile F(omega) of a sequence");
  filter_cmd->add_option("scenario", filter.scenario, "Scenario JSON (its sequence is used)");
  filter_cmd->add_option("--blocks", filter.blocks, "Explicit blocks tau_us:n,tau_us:n");
  filter_cmd->add_option("--f-min-MHz", filter.f_min_mhz, "Lowest frequency")->required();
  filter_cmd->add_option("--f-max-MHz", filter.f_max_mhz, "Highest frequency")->required();
  filter_cmd->add_option("--steps", filter.steps, "Number of frequencies")->default_val(1000);
  filter_cmd->add_option("--out", filter.out, "CSV output path (default: stdout)");

  std::string lint_path;
  auto* lint_cmd = app.add_subcommand("lint", "Coupling-strength and resonance-overlap checks");
  lint_cmd->add_option("scenario", lint_path, "Scenario JSON")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario");
  validate_cmd->add_option("scenario", validate_path, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
    if (*scan_cmd && workers_opt->count() == 0) {
      if (const char* env = std::getenv("DDCORR_WORKERS")) scan.workers = workers_from_env(env);
    }
    if (*scan_cmd) return run_scan_command(scan, out);
    if (*analytic_cmd) return run_analytic_command(analytic, out);
    if (*plan_cmd) return run_plan_command(plan, out);
    if (*filter_cmd) return run_filter_command(filter, out);
    if (*lint_cmd) return run_lint_command(lint_path, out);
    if (*validate_cmd) return run_validate_command(validate_path, out);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitScenario;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitScenario;
  }
  err << app.help();
  return kExitUsage;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return dispatch(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace ddcorr::cli
