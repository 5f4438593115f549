#include "ddcorr/scenario.hpp"

#include "ddcorr/planner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace ddcorr {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string describe(int line, const std::string& field, const std::string& message) {
  std::ostringstream out;
  if (line > 0) out << "line " << line << ": ";
  if (!field.empty()) out << field << ": ";
  out << message;
  return out.str();
}

// Best-effort source line of a key, for diagnostics.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {}

  int line_of_key(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    return pos == std::string_view::npos ? 0 : line_of_offset(pos);
  }

  int line_of_offset(std::size_t offset) const {
    offset = std::min(offset, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  }

 private:
  std::string_view text_;
};

// Typed accessor over one JSON object. Tracks which keys were read so that
// unknown keys, and keys missing their unit suffix, are reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, const LineIndex& lines)
      : j_(j), path_(std::move(path)), lines_(lines) {
    if (!j_.is_object()) throw ScenarioError(path_, "expected an object");
  }

  const LineIndex& lines() const { return lines_; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ScenarioError(child(key), message, lines_.line_of_key(key));
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string child(const std::string& key, std::size_t i) const {
    return child(key) + "[" + std::to_string(i) + "]";
  }

  // Marks key as known; true if present.
  bool take(const std::string& key) {
    known_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) {
    if (!take(key)) {
      for (const auto& [present, value] : j_.items()) {
        if (key.size() > present.size() && key.compare(0, present.size(), present) == 0 &&
            key[present.size()] == '_') {
          fail(present, "missing unit suffix (expected '" + key + "')");
        }
      }
      fail(key, "missing required field");
    }
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
  }

  int integer_or(const std::string& key, int fallback) { return take(key) ? integer(key) : fallback; }
  double number_or(const std::string& key, double fallback) {
    return take(key) ? number(key) : fallback;
  }

  std::size_t index(const std::string& key) {
    const int v = integer(key);
    if (v < 0) fail(key, "expected a non-negative index");
    return static_cast<std::size_t>(v);
  }

  std::string string_or(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<std::optional<double>> optional_numbers(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array of numbers or nulls");
    std::vector<std::optional<double>> out;
    for (const auto& x : v) {
      if (x.is_null()) {
        out.emplace_back();
      } else if (x.is_number()) {
        out.emplace_back(x.get<double>());
      } else {
        fail(key, "expected an array of numbers or nulls");
      }
    }
    return out;
  }

  const json& array(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (known_.count(key)) continue;
      for (const auto& known : known_) {
        if (known.size() > key.size() && known.compare(0, key.size(), key) == 0 &&
            known[key.size()] == '_') {
          fail(key, "missing unit suffix (expected '" + known + "')");
        }
      }
      fail(key, "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  const LineIndex& lines_;
  std::set<std::string> known_;
};

std::vector<double> phases_or_zero(ObjectReader& r, std::size_t count) {
  if (!r.take("phases_rad")) return std::vector<double>(count, 0.0);
  auto p = r.numbers("phases_rad");
  if (p.size() != count) r.fail("phases_rad", "expected " + std::to_string(count) + " phases");
  return p;
}

ClusterSource read_cluster(ObjectReader& r) {
  const std::string preset = r.string_or("preset", "");
  if (preset == "spin_one") {
    SpinOneSource s;
    s.label = r.string_or("label", s.label);
    s.f_a_mhz = r.number("f_a_MHz");
    s.f_b_mhz = r.number("f_b_MHz");
    s.lambda_khz = r.number("lambda_kHz");
    return s;
  }
  if (preset == "ladder") {
    LadderSource s;
    s.label = r.string_or("label", s.label);
    s.rung_freqs_mhz = r.numbers("rung_freqs_MHz");
    s.rung_couplings_khz = r.optional_numbers("rung_couplings_kHz");
    return s;
  }
  if (preset == "ring") {
    RingSource s;
    s.label = r.string_or("label", s.label);
    s.f_1_mhz = r.number("f_1_MHz");
    s.f_2_mhz = r.number("f_2_MHz");
    const auto amps = r.numbers("couplings_kHz");
    if (amps.size() != 3) r.fail("couplings_kHz", "expected exactly 3 values");
    const auto phases = phases_or_zero(r, 3);
    for (std::size_t i = 0; i < 3; ++i) s.couplings[i] = {amps[i], phases[i]};
    return s;
  }
  if (preset == "star") {
    StarSource s;
    s.label = r.string_or("label", s.label);
    s.spoke_freqs_mhz = r.numbers("spoke_freqs_MHz");
    const auto amps = r.numbers("spoke_couplings_kHz");
    const auto phases = phases_or_zero(r, amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) s.spoke_couplings.push_back({amps[i], phases[i]});
    return s;
  }
  if (!preset.empty()) r.fail("preset", "unknown preset '" + preset + "'");

  ExplicitSource s;
  s.label = r.string_or("label", s.label);
  s.energies_mhz = r.numbers("energies_MHz");
  if (r.take("couplings")) {
    const auto& arr = r.array("couplings");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      ObjectReader c(arr[i], r.child("couplings", i), r.lines());
      ExplicitCoupling ec;
      ec.m = c.index("m");
      ec.n = c.index("n");
      ec.amplitude_khz = c.number("amplitude_kHz");
      ec.phase = c.number_or("phase_rad", 0.0);
      c.finish();
      s.couplings.push_back(ec);
    }
  }
  return s;
}

BlockSource read_block(ObjectReader& r) {
  if (r.take("tau_us")) {
    Block b;
    b.tau_us = r.number("tau_us");
    b.n_pulses = r.integer("n_pulses");
    return b;
  }
  if (r.take("cluster")) {
    ResonantBlock b;
    b.cluster = r.index("cluster");
    b.m = r.index("m");
    b.n = r.index("n");
    b.order = r.integer_or("order", 1);
    b.n_pulses = r.integer("n_pulses");
    return b;
  }
  r.raw("tau_us");  // reports the missing field (or a unit-less "tau")
  return Block{};
}

Axis read_axis(ObjectReader& r) {
  const std::string kind = r.string_or("kind", "");
  if (kind == "tau") {
    TauAxis a;
    a.block = r.index("block");
    a.min_us = r.number("min_us");
    a.max_us = r.number("max_us");
    a.steps = r.integer("steps");
    return a;
  }
  if (kind == "pulses") {
    PulseAxis a;
    a.block = r.index("block");
    a.start = r.integer("start");
    a.end = r.integer("end");
    a.step = r.integer_or("step", 2);
    return a;
  }
  r.fail("kind", "expected \"tau\" or \"pulses\"");
}

Engine parse_engine(const std::string& name, ObjectReader& r) {
  if (name == "exact") return Engine::exact;
  if (name == "analytic") return Engine::analytic;
  if (name == "both") return Engine::both;
  r.fail("engine", "expected exact, analytic or both");
}

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::analytic: return "analytic";
    case Engine::both: return "both";
  }
  return "exact";
}

struct Parsed {
  std::vector<ClusterSource> clusters;
  std::vector<BlockSource> blocks;
  std::optional<GridSpec> grid;
  std::optional<AnalyticDecl> analytic;
  std::optional<PlannerDecl> planner;
};

Parsed read_document(const json& doc, const LineIndex& lines) {
  ObjectReader top(doc, "", lines);
  Parsed p;
  top.take("description");

  const auto& clusters = top.array("clusters");
  if (clusters.empty()) top.fail("clusters", "at least one cluster is required");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    ObjectReader r(clusters[i], top.child("clusters", i), lines);
    p.clusters.push_back(read_cluster(r));
    r.finish();
  }

  ObjectReader seq(top.raw("sequence"), "sequence", lines);
  const auto& blocks = seq.array("blocks");
  if (blocks.empty()) seq.fail("blocks", "at least one block is required");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    ObjectReader r(blocks[i], seq.child("blocks", i), lines);
    p.blocks.push_back(read_block(r));
    r.finish();
  }
  seq.finish();

  if (top.take("scan")) {
    ObjectReader s(top.raw("scan"), "scan", lines);
    GridSpec g;
    g.engine = parse_engine(s.string_or("engine", "exact"), s);
    const auto& axes = s.array("axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      ObjectReader r(axes[i], s.child("axes", i), lines);
      g.axes.push_back(read_axis(r));
      r.finish();
    }
    s.finish();
    p.grid = std::move(g);
  }

  if (top.take("analytic")) {
    ObjectReader a(top.raw("analytic"), "analytic", lines);
    AnalyticDecl decl;
    decl.topology = a.string_or("topology", "");
    if (decl.topology.empty()) a.fail("topology", "missing required field");
    const auto& ts = a.array("transitions");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      ObjectReader r(ts[i], a.child("transitions", i), lines);
      decl.transitions.push_back({r.index("cluster"), r.index("m"), r.index("n")});
      r.finish();
    }
    a.finish();
    p.analytic = std::move(decl);
  }

  if (top.take("planner")) {
    ObjectReader r(top.raw("planner"), "planner", lines);
    PlannerDecl decl;
    if (r.take("F")) decl.fidelity = r.number("F");
    const bool a0 = r.take("alpha0");
    const bool a1 = r.take("alpha1");
    if (a0 || a1) decl.alphas = std::array<double, 2>{r.number("alpha0"), r.number("alpha1")};
    if (!decl.fidelity && !decl.alphas) r.fail("F", "give F or alpha0/alpha1");
    decl.snr = r.number_or("snr", decl.snr);
    decl.t_ir_us = r.number_or("t_ir_us", decl.t_ir_us);
    decl.pulse_step = r.integer_or("pulse_step", decl.pulse_step);
    r.finish();
    p.planner = decl;
  }

  top.finish();
  return p;
}

template <class F>
auto resolve(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(field, e.what());
  }
}

Scenario assemble(Parsed p) {
  std::vector<TargetCluster> clusters;
  for (std::size_t i = 0; i < p.clusters.size(); ++i) {
    clusters.push_back(resolve("clusters[" + std::to_string(i) + "]",
                               [&] { return build_cluster(p.clusters[i]); }));
  }
  SystemModel system(clusters);

  std::vector<Block> blocks;
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const std::string field = "sequence.blocks[" + std::to_string(i) + "]";
    blocks.push_back(resolve(field, [&] {
      return std::visit(overloaded{
                            [](const Block& b) { return b; },
                            [&](const ResonantBlock& b) {
                              if (b.cluster >= clusters.size()) {
                                throw ScenarioError(field + ".cluster", "no such cluster");
                              }
                              const auto t = transition(clusters[b.cluster], b.m, b.n);
                              return Block{resonant_tau(t.omega, b.order), b.n_pulses};
                            },
                        },
                        p.blocks[i]);
    }));
  }
  SequenceSpec sequence = resolve("sequence", [&] { return SequenceSpec(blocks); });

  std::optional<AnalyticModel> model;
  std::vector<TransitionSpec> transitions;
  if (p.analytic) {
    const auto& decl = *p.analytic;
    std::vector<int> dims;
    for (std::size_t i = 0; i < decl.transitions.size(); ++i) {
      const auto& ref = decl.transitions[i];
      const std::string field = "analytic.transitions[" + std::to_string(i) + "]";
      if (ref.cluster >= clusters.size()) throw ScenarioError(field + ".cluster", "no such cluster");
      transitions.push_back(
          resolve(field, [&] { return transition(clusters[ref.cluster], ref.m, ref.n); }));
      dims.push_back(static_cast<int>(clusters[ref.cluster].dim()));
    }
    model = resolve("analytic", [&] {
      const bool independent = decl.topology.find("independent") != std::string::npos;
      AnalyticModel m{parse_topology(decl.topology, independent ? std::span<const int>(dims)
                                                               : std::span<const int>()),
                      dims.empty() ? 0 : dims.front(),
                      {}};
      if (block_count(m.topology) != transitions.size()) {
        throw std::invalid_argument("topology '" + decl.topology + "' needs " +
                                    std::to_string(block_count(m.topology)) + " transitions");
      }
      if (!independent) {
        for (const auto& ref : decl.transitions) {
          if (ref.cluster != decl.transitions.front().cluster) {
            throw std::invalid_argument("single-cluster topology with transitions from several clusters");
          }
        }
      }
      for (const auto& t : transitions) m.deltas.push_back(t.delta);
      return m;
    });
    if (model->deltas.size() != sequence.size()) {
      throw ScenarioError("analytic.transitions", "need one transition per sequence block");
    }
    resolve("analytic", [&] { return model->evaluate(sequence); });
  }

  if (p.grid) {
    for (std::size_t i = 0; i < p.grid->axes.size(); ++i) {
      const std::string field = "scan.axes[" + std::to_string(i) + "]";
      const std::size_t block = std::visit([](const auto& a) { return a.block; }, p.grid->axes[i]);
      if (block >= sequence.size()) throw ScenarioError(field + ".block", "no such sequence block");
      resolve(field, [&] { return axis_values(p.grid->axes[i]); });
    }
    if (p.grid->engine != Engine::exact && !model) {
      throw ScenarioError("scan.engine", "analytic engine needs an 'analytic' section");
    }
  }

  if (p.planner) {
    const auto& pl = *p.planner;
    resolve("planner", [&] {
      const double f =
          pl.fidelity ? *pl.fidelity : readout_fidelity((*pl.alphas)[0], (*pl.alphas)[1]);
      if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("F must lie in (0, 1]");
      if (!(pl.snr > 0.0)) throw std::invalid_argument("snr must be > 0");
      if (!(pl.t_ir_us > 0.0)) throw std::invalid_argument("t_ir_us must be > 0");
      return f;
    });
  }

  return Scenario{std::move(p.clusters), std::move(p.blocks), std::move(p.grid),
                  std::move(p.analytic), std::move(p.planner), std::move(system),
                  std::move(sequence), std::move(model), std::move(transitions)};
}

}  // namespace

ScenarioError::ScenarioError(const std::string& field, const std::string& message, int line)
    : std::runtime_error(describe(line, field, message)), field_(field), line_(line) {}

TargetCluster build_cluster(const ClusterSource& source) {
  return std::visit(
      overloaded{
          [](const SpinOneSource& s) {
            auto c = spin_one_preset(s.f_a_mhz, s.f_b_mhz, s.lambda_khz);
            return TargetCluster(s.label, c.energies(), c.coupling());
          },
          [](const LadderSource& s) {
            auto c = ladder_preset(s.rung_freqs_mhz, s.rung_couplings_khz);
            return TargetCluster(s.label, c.energies(), c.coupling());
          },
          [](const RingSource& s) {
            auto c = ring_preset(s.f_1_mhz, s.f_2_mhz, s.couplings);
            return TargetCluster(s.label, c.energies(), c.coupling());
          },
          [](const StarSource& s) {
            auto c = star_preset(s.spoke_freqs_mhz, s.spoke_couplings);
            return TargetCluster(s.label, c.energies(), c.coupling());
          },
          [](const ExplicitSource& s) {
            std::vector<double> energies;
            for (double f : s.energies_mhz) energies.push_back(mhz_to_angular(f));
            std::vector<Coupling> couplings;
            for (const auto& c : s.couplings) {
              couplings.push_back({c.m, c.n, khz_to_angular(c.amplitude_khz), c.phase});
            }
            return new_cluster(s.label, energies, couplings);
          },
      },
      source);
}

Scenario parse_scenario_text(std::string_view text) {
  const LineIndex lines(text);
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("malformed JSON: ") + e.what(),
                        lines.line_of_offset(e.byte > 0 ? e.byte - 1 : 0));
  }
  return assemble(read_document(doc, lines));
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("", "cannot open scenario file '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_scenario_text(text);
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json doc;
  ordered_json clusters = ordered_json::array();
  for (const auto& src : s.cluster_sources) {
    clusters.push_back(std::visit(
        overloaded{
            [](const SpinOneSource& c) {
              return ordered_json{{"preset", "spin_one"},   {"label", c.label},
                                  {"f_a_MHz", c.f_a_mhz},   {"f_b_MHz", c.f_b_mhz},
                                  {"lambda_kHz", c.lambda_khz}};
            },
            [](const LadderSource& c) {
              ordered_json couplings = ordered_json::array();
              for (const auto& k : c.rung_couplings_khz) {
                couplings.push_back(k ? ordered_json(*k) : ordered_json(nullptr));
              }
              return ordered_json{{"preset", "ladder"},
                                  {"label", c.label},
                                  {"rung_freqs_MHz", c.rung_freqs_mhz},
                                  {"rung_couplings_kHz", couplings}};
            },
            [](const RingSource& c) {
              std::vector<double> amps, phases;
              for (const auto& k : c.couplings) {
                amps.push_back(k.amplitude_khz);
                phases.push_back(k.phase);
              }
              return ordered_json{{"preset", "ring"},       {"label", c.label},
                                  {"f_1_MHz", c.f_1_mhz},   {"f_2_MHz", c.f_2_mhz},
                                  {"couplings_kHz", amps},  {"phases_rad", phases}};
            },
            [](const StarSource& c) {
              std::vector<double> amps, phases;
              for (const auto& k : c.spoke_couplings) {
                amps.push_back(k.amplitude_khz);
                phases.push_back(k.phase);
              }
              return ordered_json{{"preset", "star"},
                                  {"label", c.label},
                                  {"spoke_freqs_MHz", c.spoke_freqs_mhz},
                                  {"spoke_couplings_kHz", amps},
                                  {"phases_rad", phases}};
            },
            [](const ExplicitSource& c) {
              ordered_json couplings = ordered_json::array();
              for (const auto& k : c.couplings) {
                couplings.push_back({{"m", k.m},
                                     {"n", k.n},
                                     {"amplitude_kHz", k.amplitude_khz},
                                     {"phase_rad", k.phase}});
              }
              return ordered_json{{"label", c.label},
                                  {"energies_MHz", c.energies_mhz},
                                  {"couplings", couplings}};
            },
        },
        src));
  }
  doc["clusters"] = clusters;

  ordered_json blocks = ordered_json::array();
  for (const auto& b : s.block_sources) {
    blocks.push_back(std::visit(
        overloaded{
            [](const Block& x) { return ordered_json{{"tau_us", x.tau_us}, {"n_pulses", x.n_pulses}}; },
            [](const ResonantBlock& x) {
              return ordered_json{{"cluster", x.cluster}, {"m", x.m},           {"n", x.n},
                                  {"order", x.order},     {"n_pulses", x.n_pulses}};
            },
        },
        b));
  }
  doc["sequence"] = {{"blocks", blocks}};

  if (s.grid) {
    ordered_json axes = ordered_json::array();
    for (const auto& a : s.grid->axes) {
      axes.push_back(std::visit(
          overloaded{
              [](const TauAxis& x) {
                return ordered_json{{"kind", "tau"},        {"block", x.block}, {"min_us", x.min_us},
                                    {"max_us", x.max_us},   {"steps", x.steps}};
              },
              [](const PulseAxis& x) {
                return ordered_json{{"kind", "pulses"}, {"block", x.block}, {"start", x.start},
                                    {"end", x.end},     {"step", x.step}};
              },
          },
          a));
    }
    doc["scan"] = {{"engine", engine_name(s.grid->engine)}, {"axes", axes}};
  }

  if (s.analytic) {
    ordered_json ts = ordered_json::array();
    for (const auto& t : s.analytic->transitions) {
      ts.push_back({{"cluster", t.cluster}, {"m", t.m}, {"n", t.n}});
    }
    doc["analytic"] = {{"topology", s.analytic->topology}, {"transitions", ts}};
  }

  if (s.planner) {
    ordered_json pl;
    if (s.planner->fidelity) pl["F"] = *s.planner->fidelity;
    if (s.planner->alphas) {
      pl["alpha0"] = (*s.planner->alphas)[0];
      pl["alpha1"] = (*s.planner->alphas)[1];
    }
    pl["snr"] = s.planner->snr;
    pl["t_ir_us"] = s.planner->t_ir_us;
    pl["pulse_step"] = s.planner->pulse_step;
    doc["planner"] = pl;
  }
  return doc;
}

}  // namespace ddcorr
