#pragma once

#include "ddcorr/analytic.hpp"
#include "ddcorr/sequence.hpp"
#include "ddcorr/spin_model.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ddcorr {

enum class Engine { exact, analytic, both };

// Sweeps tau of one block over [min_us, max_us] in `steps` evenly spaced points.
struct TauAxis {
  std::size_t block = 0;
  double min_us = 0.0;
  double max_us = 0.0;
  int steps = 0;
};

// Sweeps the pulse count of one block over start, start + step, ..., <= end.
struct PulseAxis {
  std::size_t block = 0;
  int start = 0;
  int end = 0;
  int step = 2;
};

using Axis = std::variant<TauAxis, PulseAxis>;

struct GridSpec {
  std::vector<Axis> axes;  // 1 to 3 axes; axis 0 varies slowest
  Engine engine = Engine::exact;
};

std::vector<double> axis_values(const Axis& axis);
// CSV column name: tau<k>_us or n<k>, k = block + 1
std::string axis_name(const Axis& axis);

// Closed-form model matched to the scanned sequence: block i is resonant with
// a transition of contrast deltas[i], and N_i is read from the sequence.
struct AnalyticModel {
  DipTopology topology;
  int d = 0;
  std::vector<double> deltas;

  double evaluate(const SequenceSpec& spec) const;
};

struct ScanRecord {
  std::vector<double> coords;
  double re_L = 0.0;
  double im_L = 0.0;
  std::optional<double> analytic_L;
};

struct ScanTable {
  std::vector<std::string> axis_names;
  std::vector<std::size_t> shape;
  std::vector<ScanRecord> records;  // lexicographic in grid indices
  bool has_analytic = false;
};

// OpenMP-parallel grid evaluation. workers <= 0 uses the OpenMP default.
// Output is independent of the worker count.
ScanTable run_scan(const SystemModel& system, const SequenceSpec& base, const GridSpec& grid,
                   const std::optional<AnalyticModel>& analytic = std::nullopt, int workers = 0);

// Single-threaded reference implementation of run_scan.
ScanTable run_scan_serial(const SystemModel& system, const SequenceSpec& base,
                          const GridSpec& grid,
                          const std::optional<AnalyticModel>& analytic = std::nullopt);

struct Dip {
  double coordinate = 0.0;
  double value = 0.0;
};

inline constexpr double kDipThreshold = 0.9;

// Strict interior local minima of Re L below threshold along one axis. All
// other coordinates must be constant over the records.
std::vector<Dip> find_dips(const std::vector<ScanRecord>& records, std::size_t axis,
                           double threshold = kDipThreshold);

struct DipRegion {
  std::vector<double> coords;  // location of the region minimum
  double value = 0.0;
  std::size_t cells = 0;
};

// 4-connected regions of a 2D table with Re L below threshold.
std::vector<DipRegion> find_dip_regions(const ScanTable& table, double threshold);

enum class Correlation { correlated, uncorrelated, ambiguous };

inline constexpr double kAmbiguityBand = 0.1;

// Nearest of the quantized minima (d-4)/d (correlated) and (d-8)/d (uncorrelated).
Correlation classify_correlation(double measured_min, int d);
const char* to_string(Correlation c);

inline constexpr const char* kCsvMagic = "# ddcorr-scan v1";

std::string csv_string(const ScanTable& table);
void write_csv(const ScanTable& table, const std::filesystem::path& path);
// Binary PGM (P5, 16-bit big-endian), Re L in [-1, 1] -> [0, 65535];
// columns follow axis 0, rows follow axis 1, both ascending.
std::string heatmap_bytes(const ScanTable& table);
void write_heatmap(const ScanTable& table, const std::filesystem::path& path);

}  // namespace ddcorr
