#include "ddcorr/scan.hpp"

#include "scan_kernel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ddcorr {

namespace {

std::size_t axis_block(const Axis& axis) {
  return std::visit([](const auto& a) { return a.block; }, axis);
}

bool is_pulse_axis(const Axis& axis) { return std::holds_alternative<PulseAxis>(axis); }

}  // namespace

std::vector<double> axis_values(const Axis& axis) {
  if (const auto* tau = std::get_if<TauAxis>(&axis)) {
    if (tau->steps < 2) throw std::invalid_argument("tau axis: steps must be >= 2");
    if (!(tau->min_us > 0.0) || !(tau->max_us > tau->min_us)) {
      throw std::invalid_argument("tau axis: require 0 < min < max");
    }
    std::vector<double> v(static_cast<std::size_t>(tau->steps));
    const double span = tau->max_us - tau->min_us;
    for (int i = 0; i < tau->steps; ++i) {
      v[static_cast<std::size_t>(i)] =
          (i == tau->steps - 1) ? tau->max_us : tau->min_us + span * i / (tau->steps - 1);
    }
    return v;
  }
  const auto& pulse = std::get<PulseAxis>(axis);
  if (pulse.step < 1) throw std::invalid_argument("pulse axis: step must be >= 1");
  if (pulse.start < 0) throw std::invalid_argument("pulse axis: start must be >= 0");
  if (!(pulse.end > pulse.start)) throw std::invalid_argument("pulse axis: require start < end");
  std::vector<double> v;
  for (int n = pulse.start; n <= pulse.end; n += pulse.step) v.push_back(n);
  if (v.size() < 2) throw std::invalid_argument("pulse axis: fewer than 2 grid points");
  return v;
}

std::string axis_name(const Axis& axis) {
  const std::string k = std::to_string(axis_block(axis) + 1);
  return is_pulse_axis(axis) ? "n" + k : "tau" + k + "_us";
}

double AnalyticModel::evaluate(const SequenceSpec& spec) const {
  if (spec.size() != deltas.size()) {
    throw std::invalid_argument("analytic model: block count does not match transitions");
  }
  DipParams p{d, deltas, {}};
  for (const auto& b : spec.blocks()) p.pulses.push_back(b.n_pulses);
  return dip(topology, p);
}

namespace detail {

ScanPlan::ScanPlan(const SystemModel& system, const SequenceSpec& base, const GridSpec& grid,
                   const std::optional<AnalyticModel>& analytic)
    : base_blocks_(base.blocks()), axes_(grid.axes), engine_(grid.engine), analytic_(analytic) {
  if (axes_.empty() || axes_.size() > 3) {
    throw std::invalid_argument("scan: grid needs 1 to 3 axes");
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axis_block(axes_[i]) >= base_blocks_.size()) {
      throw std::invalid_argument("scan: axis " + std::to_string(i) + " refers to missing block " +
                                  std::to_string(axis_block(axes_[i])));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (axis_block(axes_[i]) == axis_block(axes_[j]) &&
          axes_[i].index() == axes_[j].index()) {
        throw std::invalid_argument("scan: two axes sweep the same block parameter");
      }
    }
    values_.push_back(axis_values(axes_[i]));
    shape_.push_back(values_.back().size());
    count_ *= shape_.back();
  }
  if (engine_ != Engine::exact) {
    if (!analytic_) {
      throw std::invalid_argument("scan: analytic engine requires a declared topology");
    }
    if (!std::all_of(axes_.begin(), axes_.end(), is_pulse_axis)) {
      throw std::invalid_argument("scan: analytic engine supports pulse-number axes only");
    }
    if (block_count(analytic_->topology) != base_blocks_.size() ||
        analytic_->deltas.size() != base_blocks_.size()) {
      throw std::invalid_argument("scan: topology dimension does not match sequence blocks");
    }
    analytic_->evaluate(base);  // surfaces dimension errors before the sweep
  }
  if (engine_ != Engine::analytic) {
    evolutions_.reserve(system.size());
    for (const auto& c : system.clusters()) evolutions_.emplace_back(c);
  }
}

std::vector<std::size_t> ScanPlan::unflatten(std::size_t flat_index) const {
  std::vector<std::size_t> idx(shape_.size());
  for (std::size_t a = shape_.size(); a-- > 0;) {
    idx[a] = flat_index % shape_[a];
    flat_index /= shape_[a];
  }
  return idx;
}

ScanRecord ScanPlan::evaluate(std::size_t flat_index) const {
  const auto idx = unflatten(flat_index);
  ScanRecord rec;
  auto blocks = base_blocks_;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const double v = values_[a][idx[a]];
    rec.coords.push_back(v);
    auto& b = blocks[axis_block(axes_[a])];
    if (is_pulse_axis(axes_[a])) {
      b.n_pulses = static_cast<int>(v);
    } else {
      b.tau_us = v;
    }
  }
  const SequenceSpec spec(std::move(blocks));
  if (engine_ != Engine::analytic) {
    const auto timeline = build_timeline(spec);
    Complex l{1.0, 0.0};
    for (const auto& ev : evolutions_) l *= ev.coherence(timeline);
    rec.re_L = l.real();
    rec.im_L = l.imag();
  }
  if (engine_ == Engine::analytic) {
    rec.re_L = analytic_->evaluate(spec);
    rec.im_L = 0.0;
  } else if (engine_ == Engine::both) {
    rec.analytic_L = analytic_->evaluate(spec);
  }
  return rec;
}

ScanTable ScanPlan::empty_table() const {
  ScanTable t;
  for (const auto& a : axes_) t.axis_names.push_back(axis_name(a));
  t.shape = shape_;
  t.has_analytic = engine_ == Engine::both;
  return t;
}

}  // namespace detail

ScanTable run_scan(const SystemModel& system, const SequenceSpec& base, const GridSpec& grid,
                   const std::optional<AnalyticModel>& analytic, int workers) {
  const detail::ScanPlan plan(system, base, grid, analytic);
  ScanTable table = plan.empty_table();
  const auto n = static_cast<std::ptrdiff_t>(plan.point_count());
  table.records.resize(plan.point_count());
  const int threads = workers > 0 ? workers : omp_get_max_threads();

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      table.records[static_cast<std::size_t>(i)] = plan.evaluate(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(ddcorr_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::vector<Dip> find_dips(const std::vector<ScanRecord>& records, std::size_t axis,
                           double threshold) {
  if (records.empty()) return {};
  for (const auto& r : records) {
    if (axis >= r.coords.size()) throw std::invalid_argument("find_dips: axis out of range");
    for (std::size_t a = 0; a < r.coords.size(); ++a) {
      if (a != axis && r.coords[a] != records.front().coords[a]) {
        throw std::invalid_argument("find_dips: records are not a 1D slice");
      }
    }
  }
  std::vector<const ScanRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [axis](const auto* a, const auto* b) {
    return a->coords[axis] < b->coords[axis];
  });
  std::vector<Dip> dips;
  for (std::size_t i = 1; i + 1 < sorted.size(); ++i) {
    const double v = sorted[i]->re_L;
    if (v < threshold && v < sorted[i - 1]->re_L && v < sorted[i + 1]->re_L) {
      dips.push_back({sorted[i]->coords[axis], v});
    }
  }
  return dips;
}

std::vector<DipRegion> find_dip_regions(const ScanTable& table, double threshold) {
  if (table.shape.size() != 2) throw std::invalid_argument("find_dip_regions: need a 2D grid");
  const std::size_t nx = table.shape[0];
  const std::size_t ny = table.shape[1];
  if (table.records.size() != nx * ny) {
    throw std::invalid_argument("find_dip_regions: record count does not match shape");
  }
  auto at = [&](std::size_t i, std::size_t j) -> const ScanRecord& {
    return table.records[i * ny + j];
  };
  std::vector<int> label(nx * ny, -1);
  std::vector<DipRegion> regions;
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t i0 = 0; i0 < nx; ++i0) {
    for (std::size_t j0 = 0; j0 < ny; ++j0) {
      if (label[i0 * ny + j0] >= 0 || !(at(i0, j0).re_L < threshold)) continue;
      const int id = static_cast<int>(regions.size());
      DipRegion region{at(i0, j0).coords, at(i0, j0).re_L, 0};
      stack.push_back({i0, j0});
      label[i0 * ny + j0] = id;
      while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        ++region.cells;
        const auto& r = at(i, j);
        if (r.re_L < region.value) {
          region.value = r.re_L;
          region.coords = r.coords;
        }
        const std::pair<std::ptrdiff_t, std::ptrdiff_t> steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& [di, dj] : steps) {
          const auto ni = static_cast<std::ptrdiff_t>(i) + di;
          const auto nj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ni < 0 || nj < 0 || ni >= static_cast<std::ptrdiff_t>(nx) ||
              nj >= static_cast<std::ptrdiff_t>(ny)) {
            continue;
          }
          const auto k = static_cast<std::size_t>(ni) * ny + static_cast<std::size_t>(nj);
          if (label[k] < 0 && table.records[k].re_L < threshold) {
            label[k] = id;
            stack.push_back({static_cast<std::size_t>(ni), static_cast<std::size_t>(nj)});
          }
        }
      }
      regions.push_back(std::move(region));
    }
  }
  return regions;
}

Correlation classify_correlation(double measured_min, int d) {
  if (d < 3) throw std::invalid_argument("classify_correlation: d must be >= 3");
  const double correlated = (d - 4.0) / d;
  if (d == 3) return Correlation::correlated;  // (d-8)/d is undefined below d = 4
  const double uncorrelated = (d - 8.0) / d;
  const double midpoint = 0.5 * (correlated + uncorrelated);
  if (std::abs(measured_min - midpoint) < kAmbiguityBand) return Correlation::ambiguous;
  return std::abs(measured_min - correlated) < std::abs(measured_min - uncorrelated)
             ? Correlation::correlated
             : Correlation::uncorrelated;
}

const char* to_string(Correlation c) {
  switch (c) {
    case Correlation::correlated: return "correlated";
    case Correlation::uncorrelated: return "uncorrelated";
    case Correlation::ambiguous: return "ambiguous";
  }
  return "?";
}

std::string csv_string(const ScanTable& table) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kCsvMagic << '\n';
  for (const auto& name : table.axis_names) out << name << ',';
  out << "re_L,im_L";
  if (table.has_analytic) out << ",analytic_L";
  out << '\n';
  for (const auto& r : table.records) {
    for (double c : r.coords) out << c << ',';
    out << r.re_L << ',' << r.im_L;
    if (table.has_analytic) out << ',' << r.analytic_L.value_or(std::nan(""));
    out << '\n';
  }
  return out.str();
}

namespace {

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void write_csv(const ScanTable& table, const std::filesystem::path& path) {
  write_bytes(path, csv_string(table));
}

std::string heatmap_bytes(const ScanTable& table) {
  if (table.shape.size() != 2) throw std::invalid_argument("heatmap: need a 2D grid");
  const std::size_t width = table.shape[0];
  const std::size_t height = table.shape[1];
  std::string bytes = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      const double v = std::clamp(table.records[col * height + row].re_L, -1.0, 1.0);
      const auto pixel = static_cast<unsigned>(std::lround((v + 1.0) / 2.0 * 65535.0));
      bytes.push_back(static_cast<char>((pixel >> 8) & 0xFF));
      bytes.push_back(static_cast<char>(pixel & 0xFF));
    }
  }
  return bytes;
}

void write_heatmap(const ScanTable& table, const std::filesystem::path& path) {
  write_bytes(path, heatmap_bytes(table));
}

}  // namespace ddcorr
