#pragma once

// Per-grid-point kernel shared by the parallel and serial scan drivers.

#include "ddcorr/exact.hpp"
#include "ddcorr/scan.hpp"

#include <optional>
#include <vector>

namespace ddcorr::detail {

class ScanPlan {
 public:
  ScanPlan(const SystemModel& system, const SequenceSpec& base, const GridSpec& grid,
           const std::optional<AnalyticModel>& analytic);

  std::size_t point_count() const { return count_; }
  ScanRecord evaluate(std::size_t flat_index) const;
  ScanTable empty_table() const;

 private:
  std::vector<std::size_t> unflatten(std::size_t flat_index) const;

  std::vector<Block> base_blocks_;
  std::vector<Axis> axes_;
  std::vector<std::vector<double>> values_;
  std::vector<std::size_t> shape_;
  std::size_t count_ = 1;
  Engine engine_;
  std::vector<ConditionalEvolution> evolutions_;
  std::optional<AnalyticModel> analytic_;
};

}  // namespace ddcorr::detail
