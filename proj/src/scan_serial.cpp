#include "scan_kernel.hpp"

namespace ddcorr {

ScanTable run_scan_serial(const SystemModel& system, const SequenceSpec& base,
                          const GridSpec& grid, const std::optional<AnalyticModel>& analytic) {
  const detail::ScanPlan plan(system, base, grid, analytic);
  ScanTable table = plan.empty_table();
  table.records.reserve(plan.point_count());
  for (std::size_t i = 0; i < plan.point_count(); ++i) {
    table.records.push_back(plan.evaluate(i));
  }
  return table;
}

}  // namespace ddcorr
