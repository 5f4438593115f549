// Serial reference vs OpenMP scan on the correlated-ladder unit cell.

#include "ddcorr/scan.hpp"
#include "ddcorr/sequence.hpp"
#include "ddcorr/spin_model.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <vector>

using namespace ddcorr;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;

  const std::vector<double> freqs{0.20, 0.14, 0.30};
  const std::vector<std::optional<double>> couplings{5.0, 5.04, std::nullopt};
  const TargetCluster ladder = ladder_preset(freqs, couplings);
  const auto t1 = transition(ladder, 1, 0);
  const auto t2 = transition(ladder, 2, 1);
  const SystemModel system({ladder});
  const SequenceSpec base({{resonant_tau(t1.omega), 0}, {resonant_tau(t2.omega), 0}});

  const auto n1 = static_cast<int>(std::lround(M_PI / t1.delta));
  const auto n2 = static_cast<int>(std::lround(M_PI / t2.delta));
  const GridSpec grid{{PulseAxis{0, 0, n1, 2}, PulseAxis{1, 0, n2, 2}}, Engine::exact};

  double serial = 1e300, parallel = 1e300;
  std::size_t points = 0;
  bool identical = true;
  for (int r = 0; r < repeats; ++r) {
    ScanTable a, b;
    serial = std::min(serial, seconds([&] { a = run_scan_serial(system, base, grid); }));
    parallel = std::min(parallel, seconds([&] { b = run_scan(system, base, grid); }));
    points = a.records.size();
    identical = identical && csv_string(a) == csv_string(b);
  }

  std::cout << std::setprecision(4);
  std::cout << "grid points      " << points << '\n';
  std::cout << "serial   best    " << serial << " s\n";
  std::cout << "parallel best    " << parallel << " s\n";
  std::cout << "speedup          " << serial / parallel << "x\n";
  std::cout << "outputs match    " << (identical ? "yes" : "NO") << '\n';
  return identical ? 0 : 1;
}
