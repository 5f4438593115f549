#include "ddcorr/spin_model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ddcorr {

namespace {

constexpr double kHermitianTol = 1e-12;

void set_pair(CMatrix& beta, std::size_t m, std::size_t n, double amplitude, double phase) {
  const Complex value = std::polar(amplitude, phase);
  beta(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = value;
  beta(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::conj(value);
}

}  // namespace

TargetCluster::TargetCluster(std::string label, RVector energies, CMatrix coupling)
    : label_(std::move(label)), energies_(std::move(energies)), coupling_(std::move(coupling)) {
  if (energies_.size() < 2) {
    throw std::invalid_argument("TargetCluster: dimension d must be >= 2");
  }
  if (coupling_.rows() != energies_.size() || coupling_.cols() != energies_.size()) {
    throw std::invalid_argument("TargetCluster: coupling matrix must be d x d");
  }
  if (!energies_.allFinite() || !coupling_.allFinite()) {
    throw std::invalid_argument("TargetCluster: non-finite entries");
  }
  if (hermiticity_error(coupling_) > kHermitianTol) {
    throw std::invalid_argument("TargetCluster: coupling matrix is not Hermitian");
  }
}

CMatrix TargetCluster::free_hamiltonian() const {
  return energies_.cast<Complex>().asDiagonal();
}

CMatrix TargetCluster::conditional_hamiltonian(int sensor_sign) const {
  CMatrix h = free_hamiltonian();
  h += (0.5 * sensor_sign) * coupling_;
  return h;
}

SystemModel::SystemModel(std::vector<TargetCluster> clusters) : clusters_(std::move(clusters)) {
  if (clusters_.empty()) {
    throw std::invalid_argument("SystemModel: at least one cluster is required");
  }
}

TargetCluster new_cluster(std::string label, std::span<const double> energies,
                          std::span<const Coupling> couplings) {
  const std::size_t d = energies.size();
  if (d < 2) {
    throw std::invalid_argument("new_cluster: dimension d must be >= 2");
  }
  RVector eps(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) eps(static_cast<Eigen::Index>(i)) = energies[i];

  CMatrix beta = CMatrix::Zero(eps.size(), eps.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : couplings) {
    if (c.m >= d || c.n >= d) {
      std::ostringstream msg;
      msg << "new_cluster: coupling (" << c.m << ", " << c.n << ") index out of range for d = " << d;
      throw std::invalid_argument(msg.str());
    }
    if (c.m == c.n) {
      throw std::invalid_argument("new_cluster: diagonal coupling entries are not allowed");
    }
    if (!(c.amplitude >= 0.0)) {
      throw std::invalid_argument("new_cluster: coupling amplitude must be >= 0");
    }
    const auto key = std::minmax(c.m, c.n);
    if (!seen.insert(key).second) {
      std::ostringstream msg;
      msg << "new_cluster: duplicate coupling entry (" << c.m << ", " << c.n << ")";
      throw std::invalid_argument(msg.str());
    }
    set_pair(beta, c.m, c.n, c.amplitude, c.phase);
  }
  return TargetCluster(std::move(label), std::move(eps), std::move(beta));
}

TargetCluster spin_one_preset(double f_a_mhz, double f_b_mhz, double lambda_khz) {
  if (!(f_a_mhz > 0.0) || !(f_b_mhz > 0.0) || !(lambda_khz > 0.0)) {
    throw std::invalid_argument("spin_one_preset: frequencies and lambda must be > 0");
  }
  if (f_a_mhz == f_b_mhz) {
    throw std::invalid_argument("spin_one_preset: degenerate transitions (f_a == f_b)");
  }
  const std::array<double, 3> energies{mhz_to_angular(f_b_mhz), 0.0, mhz_to_angular(f_a_mhz)};
  // lambda * J_x for spin 1: <+-1|J_x|0> = 1/sqrt(2)
  const double amp = khz_to_angular(lambda_khz) / std::sqrt(2.0);
  const std::array<Coupling, 2> couplings{Coupling{2, 1, amp, 0.0}, Coupling{1, 0, amp, 0.0}};
  return new_cluster("spin-1", energies, couplings);
}

TargetCluster ladder_preset(std::span<const double> rung_freqs_mhz,
                            std::span<const std::optional<double>> rung_couplings_khz) {
  if (rung_freqs_mhz.empty()) {
    throw std::invalid_argument("ladder_preset: empty rung list");
  }
  if (rung_couplings_khz.size() != rung_freqs_mhz.size()) {
    throw std::invalid_argument("ladder_preset: need one (optional) coupling per rung");
  }
  std::vector<double> energies{0.0};
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < rung_freqs_mhz.size(); ++i) {
    if (!(rung_freqs_mhz[i] > 0.0)) {
      throw std::invalid_argument("ladder_preset: rung frequencies must be > 0");
    }
    energies.push_back(energies.back() + mhz_to_angular(rung_freqs_mhz[i]));
    if (const auto& c = rung_couplings_khz[i]) {
      couplings.push_back({i + 1, i, khz_to_angular(*c), 0.0});
    }
  }
  return new_cluster("ladder", energies, couplings);
}

TargetCluster ring_preset(double f_1_mhz, double f_2_mhz,
                          const std::array<PhasedCoupling, 3>& couplings) {
  if (!(f_2_mhz > 0.0) || !(f_1_mhz > f_2_mhz)) {
    throw std::invalid_argument("ring_preset: require f_1 > f_2 > 0");
  }
  if (f_1_mhz == 2.0 * f_2_mhz) {
    throw std::invalid_argument("ring_preset: f_1 == 2 f_2 makes two transitions degenerate");
  }
  const std::array<double, 3> energies{0.0, mhz_to_angular(f_2_mhz), mhz_to_angular(f_1_mhz)};
  const std::array<Coupling, 3> pairs{
      Coupling{2, 0, khz_to_angular(couplings[0].amplitude_khz), couplings[0].phase},
      Coupling{1, 0, khz_to_angular(couplings[1].amplitude_khz), couplings[1].phase},
      Coupling{2, 1, khz_to_angular(couplings[2].amplitude_khz), couplings[2].phase},
  };
  return new_cluster("ring", energies, pairs);
}

TargetCluster star_preset(std::span<const double> spoke_freqs_mhz,
                          std::span<const PhasedCoupling> spoke_couplings) {
  if (spoke_freqs_mhz.empty() || spoke_freqs_mhz.size() != spoke_couplings.size()) {
    throw std::invalid_argument("star_preset: need one coupling per spoke");
  }
  std::vector<double> energies{0.0};
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < spoke_freqs_mhz.size(); ++i) {
    if (!(spoke_freqs_mhz[i] > 0.0)) {
      throw std::invalid_argument("star_preset: spoke frequencies must be > 0");
    }
    energies.push_back(mhz_to_angular(spoke_freqs_mhz[i]));
    couplings.push_back(
        {i + 1, 0, khz_to_angular(spoke_couplings[i].amplitude_khz), spoke_couplings[i].phase});
  }
  return new_cluster("star", energies, couplings);
}

TransitionSpec transition(const TargetCluster& cluster, std::size_t m, std::size_t n) {
  const std::size_t d = cluster.dim();
  if (m >= d || n >= d) {
    throw std::invalid_argument("transition: level index out of range");
  }
  if (m == n) {
    throw std::invalid_argument("transition: m and n must differ");
  }
  double omega = cluster.energies()(static_cast<Eigen::Index>(m)) -
                 cluster.energies()(static_cast<Eigen::Index>(n));
  if (omega == 0.0) {
    throw std::invalid_argument("transition: degenerate levels (omega = 0)");
  }
  if (omega < 0.0) {
    std::swap(m, n);
    omega = -omega;
  }
  const Complex beta = cluster.coupling()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  if (std::abs(beta) == 0.0) {
    throw std::invalid_argument("transition: dark transition (beta_mn = 0), no dip exists");
  }
  TransitionSpec t;
  t.m = m;
  t.n = n;
  t.omega = omega;
  t.beta_mag = std::abs(beta);
  t.kappa = std::arg(beta);  // omega > 0, so arg(beta / omega) = arg(beta)
  t.delta = t.beta_mag / omega;
  return t;
}

std::vector<Diagnostic> validate_weak_coupling(const TargetCluster& cluster) {
  std::vector<Diagnostic> out;
  const std::size_t d = cluster.dim();
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t n = 0; n < m; ++n) {
      const Complex beta =
          cluster.coupling()(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      if (std::abs(beta) == 0.0) continue;
      const double omega = std::abs(cluster.energies()(static_cast<Eigen::Index>(m)) -
                                    cluster.energies()(static_cast<Eigen::Index>(n)));
      std::ostringstream msg;
      msg << cluster.label() << ": transition (" << m << ", " << n << ") ";
      if (omega == 0.0) {
        msg << "couples degenerate levels";
        out.push_back({Severity::error, msg.str()});
        continue;
      }
      const double delta = std::abs(beta) / omega;
      if (delta >= kWeakCouplingError) {
        msg << "has delta = " << delta << " >= " << kWeakCouplingError << " (not weakly coupled)";
        out.push_back({Severity::error, msg.str()});
      } else if (delta > kWeakCouplingWarn) {
        msg << "has delta = " << delta << " > " << kWeakCouplingWarn
            << "; first-order dip formulas will be inaccurate";
        out.push_back({Severity::warning, msg.str()});
      }
    }
  }
  return out;
}

}  // namespace ddcorr
